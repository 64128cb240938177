#pragma once

#include <mutex>

namespace deltanls::detail {

// FFTW planning is not thread safe; every planner call in the library takes this lock.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace deltanls::detail
