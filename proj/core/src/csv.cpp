#include "deltanls/csv.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace deltanls {

namespace {

void flatten(const nlohmann::json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
  } else if (j.is_array()) {
    // Short numeric arrays stay on one line; anything nested is expanded.
    bool scalar = true;
    for (const auto& e : j) scalar = scalar && (e.is_number() || e.is_string() || e.is_boolean());
    if (scalar) {
      std::string s = "[";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) s += ",";
        s += j[i].is_number() ? format_number(j[i].get<double>()) : j[i].dump();
      }
      out.emplace_back(prefix, s + "]");
    } else {
      for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
    }
  } else if (j.is_string()) {
    out.emplace_back(prefix, j.get<std::string>());
  } else if (j.is_number()) {
    out.emplace_back(prefix, format_number(j.get<double>()));
  } else {
    out.emplace_back(prefix, j.dump());
  }
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::pair<std::string, std::string>> flatten_metadata(const nlohmann::json& config) {
  std::vector<std::pair<std::string, std::string>> out;
  flatten(config, "", out);
  return out;
}

void write_csv(std::ostream& os, const CsvTable& table) {
  for (const auto& [k, v] : table.meta) os << "# " << k << '=' << v << '\n';
  for (std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << table.columns[c];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_number(row[c]);
    os << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_csv(os, table);
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

CsvTable charge_table(const ChargeTrajectory& traj) {
  CsvTable t;
  t.columns = {"t", "re_q", "im_q", "abs_q", "re_forcing", "im_forcing"};
  for (std::size_t n = 0; n < traj.q.size(); ++n) {
    const Complex f = n < traj.forcing.size() ? traj.forcing[n] : Complex(0.0);
    t.rows.push_back({traj.time(n), traj.q[n].real(), traj.q[n].imag(), std::abs(traj.q[n]), f.real(), f.imag()});
  }
  return t;
}

CsvTable snapshot_table(const FieldSnapshot& snap) {
  CsvTable t;
  const bool grad = !snap.gradients.empty();
  t.columns = {snap.d == Dim::One ? "x" : "r", "re_psi", "im_psi", "abs_psi"};
  if (grad) {
    t.columns.push_back("re_grad");
    t.columns.push_back("im_grad");
  }
  for (std::size_t k = 0; k < snap.values.size(); ++k) {
    std::vector<double> row{snap.grid.points[k], snap.values[k].real(), snap.values[k].imag(), std::abs(snap.values[k])};
    if (grad) {
      row.push_back(snap.gradients[k].real());
      row.push_back(snap.gradients[k].imag());
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace deltanls
