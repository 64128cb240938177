#pragma once

// Plot-ready CSV output. Every file starts with a `# key=value` block holding the resolved
// configuration, then a header row. Numbers use %.17g so files round-trip and are
// byte-identical across runs.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "deltanls/charge.hpp"
#include "deltanls/field.hpp"

namespace deltanls {

struct CsvTable {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string format_number(double v);

/// Flattens a JSON tree to dotted keys ("model.beta", "approx.eps") with object keys sorted.
std::vector<std::pair<std::string, std::string>> flatten_metadata(const nlohmann::json& config);

void write_csv(std::ostream& os, const CsvTable& table);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// t, re_q, im_q, abs_q, re_forcing, im_forcing
CsvTable charge_table(const ChargeTrajectory& traj);
/// x (or r), re_psi, im_psi, abs_psi [, re_grad, im_grad]
CsvTable snapshot_table(const FieldSnapshot& snap);

}  // namespace deltanls
