#pragma once

#include <optional>
#include <string>
#include <vector>

#include "graphnls/sweep.hpp"
#include "graphnls/verify.hpp"

namespace graphnls {

struct GridSpec {
  Real start = 0;
  Real stop = 0;
  int count = 0;
  bool log = false;
};

/// "start:stop:count[:log]"
GridSpec parse_grid(const std::string& text);
std::vector<Real> expand_grid(const GridSpec& grid);

struct GraphSpec {
  std::string name;            // named builder, or empty when json_path set
  std::vector<Real> lengths;   // builder length overrides
  Real truncation = 40.0;
  std::string json_path;
};

MetricGraph make_graph(const GraphSpec& spec);

/// Everything needed to reproduce a run bit-for-bit on the same build.
struct RunManifest {
  std::string command;
  GraphSpec graph;
  Real p = 6.0;
  std::optional<GridSpec> grid;
  std::optional<Real> mu;
  std::optional<Real> lambda;
  std::optional<Real> margin;
  SolverConfig cfg;
  std::vector<Real> ps;  // verify only
  std::string version;
  std::string timestamp;  // informational; not part of any summary output
};

std::string manifest_to_json(const RunManifest& man);
RunManifest manifest_from_json(const std::string& text);
RunManifest load_manifest(const std::string& path);

struct RunResult {
  int exit_code = 0;            // 0 ok, 2 validation, 3 non-convergence
  std::string summary_csv;      // path of the summary table, if any
  std::vector<std::string> outputs;
};

/// Execute a manifest, writing manifest + CSV/JSON outputs into out_dir.
/// Commands: baselines, solve-energy, solve-action, trace-lambda,
/// trace-mass, detect-inversion, detect-z, verify.
RunResult execute(const RunManifest& man, const std::string& out_dir,
                  bool allow_nonconverged = false, std::ostream* log = nullptr);

std::string format_real(Real v);

void write_branch_csv(const BranchTable& table, std::ostream& out);

}  // namespace graphnls
