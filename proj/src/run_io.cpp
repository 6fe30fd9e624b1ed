#include "graphnls/run_io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "graphnls/baselines.hpp"
#include "graphnls/graph_io.hpp"
#include "graphnls/version.hpp"

namespace graphnls {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_real(Real v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() < 3 || parts.size() > 4)
    throw std::invalid_argument("grid must be start:stop:count[:log]");
  try {
    g.start = std::stod(parts[0]);
    g.stop = std::stod(parts[1]);
    g.count = std::stoi(parts[2]);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed grid: " + text);
  }
  if (parts.size() == 4) {
    if (parts[3] != "log")
      throw std::invalid_argument("grid modifier must be 'log'");
    g.log = true;
  }
  if (!(g.start > 0) || !(g.stop >= g.start) || g.count < 1)
    throw std::invalid_argument("grid requires 0 < start <= stop, count >= 1");
  return g;
}

std::vector<Real> expand_grid(const GridSpec& g) {
  std::vector<Real> xs;
  if (g.count == 1) return {g.start};
  for (int i = 0; i < g.count; ++i) {
    Real t = static_cast<Real>(i) / (g.count - 1);
    xs.push_back(g.log ? g.start * std::pow(g.stop / g.start, t)
                       : g.start + (g.stop - g.start) * t);
  }
  return xs;
}

MetricGraph make_graph(const GraphSpec& spec) {
  if (!spec.json_path.empty()) return load_graph_json(spec.json_path);
  if (spec.name.empty())
    throw std::invalid_argument("graph spec needs a name or a JSON path");
  return build_named(spec.name, spec.lengths, spec.truncation);
}

namespace {

json cfg_to_json(const SolverConfig& c) {
  return json{{"target_h", c.target_h},
              {"grad_tol", c.grad_tol},
              {"mass_tol", c.mass_tol},
              {"max_iters", c.max_iters},
              {"step_min", c.step_min},
              {"step_max", c.step_max},
              {"armijo_c", c.armijo_c},
              {"restarts", c.restarts},
              {"seed", c.seed},
              {"lambda_tol", c.lambda_tol},
              {"energy_tol", c.energy_tol},
              {"action_tol", c.action_tol},
              {"resolve_factor", c.resolve_factor},
              {"threads", c.threads}};
}

SolverConfig cfg_from_json(const json& j) {
  SolverConfig c;
  c.target_h = j.value("target_h", c.target_h);
  c.grad_tol = j.value("grad_tol", c.grad_tol);
  c.mass_tol = j.value("mass_tol", c.mass_tol);
  c.max_iters = j.value("max_iters", c.max_iters);
  c.step_min = j.value("step_min", c.step_min);
  c.step_max = j.value("step_max", c.step_max);
  c.armijo_c = j.value("armijo_c", c.armijo_c);
  c.restarts = j.value("restarts", c.restarts);
  c.seed = j.value("seed", c.seed);
  c.lambda_tol = j.value("lambda_tol", c.lambda_tol);
  c.energy_tol = j.value("energy_tol", c.energy_tol);
  c.action_tol = j.value("action_tol", c.action_tol);
  c.resolve_factor = j.value("resolve_factor", c.resolve_factor);
  c.threads = j.value("threads", c.threads);
  return c;
}

std::string now_iso8601() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
  return buf;
}

}  // namespace

std::string manifest_to_json(const RunManifest& man) {
  json j;
  j["command"] = man.command;
  json jg;
  if (!man.graph.json_path.empty()) {
    jg["json_path"] = man.graph.json_path;
  } else {
    jg["name"] = man.graph.name;
    if (!man.graph.lengths.empty()) jg["lengths"] = man.graph.lengths;
  }
  jg["truncation"] = man.graph.truncation;
  j["graph"] = jg;
  j["p"] = man.p;
  if (man.grid)
    j["grid"] = json{{"start", man.grid->start},
                     {"stop", man.grid->stop},
                     {"count", man.grid->count},
                     {"log", man.grid->log}};
  if (man.mu) j["mu"] = *man.mu;
  if (man.lambda) j["lambda"] = *man.lambda;
  if (man.margin) j["margin"] = *man.margin;
  if (!man.ps.empty()) j["ps"] = man.ps;
  j["config"] = cfg_to_json(man.cfg);
  j["version"] = man.version.empty() ? kVersion : man.version;
  j["timestamp"] = man.timestamp.empty() ? now_iso8601() : man.timestamp;
  return j.dump(2);
}

RunManifest manifest_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("manifest JSON: ") + e.what());
  }
  RunManifest man;
  man.command = j.value("command", "");
  if (j.contains("graph")) {
    const json& jg = j["graph"];
    man.graph.name = jg.value("name", "");
    man.graph.json_path = jg.value("json_path", "");
    if (jg.contains("lengths"))
      man.graph.lengths = jg["lengths"].get<std::vector<Real>>();
    man.graph.truncation = jg.value("truncation", 40.0);
  }
  man.p = j.value("p", 6.0);
  if (j.contains("grid")) {
    GridSpec g;
    g.start = j["grid"].value("start", 1.0);
    g.stop = j["grid"].value("stop", 1.0);
    g.count = j["grid"].value("count", 1);
    g.log = j["grid"].value("log", false);
    man.grid = g;
  }
  if (j.contains("mu")) man.mu = j["mu"].get<Real>();
  if (j.contains("lambda")) man.lambda = j["lambda"].get<Real>();
  if (j.contains("margin")) man.margin = j["margin"].get<Real>();
  if (j.contains("ps")) man.ps = j["ps"].get<std::vector<Real>>();
  if (j.contains("config")) man.cfg = cfg_from_json(j["config"]);
  man.version = j.value("version", "");
  man.timestamp = j.value("timestamp", "");
  return man;
}

RunManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open manifest: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return manifest_from_json(ss.str());
}

void write_branch_csv(const BranchTable& table, std::ostream& out) {
  bool lambda_axis = table.axis == BranchAxis::Lambda;
  out << (lambda_axis ? "lambda,j_level,m_minus,m_plus"
                      : "mass,energy,lambda_minus,lambda_plus")
      << ",n_restarts,n_near_optimal,converged,flagged\n";
  for (const BranchPoint& pt : table.points) {
    out << format_real(pt.x) << ',' << format_real(pt.level) << ','
        << format_real(pt.branch_minus) << ',' << format_real(pt.branch_plus)
        << ',' << pt.n_restarts << ',' << pt.n_near_optimal << ','
        << (pt.converged ? 1 : 0) << ',' << (pt.flagged ? 1 : 0) << '\n';
  }
}

namespace {

std::string graph_label(const RunManifest& man) {
  if (!man.graph.json_path.empty())
    return fs::path(man.graph.json_path).stem().string();
  return man.graph.name;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

json energy_record_json(const GroundStateRecord& r) {
  return json{{"mass", r.mass},
              {"lambda", r.lambda},
              {"energy", r.energy},
              {"action_at_lambda", r.action_at_lambda},
              {"grad_norm", r.grad_norm},
              {"nlse_interior_residual", r.nlse_interior_residual},
              {"kirchhoff_residual", r.kirchhoff_residual},
              {"restart", r.restarts_used},
              {"iterations", r.iterations},
              {"converged", r.converged}};
}

json action_record_json(const ActionRecord& r) {
  return json{{"lambda", r.lambda},
              {"mass", r.mass},
              {"action", r.action},
              {"lp_norm_p", r.lp_norm_p},
              {"grad_norm", r.grad_norm},
              {"nlse_interior_residual", r.nlse_interior_residual},
              {"kirchhoff_residual", r.kirchhoff_residual},
              {"restart", r.restarts_used},
              {"iterations", r.iterations},
              {"converged", r.converged}};
}

}  // namespace

RunResult execute(const RunManifest& man, const std::string& out_dir,
                  bool allow_nonconverged, std::ostream* log) {
  RunResult res;
  std::ostream& os = log ? *log : std::cout;
  fs::create_directories(out_dir);
  auto path_in = [&](const std::string& name) {
    return (fs::path(out_dir) / name).string();
  };
  write_file(path_in("manifest.json"), manifest_to_json(man) + "\n");
  res.outputs.push_back(path_in("manifest.json"));

  auto emit_summary = [&](const std::string& header, const std::string& row) {
    std::string path = path_in("summary.csv");
    write_file(path, header + "\n" + row + "\n");
    res.summary_csv = path;
    res.outputs.push_back(path);
  };

  const std::string& cmd = man.command;
  if (cmd == "baselines") {
    std::ostringstream csv;
    csv << "name,value\n";
    csv << "mu_R," << format_real(mu_line()) << '\n';
    csv << "mu_R_plus," << format_real(mu_halfline()) << '\n';
    csv << "phi1_at_0," << format_real(phi1(0)) << '\n';
    csv << "j6_line_at_1," << format_real(j6_line(1)) << '\n';
    csv << "j6_halfline_at_1," << format_real(j6_halfline(1)) << '\n';
    csv << "ladder_limit_mass," << format_real(ladder_limit_mass()) << '\n';
    csv << "phi_tilde_at_0," << format_real(phi_tilde(0)) << '\n';
    std::string path = path_in("summary.csv");
    write_file(path, csv.str());
    res.summary_csv = path;
    res.outputs.push_back(path);
    os << csv.str();
    return res;
  }

  MetricGraph g = make_graph(man.graph);

  if (cmd == "solve-energy") {
    if (!man.mu) throw std::invalid_argument("solve-energy requires --mu");
    EnergyMultistart ms = multistart_energy(g, man.p, *man.mu, man.cfg);
    json recs = json::array();
    for (const auto& r : ms.records) recs.push_back(energy_record_json(r));
    write_file(path_in("records.json"), recs.dump(2) + "\n");
    res.outputs.push_back(path_in("records.json"));
    emit_summary("graph,p,mu,lambda_minus,lambda_plus,energy",
                 graph_label(man) + "," + format_real(man.p) + "," +
                     format_real(*man.mu) + "," + format_real(ms.lambda_minus) +
                     "," + format_real(ms.lambda_plus) + "," +
                     format_real(ms.best_energy));
    os << "energy " << format_real(ms.best_energy) << " lambda ["
       << format_real(ms.lambda_minus) << ", " << format_real(ms.lambda_plus)
       << "]\n";
    if (!ms.any_converged && !allow_nonconverged) res.exit_code = 3;
    return res;
  }

  if (cmd == "solve-action") {
    if (!man.lambda)
      throw std::invalid_argument("solve-action requires --lambda");
    SolverConfig cfg = man.cfg;
    cfg.target_h = std::min(cfg.target_h,
                            cfg.resolve_factor / std::sqrt(*man.lambda));
    ActionMultistart ms = multistart_action(g, man.p, *man.lambda, cfg);
    json recs = json::array();
    for (const auto& r : ms.records) recs.push_back(action_record_json(r));
    write_file(path_in("records.json"), recs.dump(2) + "\n");
    res.outputs.push_back(path_in("records.json"));
    emit_summary("graph,p,lambda,m_minus,m_plus,j_level",
                 graph_label(man) + "," + format_real(man.p) + "," +
                     format_real(*man.lambda) + "," + format_real(ms.m_minus) +
                     "," + format_real(ms.m_plus) + "," +
                     format_real(ms.j_level));
    os << "action " << format_real(ms.j_level) << " mass ["
       << format_real(ms.m_minus) << ", " << format_real(ms.m_plus) << "]\n";
    if (!ms.any_converged && !allow_nonconverged) res.exit_code = 3;
    return res;
  }

  if (cmd == "trace-lambda" || cmd == "trace-mass" ||
      cmd == "detect-inversion") {
    if (!man.grid)
      throw std::invalid_argument(cmd + " requires --grid start:stop:count[:log]");
    std::vector<Real> xs = expand_grid(*man.grid);
    BranchTable table =
        (cmd == "trace-mass")
            ? trace_energy_branch(g, man.p, xs, man.cfg)
            : trace_action_branch(g, man.p, xs, man.cfg);
    std::ostringstream csv;
    write_branch_csv(table, csv);
    std::string path = path_in("table.csv");
    write_file(path, csv.str());
    res.summary_csv = path;
    res.outputs.push_back(path);
    os << csv.str();

    bool bad_point = false;
    for (const auto& pt : table.points) bad_point |= pt.flagged;

    if (cmd == "detect-inversion") {
      Real margin = man.margin ? *man.margin : 3 * man.cfg.mass_tol;
      std::optional<InversionWitness> w = find_inversion(table, margin);
      json jw;
      jw["found"] = w.has_value();
      jw["margin_required"] = margin;
      if (w)
        jw["witness"] = json{{"lambda1", w->lambda1},
                             {"lambda2", w->lambda2},
                             {"m_minus_at_1", w->m_minus_at_1},
                             {"m_plus_at_2", w->m_plus_at_2},
                             {"margin", w->margin}};
      write_file(path_in("witness.json"), jw.dump(2) + "\n");
      res.outputs.push_back(path_in("witness.json"));
      os << (w ? "inversion witness found\n" : "no inversion witness\n");
    }
    if (bad_point && !allow_nonconverged) res.exit_code = 3;
    return res;
  }

  if (cmd == "detect-z") {
    if (!man.grid)
      throw std::invalid_argument("detect-z requires --grid lo:hi:1 (mass window)");
    auto witnesses = find_z_points(g, man.p,
                                   {man.grid->start, man.grid->stop}, man.cfg);
    json jw = json::array();
    for (const auto& w : witnesses)
      jw.push_back(json{{"p", w.p},
                        {"mass", w.mass},
                        {"lambda_low", w.lambda_low},
                        {"lambda_high", w.lambda_high},
                        {"energy_gap", w.energy_gap}});
    write_file(path_in("witnesses.json"), jw.dump(2) + "\n");
    res.outputs.push_back(path_in("witnesses.json"));
    std::ostringstream csv;
    csv << "p,mass,lambda_low,lambda_high,energy_gap\n";
    for (const auto& w : witnesses)
      csv << format_real(w.p) << ',' << format_real(w.mass) << ','
          << format_real(w.lambda_low) << ',' << format_real(w.lambda_high)
          << ',' << format_real(w.energy_gap) << '\n';
    std::string path = path_in("summary.csv");
    write_file(path, csv.str());
    res.summary_csv = path;
    res.outputs.push_back(path);
    os << witnesses.size() << " z-point witness(es)\n";
    return res;
  }

  if (cmd == "verify") {
    std::vector<Real> ps = man.ps.empty()
                               ? std::vector<Real>{3.0, 4.0, 5.5, 6.0}
                               : man.ps;
    VerifyReport rep = run_invariant_suite(g, ps, man.cfg);
    std::ostringstream csv;
    csv << "check,observed,bound,ok\n";
    for (const auto& c : rep.checks)
      csv << '"' << c.label << "\"," << format_real(c.observed) << ','
          << format_real(c.bound) << ',' << (c.ok ? 1 : 0) << '\n';
    std::string path = path_in("summary.csv");
    write_file(path, csv.str());
    res.summary_csv = path;
    res.outputs.push_back(path);
    for (const auto& c : rep.checks)
      if (!c.ok)
        os << "FAIL " << c.label << ": " << format_real(c.observed) << " > "
           << format_real(c.bound) << '\n';
    os << (rep.all_ok ? "all invariants hold\n" : "invariant failures\n");
    if (!rep.all_ok) res.exit_code = 3;
    return res;
  }

  throw std::invalid_argument("unknown command: " + cmd);
}

}  // namespace graphnls
