#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "graphnls/run_io.hpp"
#include "graphnls/version.hpp"

namespace {

using namespace graphnls;

int run_from_manifest_check(const std::string& manifest_path) {
  RunManifest man = load_manifest(manifest_path);
  std::filesystem::path src_dir =
      std::filesystem::path(manifest_path).parent_path();
  std::filesystem::path tmp_dir = src_dir / "verify_rerun";
  std::ostringstream sink;
  RunResult rerun = execute(man, tmp_dir.string(), true, &sink);
  if (rerun.summary_csv.empty()) {
    std::cout << "manifest rerun produced no summary to compare\n";
    return 0;
  }
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  std::filesystem::path original =
      src_dir / std::filesystem::path(rerun.summary_csv).filename();
  if (!std::filesystem::exists(original)) {
    std::cerr << "original summary " << original << " not found\n";
    return 2;
  }
  if (slurp(original) == slurp(rerun.summary_csv)) {
    std::cout << "summary reproduced byte-for-byte\n";
    return 0;
  }
  std::cerr << "summary differs from the manifest's recorded run\n";
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NLS ground states on metric graphs"};
  app.set_help_flag("--help", "print help");  // leave -h free for --h
  app.set_version_flag("--version", graphnls::kVersion);
  app.require_subcommand(1);

  RunManifest man;
  std::string out_dir = "out";
  std::string grid_text;
  std::string lengths_text;
  std::string manifest_path;
  bool allow_nonconverged = false;

  auto add_common = [&](CLI::App* sub, bool needs_graph) {
    sub->set_help_flag("--help", "print help");
    if (needs_graph) {
      sub->add_option("--graph", man.graph.name,
                      "named graph (segment, circle, star(k), tadpole, "
                      "tgraph, signpost, fork2, fork3, ladder(N), line, "
                      "halfline)");
      sub->add_option("--graph-json", man.graph.json_path,
                      "path of a graph JSON file");
      sub->add_option("--lengths", lengths_text,
                      "comma-separated edge length overrides");
      sub->add_option("--trunc", man.graph.truncation,
                      "half-line truncation length");
    }
    sub->add_option("--p", man.p, "nonlinearity power");
    sub->add_option("--h", man.cfg.target_h, "mesh target spacing");
    sub->add_option("--restarts", man.cfg.restarts, "multistart count");
    sub->add_option("--seed", man.cfg.seed, "RNG seed");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--max-iters", man.cfg.max_iters, "iteration cap");
    sub->add_option("--grad-tol", man.cfg.grad_tol, "gradient tolerance");
    sub->add_option("--lambda-tol", man.cfg.lambda_tol,
                    "multiplier distinctness tolerance");
    sub->add_option("--energy-tol", man.cfg.energy_tol,
                    "near-optimal energy band");
    sub->add_option("--action-tol", man.cfg.action_tol,
                    "near-optimal action band");
    sub->add_option("--mass-tol", man.cfg.mass_tol,
                    "mass tolerance / branch distinctness");
    sub->add_option("--threads", man.cfg.threads,
                    "worker cap (also GRAPHNLS_THREADS)");
    sub->add_flag("--allow-nonconverged", allow_nonconverged,
                  "exit 0 even when some solves did not converge");
  };

  CLI::App* baselines = app.add_subcommand("baselines", "print the constants table");
  add_common(baselines, false);

  CLI::App* se = app.add_subcommand("solve-energy",
                                    "mass-constrained ground state");
  add_common(se, true);
  Real mu = 1.0;
  se->add_option("--mu", mu, "prescribed mass")->required();

  CLI::App* sa = app.add_subcommand("solve-action",
                                    "Nehari-constrained ground state");
  add_common(sa, true);
  Real lambda = 1.0;
  sa->add_option("--lambda", lambda, "frequency")->required();

  CLI::App* tl = app.add_subcommand("trace-lambda",
                                    "action branch over a lambda grid");
  add_common(tl, true);
  tl->add_option("--grid", grid_text, "start:stop:count[:log]")->required();

  CLI::App* tm = app.add_subcommand("trace-mass",
                                    "energy branch over a mass grid");
  add_common(tm, true);
  tm->add_option("--grid", grid_text, "start:stop:count[:log]")->required();

  CLI::App* di = app.add_subcommand("detect-inversion",
                                    "mass-inversion witness on a lambda grid");
  add_common(di, true);
  di->add_option("--grid", grid_text, "start:stop:count[:log]")->required();
  Real margin = 0;
  CLI::Option* margin_opt =
      di->add_option("--margin", margin, "required witness margin");

  CLI::App* dz = app.add_subcommand("detect-z",
                                    "search a mass window for distinct-"
                                    "multiplier ground states");
  add_common(dz, true);
  dz->add_option("--grid", grid_text, "mass window lo:hi:1")->required();

  CLI::App* ver = app.add_subcommand("verify",
                                     "invariant suite on a named graph, or "
                                     "re-run a manifest");
  add_common(ver, true);
  ver->add_option("--manifest", manifest_path,
                  "re-run this manifest and compare summaries");
  std::string ps_text;
  ver->add_option("--ps", ps_text, "comma-separated p values");

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* sub = app.get_subcommands().front();
    man.command = sub->get_name();
    if (man.command == "verify" && !manifest_path.empty())
      return run_from_manifest_check(manifest_path);

    if (!lengths_text.empty()) {
      std::stringstream ss(lengths_text);
      std::string item;
      while (std::getline(ss, item, ','))
        man.graph.lengths.push_back(std::stod(item));
    }
    if (!ps_text.empty()) {
      std::stringstream ss(ps_text);
      std::string item;
      while (std::getline(ss, item, ','))
        man.ps.push_back(std::stod(item));
    }
    if (!grid_text.empty()) man.grid = parse_grid(grid_text);
    if (man.command == "solve-energy") man.mu = mu;
    if (man.command == "solve-action") man.lambda = lambda;
    if (*margin_opt) man.margin = margin;
    if (man.command != "baselines" && man.graph.name.empty() &&
        man.graph.json_path.empty())
      man.graph.name = "segment";

    RunResult result = execute(man, out_dir, allow_nonconverged);
    return result.exit_code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const graphnls::UnboundedBelowError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
