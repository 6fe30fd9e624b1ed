#include "graphnls/sweep.hpp"

#include <algorithm>
#include <cmath>

namespace graphnls {

namespace {

void check_grid(const std::vector<Real>& grid) {
  if (grid.empty()) throw std::invalid_argument("empty grid");
  for (size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0))
      throw std::invalid_argument("grid values must be positive");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw std::invalid_argument("grid must be strictly increasing");
  }
}

Real value_of(const GroundStateRecord& r) { return r.energy; }
Real value_of(const ActionRecord& r) { return r.action; }

// near-optimal distinct states to carry forward as warm starts
template <typename Multistart>
std::vector<GraphFunction> carry_states(const Multistart& ms, Real band) {
  std::vector<GraphFunction> keep;
  Real best = 1e300;
  for (const auto& r : ms.records) {
    Real v = value_of(r);
    if (r.converged && v < best) best = v;
  }
  for (const auto& r : ms.records) {
    if (!r.converged) continue;
    if (value_of(r) <= best + band && keep.size() < 4) keep.push_back(r.state);
  }
  return keep;
}

}  // namespace

BranchTable trace_action_branch(const MetricGraph& g, Real p,
                                const std::vector<Real>& lambda_grid,
                                const SolverConfig& cfg) {
  check_grid(lambda_grid);
  BranchTable table;
  table.axis = BranchAxis::Lambda;
  table.graph_name = g.name;
  table.p = p;
  table.grid = lambda_grid;

  std::vector<GraphFunction> warm;
  for (Real lambda : lambda_grid) {
    Real h = std::min(cfg.target_h, cfg.resolve_factor / std::sqrt(lambda));
    MeshPtr mesh = build_mesh(g, h);
    BranchPoint pt;
    pt.x = lambda;
    try {
      ActionMultistart ms = multistart_action(mesh, p, lambda, cfg, warm);
      pt.level = ms.j_level;
      pt.branch_minus = ms.m_minus;
      pt.branch_plus = ms.m_plus;
      pt.n_restarts = static_cast<int>(ms.records.size());
      pt.n_near_optimal = ms.n_near_optimal;
      pt.converged = ms.any_converged;
      pt.flagged = !ms.any_converged;
      warm = carry_states(ms, cfg.action_tol);
    } catch (const std::exception&) {
      pt.flagged = true;
      warm.clear();
    }
    table.points.push_back(std::move(pt));
  }
  return table;
}

BranchTable trace_energy_branch(const MetricGraph& g, Real p,
                                const std::vector<Real>& mass_grid,
                                const SolverConfig& cfg) {
  check_grid(mass_grid);
  BranchTable table;
  table.axis = BranchAxis::Mass;
  table.graph_name = g.name;
  table.p = p;
  table.grid = mass_grid;

  MeshPtr mesh = build_mesh(g, cfg.target_h);
  std::vector<GraphFunction> warm;
  for (Real mu : mass_grid) {
    BranchPoint pt;
    pt.x = mu;
    try {
      EnergyMultistart ms = multistart_energy(mesh, p, mu, cfg, warm);
      pt.level = ms.best_energy;
      pt.branch_minus = ms.lambda_minus;
      pt.branch_plus = ms.lambda_plus;
      pt.n_restarts = static_cast<int>(ms.records.size());
      pt.n_near_optimal = ms.n_near_optimal;
      pt.converged = ms.any_converged;
      pt.flagged = !ms.any_converged;
      warm = carry_states(ms, cfg.energy_tol);
    } catch (const UnboundedBelowError&) {
      pt.flagged = true;  // expected for p = 6 above the critical mass
      warm.clear();
    } catch (const std::exception&) {
      pt.flagged = true;
      warm.clear();
    }
    table.points.push_back(std::move(pt));
  }
  return table;
}

std::optional<InversionWitness> find_inversion(const BranchTable& table,
                                               Real margin) {
  if (table.axis != BranchAxis::Lambda)
    throw std::invalid_argument("find_inversion expects a lambda-axis table");
  std::optional<InversionWitness> best;
  const auto& pts = table.points;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (!pts[i].converged) continue;
    for (size_t j = i + 1; j < pts.size(); ++j) {
      if (!pts[j].converged) continue;
      Real gap = pts[i].branch_minus - pts[j].branch_plus;
      if (gap >= margin && (!best || gap > best->margin)) {
        best = InversionWitness{pts[i].x, pts[j].x, pts[i].branch_minus,
                                pts[j].branch_plus, gap};
      }
    }
  }
  return best;
}

namespace {

struct ZProbe {
  Real mass = 0;
  EnergyMultistart ms;
  Real lambda_best = 0;
  bool usable = false;
};

ZProbe probe_mass(MeshPtr mesh, Real p, Real mu, const SolverConfig& cfg,
                  const std::vector<GraphFunction>& warm) {
  ZProbe pr;
  pr.mass = mu;
  try {
    pr.ms = multistart_energy(mesh, p, mu, cfg, warm);
    pr.usable = pr.ms.any_converged;
    Real best = 1e300;
    for (const auto& r : pr.ms.records) {
      if (!r.converged) continue;
      if (r.energy < best) {
        best = r.energy;
        pr.lambda_best = r.lambda;
      }
    }
  } catch (const std::exception&) {
    pr.usable = false;
  }
  return pr;
}

// energy spread across the near-optimal band and the lambda extremes in it
bool witness_at(const ZProbe& pr, Real p, const SolverConfig& cfg,
                ZPointWitness* w) {
  if (!pr.usable) return false;
  Real best = 1e300;
  for (const auto& r : pr.ms.records)
    if (r.converged) best = std::min(best, r.energy);
  Real lo = 1e300, hi = -1e300, emax = -1e300;
  for (const auto& r : pr.ms.records) {
    if (!r.converged) continue;
    if (r.energy <= best + cfg.energy_tol) {
      lo = std::min(lo, r.lambda);
      hi = std::max(hi, r.lambda);
      emax = std::max(emax, r.energy);
    }
  }
  if (hi - lo > cfg.lambda_tol) {
    if (w) *w = ZPointWitness{p, pr.mass, lo, hi, emax - best};
    return true;
  }
  return false;
}

std::vector<GraphFunction> z_warm(const ZProbe& a, const ZProbe& b,
                                  const SolverConfig& cfg) {
  std::vector<GraphFunction> warm;
  for (const ZProbe* pr : {&a, &b}) {
    if (!pr->usable) continue;
    Real best = 1e300;
    for (const auto& r : pr->ms.records)
      if (r.converged) best = std::min(best, r.energy);
    for (const auto& r : pr->ms.records)
      if (r.converged && r.energy <= best + cfg.energy_tol &&
          warm.size() < 6)
        warm.push_back(r.state);
  }
  return warm;
}

}  // namespace

std::vector<ZPointWitness> find_z_points(const MetricGraph& g, Real p,
                                         std::pair<Real, Real> mass_window,
                                         const SolverConfig& cfg) {
  if (!(p > 2) || !(p < 6))
    throw std::invalid_argument("find_z_points: requires 2 < p < 6");
  auto [lo, hi] = mass_window;
  if (!(lo > 0) || !(hi > lo))
    throw std::invalid_argument("find_z_points: bad mass window");

  MeshPtr mesh = build_mesh(g, cfg.target_h);
  std::vector<ZPointWitness> found;
  auto verify_and_store = [&](const ZPointWitness& w,
                              const std::vector<GraphFunction>& warm) {
    SolverConfig check = cfg;
    check.seed = cfg.seed * 2 + 1;
    ZProbe re = probe_mass(mesh, p, w.mass, check, warm);
    ZPointWitness confirmed;
    if (witness_at(re, p, cfg, &confirmed)) {
      found.push_back(confirmed);
      return true;
    }
    return false;
  };

  // coarse scan
  const int scan = 7;
  std::vector<ZProbe> probes;
  for (int i = 0; i < scan; ++i) {
    Real mu = lo + (hi - lo) * i / (scan - 1);
    probes.push_back(probe_mass(mesh, p, mu, cfg, {}));
    ZPointWitness w;
    if (witness_at(probes.back(), p, cfg, &w)) {
      if (verify_and_store(w, {})) return found;
    }
  }

  // bisect the bracket with the largest multiplier jump
  size_t a = 0;
  Real jump = -1;
  for (size_t i = 0; i + 1 < probes.size(); ++i) {
    if (!probes[i].usable || !probes[i + 1].usable) continue;
    Real d = std::abs(probes[i + 1].lambda_best - probes[i].lambda_best);
    if (d > jump) {
      jump = d;
      a = i;
    }
  }
  if (jump <= cfg.lambda_tol) return found;  // no jump in the window

  ZProbe left = probes[a], right = probes[a + 1];
  for (int it = 0; it < 40 && right.mass - left.mass > 1e-12 * hi; ++it) {
    Real mid = (left.mass + right.mass) / 2;
    ZProbe mp = probe_mass(mesh, p, mid, cfg, z_warm(left, right, cfg));
    ZPointWitness w;
    if (witness_at(mp, p, cfg, &w)) {
      if (verify_and_store(w, z_warm(left, right, cfg))) return found;
    }
    if (!mp.usable) break;
    // keep the half that still contains the jump
    if (std::abs(mp.lambda_best - left.lambda_best) >=
        std::abs(right.lambda_best - mp.lambda_best)) {
      right = std::move(mp);
    } else {
      left = std::move(mp);
    }
  }
  return found;
}

DerivativeReport derivative_consistency(const BranchTable& table,
                                        Real rel_tol) {
  if (table.axis != BranchAxis::Lambda)
    throw std::invalid_argument(
        "derivative_consistency expects a lambda-axis table");
  if (table.points.size() < 3)
    throw std::invalid_argument("derivative_consistency needs >= 3 points");
  DerivativeReport rep;
  for (size_t i = 1; i + 1 < table.points.size(); ++i) {
    const BranchPoint& lo = table.points[i - 1];
    const BranchPoint& mid = table.points[i];
    const BranchPoint& hi = table.points[i + 1];
    DerivativePoint d;
    d.x = mid.x;
    d.band_lo = mid.branch_minus / 2;
    d.band_hi = mid.branch_plus / 2;
    if (!lo.converged || !mid.converged || !hi.converged) {
      d.skipped = true;
      d.ok = true;
      rep.points.push_back(d);
      continue;
    }
    d.slope = (hi.level - lo.level) / (hi.x - lo.x);
    Real tol = rel_tol * std::max(std::abs(d.band_lo + d.band_hi) / 2, 1e-12);
    d.ok = (d.slope >= d.band_lo - tol) && (d.slope <= d.band_hi + tol);
    rep.all_ok = rep.all_ok && d.ok;
    rep.points.push_back(d);
  }
  return rep;
}

}  // namespace graphnls
