#include "graphnls/solver.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <random>
#include <thread>

namespace graphnls {

namespace {

Real dot_m(const Mesh& mesh, const Vector& a, const Vector& b) {
  return (a.cwiseProduct(b)).dot(mesh.lumped_mass());
}

Real norm_m(const Mesh& mesh, const Vector& a) {
  return std::sqrt(std::max<Real>(0, dot_m(mesh, a, a)));
}

Vector nodal_power(const Vector& v, Real p) {
  return v.array().abs().pow(p - 2) * v.array();
}

// H^1-type preconditioner B = A + scale * M, factorized once per solve.
struct Preconditioner {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<Real>> ldlt;

  Preconditioner(const Mesh& mesh, Real scale) {
    Eigen::SparseMatrix<Real> b = mesh.stiffness();
    Vector shift = scale * mesh.lumped_mass();
    for (int i = 0; i < b.rows(); ++i) b.coeffRef(i, i) += shift[i];
    b.makeCompressed();
    ldlt.compute(b);
    if (ldlt.info() != Eigen::Success)
      throw std::runtime_error("preconditioner factorization failed");
  }
  Vector apply(const Vector& g) const { return ldlt.solve(g); }
};

struct DescentOutcome {
  Vector u;
  Real value = 0;
  Real grad_norm = 0;
  int iterations = 0;
  bool converged = false;
};

// Monotone preconditioned BB descent with Armijo backtracking. `project`
// maps an arbitrary nonzero vector onto the constraint manifold; `evaluate`
// returns the objective; `gradient` the L2-Riesz gradient (tangential for
// on-manifold points); `on_step` may veto/abort (blow-up detection).
template <typename Project, typename Evaluate, typename Gradient,
          typename OnStep>
DescentOutcome descend(const Mesh& mesh, const Preconditioner& prec,
                       Vector u0, Real tol_scale, const SolverConfig& cfg,
                       Project project, Evaluate evaluate, Gradient gradient,
                       OnStep on_step) {
  DescentOutcome out;
  Vector u = project(std::move(u0));
  Real value = evaluate(u);
  Vector grad = gradient(u);
  Vector dir = prec.apply(grad);
  // keep the preconditioned direction tangential to the mass sphere
  Real uu = dot_m(mesh, u, u);
  dir -= (dot_m(mesh, dir, u) / uu) * u;

  Real step = 1.0;
  Vector prev_u, prev_dir;
  int it = 0;
  for (; it < cfg.max_iters; ++it) {
    Real gnorm = norm_m(mesh, grad);
    out.grad_norm = gnorm;
    if (gnorm <= cfg.grad_tol * tol_scale) {
      out.converged = true;
      break;
    }
    Real slope = dot_m(mesh, grad, dir);
    if (!(slope > 0)) {  // preconditioned direction lost descent; restart
      dir = grad;
      slope = gnorm * gnorm;
      step = 1.0 / std::max<Real>(1, gnorm);
    }
    Real beta = std::clamp(step, cfg.step_min, cfg.step_max);
    Vector cand;
    Real cand_value = value;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      cand = project(u - beta * dir);
      cand_value = evaluate(cand);
      if (cand_value <= value - cfg.armijo_c * beta * slope) {
        accepted = true;
        break;
      }
      beta *= 0.5;
      if (beta < cfg.step_min) break;
    }
    if (!accepted) {
      // no further monotone progress at this resolution
      out.converged = gnorm <= 100 * cfg.grad_tol * tol_scale;
      break;
    }
    Vector new_grad = gradient(cand);
    Vector new_dir = prec.apply(new_grad);
    Real cu = dot_m(mesh, cand, cand);
    new_dir -= (dot_m(mesh, new_dir, cand) / cu) * cand;

    Vector s = cand - u;
    Vector y = new_dir - dir;
    Real sy = dot_m(mesh, s, y);
    Real ss = dot_m(mesh, s, s);
    step = (sy > 1e-30) ? ss / sy : std::min(2 * beta, cfg.step_max);

    u = std::move(cand);
    value = cand_value;
    grad = std::move(new_grad);
    dir = std::move(new_dir);
    if (!on_step(u, value)) break;  // aborted by the caller
  }
  out.u = std::move(u);
  out.value = value;
  out.iterations = it;
  return out;
}

void normalize_sign(Vector& v) {
  if (v.size() > 0 && v.maxCoeff() < -v.minCoeff()) v = -v;
}

unsigned long long mix_seed(unsigned long long seed, int k) {
  unsigned long long x = seed + 0x9e3779b97f4a7c15ull * (k + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  return x;
}

}  // namespace

int worker_count(const SolverConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  if (const char* env = std::getenv("GRAPHNLS_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

GroundStateRecord minimize_energy(MeshPtr mesh, Real p, Real mu,
                                  const SolverConfig& cfg,
                                  const GraphFunction& init) {
  if (!(p > 2)) throw std::invalid_argument("minimize_energy: requires p > 2");
  if (p > 6 + 1e-12)
    throw std::invalid_argument(
        "minimize_energy: supercritical p > 6 has no minimizer");
  if (!(mu > 0)) throw std::invalid_argument("minimize_energy: mu must be > 0");

  const Mesh& m = *mesh;
  Real init_mass = norm_l2_sq(init);
  if (!(init_mass > 0))
    throw std::invalid_argument("minimize_energy: zero initial mass");
  Real lambda_est = std::abs(lagrange_lambda(init, p));
  Preconditioner prec(m, std::max<Real>(1, lambda_est));

  GraphFunction work{mesh, Vector()};
  auto project = [&](Vector v) {
    work.values = std::move(v);
    Real mass = norm_l2_sq(work);
    if (!(mass > 0))
      throw std::invalid_argument("minimize_energy: zero initial mass");
    return std::sqrt(mu / mass) * work.values;
  };
  auto evaluate = [&](const Vector& v) {
    work.values = v;
    return energy(work, p);
  };
  auto gradient = [&](const Vector& v) {
    work.values = v;
    GraphFunction g = grad_energy(work, p);
    // tangential component on the mass sphere
    g.values -= (dot_m(m, g.values, v) / mu) * v;
    return g.values;
  };
  Real init_sup = std::max<Real>(1e-12, max_abs(init));
  auto on_step = [&](const Vector& v, Real value) {
    if (p >= 6 - 1e-12 && value < -1.0 / cfg.mass_tol &&
        v.cwiseAbs().maxCoeff() > 10 * init_sup)
      throw UnboundedBelowError(
          "energy flow unbounded below (p >= 6, mass above the critical "
          "threshold)");
    return true;
  };

  Real tol_scale = (1 + lambda_est) * std::sqrt(mu);
  DescentOutcome got = descend(m, prec, init.values, tol_scale, cfg, project,
                               evaluate, gradient, on_step);

  GroundStateRecord rec;
  normalize_sign(got.u);
  rec.state = GraphFunction{mesh, std::move(got.u)};
  rec.mass = norm_l2_sq(rec.state);
  rec.energy = got.value;
  rec.lambda = lagrange_lambda(rec.state, p);
  rec.action_at_lambda = action(rec.state, p, rec.lambda);
  rec.grad_norm = got.grad_norm;
  NlseResidual res = nlse_residual(rec.state, rec.lambda, p);
  rec.nlse_interior_residual = res.interior_inf;
  rec.kirchhoff_residual = res.kirchhoff_inf;
  rec.iterations = got.iterations;
  rec.converged = got.converged;
  return rec;
}

ActionRecord minimize_action(MeshPtr mesh, Real p, Real lambda,
                             const SolverConfig& cfg,
                             const GraphFunction& init) {
  if (!(p > 2)) throw std::invalid_argument("minimize_action: requires p > 2");
  if (!(lambda > 0))
    throw std::invalid_argument(
        "minimize_action: lambda must be positive (the level is 0 and not "
        "attained for lambda <= 0)");

  const Mesh& m = *mesh;
  Preconditioner prec(m, std::max<Real>(1, lambda));

  GraphFunction work{mesh, Vector()};
  auto project = [&](Vector v) {
    work.values = std::move(v);
    Real s = sigma(work, p, lambda);
    return s * work.values;
  };
  auto evaluate = [&](const Vector& v) {
    // on the Nehari manifold J = (1/2 - 1/p) ||u||_p^p
    work.values = v;
    return (0.5 - 1.0 / p) * norm_lp_p(work, p);
  };
  auto gradient = [&](const Vector& v) {
    work.values = v;
    return grad_action(work, p, lambda).values;
  };
  auto on_step = [](const Vector&, Real) { return true; };

  GraphFunction probe = init;
  Real s0 = sigma(probe, p, lambda);
  Real tol_scale =
      (1 + lambda) * std::max<Real>(s0 * norm_m(m, probe.values), 1e-8);
  DescentOutcome got = descend(m, prec, init.values, tol_scale, cfg, project,
                               evaluate, gradient, on_step);

  ActionRecord rec;
  normalize_sign(got.u);
  rec.state = GraphFunction{mesh, std::move(got.u)};
  rec.lambda = lambda;
  rec.mass = norm_l2_sq(rec.state);
  rec.lp_norm_p = norm_lp_p(rec.state, p);
  rec.action = (0.5 - 1.0 / p) * rec.lp_norm_p;
  rec.grad_norm = got.grad_norm;
  NlseResidual res = nlse_residual(rec.state, lambda, p);
  rec.nlse_interior_residual = res.interior_inf;
  rec.kirchhoff_residual = res.kirchhoff_inf;
  rec.iterations = got.iterations;
  rec.converged = got.converged;
  return rec;
}

GraphFunction bump_at(MeshPtr mesh, int edge, int local_node, Real p,
                      Real lambda_scale) {
  std::vector<Real> dist = node_distances(*mesh, edge, local_node);
  GraphFunction u = zero_function(mesh);
  Real rate = std::sqrt(lambda_scale) * (p - 2) / 2;
  Real amp = std::pow(lambda_scale, 1.0 / (p - 2));
  const auto& g = mesh->graph();
  for (int e = 0; e < static_cast<int>(g.edges().size()); ++e) {
    const EdgeMesh& em = mesh->edge_mesh(e);
    for (int i = 0; i < em.nodes; ++i) {
      int d = mesh->dof_of(e, i);
      if (d < 0) continue;
      Real x = rate * dist[static_cast<size_t>(mesh->node_of(e, i))];
      Real sech = (x > 700) ? 0 : 1.0 / std::cosh(x);
      u.values[d] = amp * std::pow(std::max<Real>(sech, 1e-300), 2.0 / (p - 2));
    }
  }
  return u;
}

namespace {

// soliton mass on the line at multiplier 1, by quadrature of the closed form
Real soliton_mass_at_unit_lambda(Real p) {
  Real amp2 = std::pow(p / 2, 2.0 / (p - 2));
  Real rate = (p - 2) / 2;
  Real sum = 0, dx = 1e-3;
  for (int i = 0;; ++i) {
    Real x = (i + 0.5) * dx;
    Real s = std::pow(1.0 / std::cosh(rate * x), 4.0 / (p - 2));
    sum += s * dx;
    if (x > 5 && s < 1e-14) break;
  }
  return 2 * amp2 * sum;
}

Real energy_lambda_guess(const Mesh& mesh, Real p, Real mu) {
  if (std::abs(p - 6) < 1e-9) return 1.0;
  if (p > 6) return 1.0;
  Real s = soliton_mass_at_unit_lambda(p);
  Real expo = 2 * (p - 2) / (6 - p);
  return std::clamp(std::pow(mu / s, expo), 1e-3, 1e4);
}

GraphFunction random_field(MeshPtr mesh, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Real> unif(0.2, 1.2);
  GraphFunction u = zero_function(mesh);
  for (Index i = 0; i < u.values.size(); ++i) u.values[i] = unif(rng);
  // two averaging sweeps to tame the H^1 seminorm
  for (int pass = 0; pass < 2; ++pass) {
    Vector next = u.values;
    for (int n = 0; n < mesh->node_count(); ++n) {
      int d = mesh->dof_of_node(n);
      if (d < 0) continue;
      Real acc = u.values[d];
      int cnt = 1;
      for (auto [nb, h] : mesh->node_neighbors(n)) {
        int dn = mesh->dof_of_node(nb);
        acc += (dn < 0) ? 0 : u.values[dn];
        ++cnt;
      }
      next[d] = acc / cnt;
    }
    u.values = std::move(next);
  }
  return u;
}

std::vector<GraphFunction> initial_family(MeshPtr mesh, Real p,
                                          Real lambda_scale,
                                          const SolverConfig& cfg) {
  const MetricGraph& g = mesh->graph();
  std::vector<GraphFunction> family;

  GraphFunction constant = zero_function(mesh);
  constant.values.setOnes();
  family.push_back(std::move(constant));

  std::vector<GraphFunction> bumps;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (g.is_dirichlet(v)) continue;
    auto [eid, end] = g.incident(v)[0];
    int i = (end == 0) ? 0 : mesh->edge_mesh(eid).nodes - 1;
    bumps.push_back(bump_at(mesh, eid, i, p, lambda_scale));
  }
  for (int e = 0; e < static_cast<int>(g.edges().size()); ++e)
    bumps.push_back(
        bump_at(mesh, e, (mesh->edge_mesh(e).nodes - 1) / 2, p, lambda_scale));

  int budget = std::max(1, cfg.restarts);
  int n_random = (budget >= 4) ? std::max(1, budget / 8) : 0;
  int n_bumps = std::min<int>(static_cast<int>(bumps.size()),
                              budget - 1 - n_random);
  if (n_bumps < 0) n_bumps = 0;
  if (n_bumps == static_cast<int>(bumps.size())) {
    for (auto& b : bumps) family.push_back(std::move(b));
  } else {
    // deterministic even subsample
    for (int k = 0; k < n_bumps; ++k) {
      size_t idx = static_cast<size_t>(
          (static_cast<long long>(k) * bumps.size()) / n_bumps);
      family.push_back(bumps[idx]);
    }
  }
  while (static_cast<int>(family.size()) < budget)
    family.push_back(random_field(
        mesh, mix_seed(cfg.seed, static_cast<int>(family.size()))));
  return family;
}

template <typename Record, typename Solve>
std::vector<Record> run_multistart(const std::vector<GraphFunction>& inits,
                                   const SolverConfig& cfg, Solve solve) {
  std::vector<Record> records(inits.size());
  std::vector<std::exception_ptr> errors(inits.size());
  int workers = std::min<int>(worker_count(cfg), static_cast<int>(inits.size()));
  auto one = [&](size_t k) {
    try {
      records[k] = solve(inits[k]);
      records[k].restarts_used = static_cast<int>(k);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  };
  if (workers <= 1) {
    for (size_t k = 0; k < inits.size(); ++k) one(k);
  } else {
    std::atomic<size_t> cursor{0};
    auto body = [&]() {
      for (;;) {
        size_t k = cursor.fetch_add(1);
        if (k >= inits.size()) return;
        one(k);
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
  }
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);
  return records;
}

}  // namespace

std::vector<GraphFunction> energy_initial_family(MeshPtr mesh, Real p, Real mu,
                                                 const SolverConfig& cfg) {
  return initial_family(mesh, p, energy_lambda_guess(*mesh, p, mu), cfg);
}

std::vector<GraphFunction> action_initial_family(MeshPtr mesh, Real p,
                                                 Real lambda,
                                                 const SolverConfig& cfg) {
  return initial_family(mesh, p, lambda, cfg);
}

EnergyMultistart multistart_energy(MeshPtr mesh, Real p, Real mu,
                                   const SolverConfig& cfg,
                                   const std::vector<GraphFunction>& extra_inits) {
  if (cfg.restarts < 1)
    throw std::invalid_argument("multistart_energy: restarts must be >= 1");
  std::vector<GraphFunction> inits = energy_initial_family(mesh, p, mu, cfg);
  for (const GraphFunction& e : extra_inits) {
    inits.push_back(e.mesh == mesh ? e : resample(e, mesh));
  }
  auto records = run_multistart<GroundStateRecord>(
      inits, cfg,
      [&](const GraphFunction& u0) { return minimize_energy(mesh, p, mu, cfg, u0); });

  EnergyMultistart out;
  out.records = std::move(records);
  const GroundStateRecord* best = nullptr;
  for (const auto& r : out.records) {
    if (!r.converged) continue;
    if (!best || r.energy < best->energy) best = &r;
  }
  if (!best) {  // nothing converged: fall back to the lowest energy seen
    for (const auto& r : out.records)
      if (!best || r.energy < best->energy) best = &r;
  } else {
    out.any_converged = true;
  }
  out.best_energy = best->energy;
  out.lambda_minus = out.lambda_plus = best->lambda;
  for (const auto& r : out.records) {
    if (!r.converged && out.any_converged) continue;
    if (r.energy <= out.best_energy + cfg.energy_tol) {
      ++out.n_near_optimal;
      out.lambda_minus = std::min(out.lambda_minus, r.lambda);
      out.lambda_plus = std::max(out.lambda_plus, r.lambda);
    }
  }
  return out;
}

EnergyMultistart multistart_energy(const MetricGraph& g, Real p, Real mu,
                                   const SolverConfig& cfg) {
  return multistart_energy(build_mesh(g, cfg.target_h), p, mu, cfg);
}

ActionMultistart multistart_action(MeshPtr mesh, Real p, Real lambda,
                                   const SolverConfig& cfg,
                                   const std::vector<GraphFunction>& extra_inits) {
  if (cfg.restarts < 1)
    throw std::invalid_argument("multistart_action: restarts must be >= 1");
  if (!(lambda > 0))
    throw std::invalid_argument("multistart_action: lambda must be positive");
  std::vector<GraphFunction> inits = action_initial_family(mesh, p, lambda, cfg);
  for (const GraphFunction& e : extra_inits)
    inits.push_back(e.mesh == mesh ? e : resample(e, mesh));
  auto records = run_multistart<ActionRecord>(
      inits, cfg,
      [&](const GraphFunction& u0) { return minimize_action(mesh, p, lambda, cfg, u0); });

  ActionMultistart out;
  out.records = std::move(records);
  const ActionRecord* best = nullptr;
  for (const auto& r : out.records) {
    if (!r.converged) continue;
    if (!best || r.action < best->action) best = &r;
  }
  if (!best) {
    for (const auto& r : out.records)
      if (!best || r.action < best->action) best = &r;
  } else {
    out.any_converged = true;
  }
  out.j_level = best->action;
  out.m_minus = out.m_plus = best->mass;
  for (const auto& r : out.records) {
    if (!r.converged && out.any_converged) continue;
    if (r.action <= out.j_level + cfg.action_tol) {
      ++out.n_near_optimal;
      out.m_minus = std::min(out.m_minus, r.mass);
      out.m_plus = std::max(out.m_plus, r.mass);
    }
  }
  return out;
}

ActionMultistart multistart_action(const MetricGraph& g, Real p, Real lambda,
                                   const SolverConfig& cfg) {
  return multistart_action(build_mesh(g, cfg.target_h), p, lambda, cfg);
}

GraphFunction scaling_transport(const GraphFunction& u, Real lambda) {
  if (!(lambda > 0))
    throw std::invalid_argument("scaling_transport: lambda must be > 0");
  Real root = std::sqrt(lambda);
  MetricGraph scaled = scale(u.mesh->graph(), root);
  return scaling_transport(u, lambda,
                           build_mesh(scaled, u.mesh->target_h() * root));
}

GraphFunction scaling_transport(const GraphFunction& u, Real lambda,
                                MeshPtr target) {
  if (!(lambda > 0))
    throw std::invalid_argument("scaling_transport: lambda must be > 0");
  GraphFunction v = resample(u, std::move(target));
  v.values *= std::pow(lambda, -0.25);
  return v;
}

}  // namespace graphnls
