#include "crk/adaptive.hpp"

#include "crk/operators.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace crk {

std::vector<int> dorfler_mark(const LocalEstimate& est, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in (0,1]");
  const int n = int(est.eta2.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return est.eta2[a] > est.eta2[b]; });
  double total = 0.0;
  for (double e : est.eta2) total += e;
  std::vector<int> marked;
  double acc = 0.0;
  for (int K : order) {
    if ((theta < 1.0 && acc >= theta * total) || est.eta2[K] <= 0.0) break;
    marked.push_back(K);
    acc += est.eta2[K];
  }
  std::sort(marked.begin(), marked.end());
  return marked;
}

CRFunction solve_discrete(const SpacePtr& space, const ScalarField& f, int quad_bump, double tol) {
  CRFunction u = zero_function(space);
  if (space->dim() == 0) return u;
  const SparseMatrix a = assemble_stiffness(*space);
  const Eigen::VectorXd b = assemble_load(*space, f, 2 * space->k() + 2 + quad_bump);
  u.coef = solve_spd(a, b, tol);
  return u;
}

std::vector<AfemRecord> afem_run(const Problem& p, const AfemOptions& opt) {
  require_odd_degree(opt.k);
  if (!(opt.theta > 0.0 && opt.theta <= 1.0)) throw std::invalid_argument("theta must lie in (0,1]");
  using clock = std::chrono::steady_clock;
  std::vector<AfemRecord> recs;
  MeshPtr mesh = p.initial_mesh;
  for (int step = 0;; ++step) {
    const auto t0 = clock::now();
    const SpacePtr space = std::make_shared<CRSpace>(mesh, opt.k, true);
    if (step == 0 && opt.dof_cap < space->dim())
      throw std::invalid_argument("dof_cap is below the initial dimension");
    CRFunction u;
    try {
      u = solve_discrete(space, p.f, opt.quad_bump, opt.solver_tol);
    } catch (const SolverError& e) {
      throw AfemError("step " + std::to_string(step) + " (" + std::to_string(space->dim()) +
                      " DOFs): " + e.what());
    }
    const LocalEstimate est = estimate(u, p.f, 2 * opt.k + 2 + opt.quad_bump);
    const std::vector<int> marked = dorfler_mark(est, opt.theta);
    const EstimatorNorms nrm = estimate_total(est);
    AfemRecord r;
    r.step = step;
    r.ndof = space->dim();
    r.eta = nrm.eta;
    r.mu = nrm.mu;
    r.nu = nrm.nu;
    r.nmarked = int(marked.size());
    if (p.grad) r.err_h1 = h1_error(u, p, 2 * opt.k + 4 + opt.quad_bump);
    r.seconds = std::chrono::duration<double>(clock::now() - t0).count();
    recs.push_back(r);
    const bool last = space->dim() > opt.dof_cap || marked.empty() ||
                      (opt.max_steps >= 0 && step + 1 >= opt.max_steps);
    RefinedMesh next;
    if (!last) next = refine_nvb(mesh, marked);
    if (opt.observer)
      opt.observer(AfemStep{&recs.back(), space, &u, &est, &marked, last ? nullptr : &next});
    if (last) break;
    mesh = next.fine;
  }
  return recs;
}

void write_records(std::ostream& os, const std::vector<AfemRecord>& recs, bool with_timing) {
  os << "step,ndof,eta,mu,nu,nmarked,err_h1,seconds\n";
  char buf[256];
  for (const AfemRecord& r : recs) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g,%d,%.17g,%.6f\n", r.step, r.ndof,
                  r.eta, r.mu, r.nu, r.nmarked, r.err_h1, with_timing ? r.seconds : 0.0);
    os << buf;
  }
}

double reduction_rho() { return (1.0 + std::sqrt(2.0)) / std::sqrt(8.0); }

namespace {

double safe_ratio(double a, double b) {
  if (a == 0.0) return 0.0;
  return a / b;
}

}  // namespace

AxiomReport monitor_axioms(const RefinedMesh& pair, const CRFunction& v, const CRFunction& vhat,
                           const ScalarField& f, int quad_bump) {
  if (v.space->mesh() != pair.coarse || vhat.space->mesh() != pair.fine)
    throw std::invalid_argument("monitor_axioms: functions do not match the refinement pair");
  const int k = v.space->k();
  const int qd = 2 * k + 2 + quad_bump;
  const LocalEstimate ec = estimate(v, f, qd);
  const LocalEstimate ef = estimate(vhat, f, qd);
  const SubmeshSelection& r = pair.rel.refined;
  const SubmeshSelection& rhat = pair.rel.fine_new;

  AxiomReport rep;
  rep.delta = broken_seminorm(restrict_to_fine(pair, to_piecewise(v)) - to_piecewise(vhat));

  rep.a1_lhs = std::abs(estimate_restricted(ec, r.complement()).eta -
                        estimate_restricted(ef, rhat.complement()).eta);
  rep.lambda1 = safe_ratio(rep.a1_lhs, rep.delta);

  rep.rho2 = reduction_rho();
  rep.a2_lhs = std::pow(estimate_restricted(ef, rhat).eta, 2);
  rep.a2_coarse = std::pow(estimate_restricted(ec, r).eta, 2);
  rep.lambda2 = safe_ratio(std::max(0.0, rep.a2_lhs - rep.rho2 * rep.a2_coarse),
                           rep.delta * rep.delta);
  rep.a2_ratio = safe_ratio(rep.a2_lhs, rep.a2_coarse);

  rep.a3_rhs = estimate_restricted(ec, layer_one(*pair.coarse, r)).eta;
  rep.lambda3 = safe_ratio(rep.delta, rep.a3_rhs);
  return rep;
}

void write_axioms(std::ostream& os, const std::vector<AxiomReport>& reps) {
  os << "step,lambda1,lambda2,lambda3\n";
  char buf[128];
  for (std::size_t i = 0; i < reps.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", i, reps[i].lambda1, reps[i].lambda2,
                  reps[i].lambda3);
    os << buf;
  }
}

double log_trend(const std::vector<double>& values) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] > 0.0) pts.emplace_back(double(i), std::log(values[i]));
  if (pts.size() < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (auto [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= pts.size();
  my /= pts.size();
  double sxy = 0.0, sxx = 0.0;
  for (auto [x, y] : pts) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  return sxy / sxx;
}

}  // namespace crk
