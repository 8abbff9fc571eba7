#include "cli.hpp"

#include "svg.hpp"
#include "verify.hpp"

#include "crk/adaptive.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace crk::cli {

namespace fs = std::filesystem;

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::ofstream open_out(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out);
  std::ofstream os(fs::path(cfg.out) / name);
  if (!os) throw std::runtime_error("cannot write " + (fs::path(cfg.out) / name).string());
  return os;
}

void validate(const RunConfig& cfg) {
  if (cfg.k < 1 || cfg.k % 2 == 0) throw std::invalid_argument("k must be odd and at least 1");
  for (int k : cfg.verify_ks)
    if (k < 1 || k % 2 == 0) throw std::invalid_argument("k must be odd and at least 1");
  if (!(cfg.theta > 0.0 && cfg.theta <= 1.0)) throw std::invalid_argument("theta must lie in (0,1]");
  if (cfg.dof_cap < 1) throw std::invalid_argument("dof-cap must be at least 1");
  if (cfg.quad_bump < 0) throw std::invalid_argument("quad-bump must be nonnegative");
  if (const char* t = std::getenv("CRK_AFEM_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(t, &end, 10);
    if (end == t || *end != '\0' || n < 1)
      throw std::invalid_argument("CRK_AFEM_THREADS must be a positive integer");
  }
}

AfemOptions options(const RunConfig& cfg) {
  AfemOptions o;
  o.k = cfg.k;
  o.theta = cfg.theta;
  o.dof_cap = cfg.dof_cap;
  o.quad_bump = cfg.quad_bump;
  return o;
}

}  // namespace

int cmd_afem(const RunConfig& cfg, std::ostream& out) {
  const Problem p = problem_by_name(cfg.problem);
  AfemOptions opt = options(cfg);
  LocalEstimate last;
  opt.observer = [&](const AfemStep& s) {
    if (!s.refinement) last = *s.estimate;
    char buf[160];
    std::snprintf(buf, sizeof buf, "step %3d  ndof %8d  eta %.6e  err %.6e  marked %d\n",
                  s.record->step, s.record->ndof, s.record->eta, s.record->err_h1,
                  s.record->nmarked);
    out << buf << std::flush;
  };
  std::vector<AfemRecord> recs;
  try {
    recs = afem_run(p, opt);
  } catch (const AfemError& e) {
    throw std::runtime_error(std::string("solver failure at ") + e.what());
  }

  {
    std::ofstream os = open_out(cfg, "afem.csv");
    write_records(os, recs, cfg.timing);
  }
  {
    std::ofstream os = open_out(cfg, "estimate.csv");
    write_estimate(os, last);
  }

  std::vector<std::pair<double, double>> eta, err;
  for (const AfemRecord& r : recs) {
    eta.emplace_back(r.ndof, r.eta);
    if (r.err_h1 >= 0.0) err.emplace_back(r.ndof, r.err_h1);
  }
  std::ostringstream rates;
  rates << "quantity,window,slope\n";
  for (const auto& [name, s] : {std::pair{"eta", &eta}, std::pair{"err_h1", &err}}) {
    const int w = trailing_window(*s);
    if (w < 4 || int(s->size()) < 4) continue;
    rates << name << "," << w << "," << fmt("%.6f", fit_rate(*s, w).slope) << "\n";
  }
  {
    std::ofstream os = open_out(cfg, "rates.csv");
    os << rates.str();
  }
  out << rates.str();

  std::vector<Series> series{{"eta", "#1f77b4", eta}};
  if (!err.empty()) series.push_back({"error", "#d62728", err});
  std::ofstream os = open_out(cfg, "convergence.svg");
  write_loglog_svg(os, series, {{-1.0 / 3.0, "#7f7f7f"}, {-cfg.k / 2.0, "#2ca02c"}},
                   p.name + ", k = " + std::to_string(cfg.k) + ", theta = " + fmt("%g", cfg.theta));
  return 0;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const std::vector<int> ks = cfg.verify_ks.empty() ? std::vector<int>{1, 3, 5} : cfg.verify_ks;
  const std::vector<Check> checks = verify_suite(ks, cfg.seed);
  std::ostringstream rep;
  const Check* first_fail = nullptr;
  for (const Check& c : checks) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%-4s k=%d  %-44s %.3e <= %.0e\n", c.pass() ? "PASS" : "FAIL",
                  c.k, c.name.c_str(), c.deviation, c.tol);
    rep << buf;
    if (!c.pass() && !first_fail) first_fail = &c;
  }
  if (first_fail)
    rep << "first failure: " << first_fail->name << " (k=" << first_fail->k << ")\n";
  std::ofstream os = open_out(cfg, "verify.txt");
  os << rep.str();
  out << rep.str();
  return first_fail ? 1 : 0;
}

int cmd_axioms(const RunConfig& cfg, std::ostream& out) {
  const Problem p = problem_by_name(cfg.problem);
  AfemOptions opt = options(cfg);
  opt.max_steps = cfg.steps + 1;
  std::vector<AxiomReport> reps;
  RefinedMesh prev_pair;
  CRFunction prev_u;
  opt.observer = [&](const AfemStep& s) {
    if (prev_u.space) reps.push_back(monitor_axioms(prev_pair, prev_u, *s.solution, p.f, cfg.quad_bump));
    if (s.refinement) {
      prev_pair = *s.refinement;
      prev_u = *s.solution;
    }
  };
  afem_run(p, opt);
  std::ofstream os = open_out(cfg, "axioms.csv");
  write_axioms(os, reps);
  std::vector<double> l1, l2, l3;
  double worst_ratio = 0.0;
  for (const AxiomReport& r : reps) {
    worst_ratio = std::max(worst_ratio, r.a2_ratio);
    l1.push_back(r.lambda1);
    l2.push_back(r.lambda2);
    l3.push_back(r.lambda3);
  }
  out << "steps " << reps.size() << "\n";
  out << "lambda1 log-trend " << fmt("%.4f", log_trend(l1)) << "\n";
  out << "lambda2 log-trend " << fmt("%.4f", log_trend(l2)) << " (rho2 = " << fmt("%.6f", reduction_rho()) << ")\n";
  out << "largest eta(vhat; That \\ T)^2 / eta(v; T \\ That)^2 " << fmt("%.4f", worst_ratio) << "\n";
  out << "lambda3 log-trend " << fmt("%.4f", log_trend(l3)) << "\n";
  return 0;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adaptive Crouzeix-Raviart finite elements of odd degree"};
  app.require_subcommand(1);
  RunConfig cfg;
  auto common = [&](CLI::App* c) {
    c->add_option("--k", cfg.k, "polynomial degree (odd)");
    c->add_option("--theta", cfg.theta, "Doerfler bulk parameter in (0,1]");
    c->add_option("--problem", cfg.problem, "benchmark problem")
        ->check(CLI::IsMember({"lshape", "square-smooth"}));
    c->add_option("--dof-cap", cfg.dof_cap, "stop once the dimension exceeds this");
    c->add_option("--out", cfg.out, "output directory");
    c->add_option("--seed", cfg.seed, "seed for random meshes and functions");
    c->add_option("--quad-bump", cfg.quad_bump, "extra quadrature degree");
  };
  CLI::App* afem = app.add_subcommand("afem", "adaptive or uniform (theta = 1) convergence study");
  common(afem);
  afem->add_flag("--timing", cfg.timing, "write wall times into the CSV");
  CLI::App* verify = app.add_subcommand("verify", "operator identity suites");
  common(verify);
  CLI::App* axioms = app.add_subcommand("axioms", "measured constants of the adaptivity axioms");
  common(axioms);
  axioms->add_option("--steps", cfg.steps, "number of refinement pairs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  try {
    if (verify->parsed() && verify->count("--k")) cfg.verify_ks = {cfg.k};
    validate(cfg);
    if (afem->parsed()) return cmd_afem(cfg, out);
    if (verify->parsed()) return cmd_verify(cfg, out);
    return cmd_axioms(cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace crk::cli
