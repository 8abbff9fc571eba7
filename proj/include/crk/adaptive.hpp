#pragma once

#include "crk/estimator.hpp"
#include "crk/problems.hpp"

#include <functional>
#include <iosfwd>
#include <vector>

namespace crk {

/// Minimal prefix of the triangles sorted by eta2 descending (ties by id)
/// whose squared sum reaches theta eta(T)^2. Throws for theta outside (0,1].
std::vector<int> dorfler_mark(const LocalEstimate& est, double theta);

struct AfemRecord {
  int step = 0;
  int ndof = 0;
  double eta = 0.0;
  double mu = 0.0;
  double nu = 0.0;
  int nmarked = 0;
  double err_h1 = -1.0;  // negative when the problem has no exact gradient
  double seconds = 0.0;
};

/// State of one pass of the loop, handed to the observer. `refinement` is
/// the refinement about to be applied (null after the last solve); its fine
/// mesh is the mesh of the next step.
struct AfemStep {
  const AfemRecord* record;
  SpacePtr space;
  const CRFunction* solution;
  const LocalEstimate* estimate;
  const std::vector<int>* marked;
  const RefinedMesh* refinement;
};

struct AfemOptions {
  int k = 1;
  double theta = 0.5;
  long dof_cap = 100000;
  int quad_bump = 0;   // added to the default quadrature degrees
  int max_steps = -1;  // stop after this many solves when >= 0
  double solver_tol = 1e-10;
  std::function<void(const AfemStep&)> observer;
};

/// Thrown when a solve fails; what() names the step.
class AfemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// solve -> estimate -> mark -> refine until the dimension of CR_{k,0}
/// exceeds dof_cap; the last record is the first step above the cap.
std::vector<AfemRecord> afem_run(const Problem& p, const AfemOptions& opt);

/// Discrete solution of the problem in the given space.
CRFunction solve_discrete(const SpacePtr& space, const ScalarField& f, int quad_bump = 0,
                          double tol = 1e-10);

/// CSV "step,ndof,eta,mu,nu,nmarked,err_h1,seconds"; seconds are written as
/// 0 unless with_timing, so that repeated runs give identical files.
void write_records(std::ostream& os, const std::vector<AfemRecord>& recs, bool with_timing);

/// rho_2 of the reduction estimate, (1 + sqrt 2) / sqrt 8.
double reduction_rho();

struct AxiomReport {
  double delta = 0.0;  // ||grad_T v - grad_That vhat||
  // stability
  double a1_lhs = 0.0;  // |eta(v; T cap That) - eta(vhat; That cap T)|
  double lambda1 = 0.0;
  // reduction at fixed rho_2
  double a2_lhs = 0.0;  // eta(vhat; That \ T)^2
  double a2_coarse = 0.0;  // eta(v; T \ That)^2
  double rho2 = 0.0;
  double lambda2 = 0.0;
  double a2_ratio = 0.0;  // a2_lhs / a2_coarse, the reduction seen without perturbation
  // discrete reliability, meaningful when v and vhat are the discrete solutions
  double a3_rhs = 0.0;  // eta(v; R^1)
  double lambda3 = 0.0;
};

/// Measured constants of stability, reduction and discrete reliability for a
/// refinement pair; 0/0 is reported as 0.
AxiomReport monitor_axioms(const RefinedMesh& pair, const CRFunction& v, const CRFunction& vhat,
                           const ScalarField& f, int quad_bump = 0);

/// CSV "step,lambda1,lambda2,lambda3".
void write_axioms(std::ostream& os, const std::vector<AxiomReport>& reps);

/// Least-squares slope of log(value) over the index; nonpositive values are
/// skipped, fewer than two remaining values give 0.
double log_trend(const std::vector<double>& values);

}  // namespace crk
