#pragma once

#include "crk/assembly.hpp"
#include "crk/crspace.hpp"

#include <iosfwd>
#include <vector>

namespace crk {

/// Squared local contributions of the residual estimator, one entry per triangle.
struct LocalEstimate {
  std::vector<double> mu2;  // |K| ||f + lap v||^2 + |K|^{1/2} sum over interior edges of ||[grad v].n||^2
  std::vector<double> nu2;  // |K|^{1/2} sum over all edges of ||[grad v].t||^2
  std::vector<double> eta2;
};

/// Unweighted squared L2 norms of the normal and tangential gradient jumps
/// over each edge; boundary edges carry the one-sided trace.
struct EdgeJumps {
  std::vector<double> normal2;
  std::vector<double> tangential2;
};

EdgeJumps edge_jumps(const PiecewisePoly& v);

/// Residual estimator of v for -lap u = f. The volume term uses a triangle
/// rule of the given degree (default 2k+2, k the degree of v).
LocalEstimate estimate(const PiecewisePoly& v, const ScalarField& f, int degree = -1);
LocalEstimate estimate(const CRFunction& v, const ScalarField& f, int degree = -1);

struct EstimatorNorms {
  double eta = 0.0;
  double mu = 0.0;
  double nu = 0.0;
};

EstimatorNorms estimate_restricted(const LocalEstimate& est, const SubmeshSelection& s);
EstimatorNorms estimate_total(const LocalEstimate& est);

/// CSV "tri_id,mu2,nu2,eta2".
void write_estimate(std::ostream& os, const LocalEstimate& est);

}  // namespace crk
