#pragma once

#include "crk/crspace.hpp"

#include <Eigen/Sparse>

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace crk {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using ScalarField = std::function<double(const Point&)>;

/// Broken Dirichlet form (grad_T u, grad_T v) on the basis of the space.
SparseMatrix assemble_stiffness(const CRSpace& space);

/// (f, b_i) for every basis function; triangle quadrature of the given degree
/// (default 2k+2), whose nodes are all interior.
Eigen::VectorXd assemble_load(const CRSpace& space, const ScalarField& f, int degree = -1);
Eigen::VectorXd assemble_load(const CRSpace& space, const PiecewisePoly& f);

struct SolveReport {
  int iterations = 0;
  double residual = 0.0;  // relative
  std::string method = "pcg-jacobi";
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, SolveReport r) : std::runtime_error(what), report(r) {}
  SolveReport report;
};

/// Jacobi-preconditioned CG; throws SolverError after max_iter (default 10 dim).
Eigen::VectorXd solve_spd(const SparseMatrix& a, const Eigen::VectorXd& b, double tol = 1e-10,
                          SolveReport* report = nullptr, const Eigen::VectorXd* guess = nullptr,
                          int max_iter = -1);

/// Dense local stiffness of K in ReferenceElement order.
Eigen::MatrixXd local_stiffness(const CRSpace& space, int K);

/// Coordinate text dump "i j value", one nonzero per line.
void write_matrix(std::ostream& os, const SparseMatrix& a);

}  // namespace crk
