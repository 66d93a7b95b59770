// Test-only reference solvers on explicit matrices. Nothing here relies on
// the FFT path or on the rows of the operator being orthonormal.
#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cwss/types.hpp"

namespace cwss::testing {

// Explicit inverse unitary DFT rows: A(m, k) = exp(+i 2 pi k t_m / N) / sqrt(N).
Eigen::MatrixXcd explicit_partial_idft(std::size_t n, const std::vector<std::size_t>& rows);

struct DenseGroupProblem {
  Eigen::MatrixXcd a;
  Eigen::VectorXcd y;
  std::vector<std::pair<std::size_t, std::size_t>> sections;  // [begin, end)
  std::vector<double> weights;
  double eta = 0.0;
};

struct DenseSolution {
  Eigen::VectorXcd r;
  double objective = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

// Chambolle-Pock primal-dual iterations on
//   min sum_i w_i ||r_i||_2  s.t.  ||A r - y||_2 <= eta,
// followed by a least-norm correction back onto the constraint set.
DenseSolution solve_dense_group(const DenseGroupProblem& p, int max_iters = 400000,
                                double tol = 1e-13);

double dense_objective(const DenseGroupProblem& p, const Eigen::VectorXcd& r);

Eigen::VectorXcd to_eigen(const CVector& v);
CVector from_eigen(const Eigen::VectorXcd& v);

}  // namespace cwss::testing
