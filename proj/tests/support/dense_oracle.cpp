#include "dense_oracle.hpp"

#include <cmath>
#include <numbers>

namespace cwss::testing {

Eigen::MatrixXcd explicit_partial_idft(std::size_t n, const std::vector<std::size_t>& rows) {
  Eigen::MatrixXcd a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n));
  const double nd = static_cast<double>(n);
  for (std::size_t m = 0; m < rows.size(); ++m) {
    for (std::size_t k = 0; k < n; ++k) {
      const double arg = 2.0 * std::numbers::pi * static_cast<double>(k) *
                         static_cast<double>(rows[m]) / nd;
      a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) =
          Complex(std::cos(arg), std::sin(arg)) / std::sqrt(nd);
    }
  }
  return a;
}

double dense_objective(const DenseGroupProblem& p, const Eigen::VectorXcd& r) {
  double f = 0.0;
  for (std::size_t i = 0; i < p.sections.size(); ++i) {
    const auto [b, e] = p.sections[i];
    f += p.weights[i] *
         r.segment(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(e - b)).norm();
  }
  return f;
}

namespace {

void shrink(const DenseGroupProblem& p, Eigen::VectorXcd& v, double tau) {
  for (std::size_t i = 0; i < p.sections.size(); ++i) {
    const auto [b, e] = p.sections[i];
    auto seg = v.segment(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(e - b));
    const double nrm = seg.norm();
    const double thr = tau * p.weights[i];
    seg *= nrm > thr ? 1.0 - thr / nrm : 0.0;
  }
}

Eigen::VectorXcd project_ball(const Eigen::VectorXcd& q, const Eigen::VectorXcd& y, double eta) {
  const Eigen::VectorXcd d = q - y;
  const double nd = d.norm();
  if (nd <= eta) return q;
  return y + d * (eta / nd);
}

}  // namespace

DenseSolution solve_dense_group(const DenseGroupProblem& p, int max_iters, double tol) {
  const Eigen::Index n = p.a.cols();
  const double l = Eigen::JacobiSVD<Eigen::MatrixXcd>(p.a).singularValues()(0);
  const double step = 0.99 / l;
  Eigen::VectorXcd r = Eigen::VectorXcd::Zero(n);
  Eigen::VectorXcd r_bar = r;
  Eigen::VectorXcd lam = Eigen::VectorXcd::Zero(p.a.rows());
  DenseSolution out;
  int quiet = 0;
  for (int it = 1; it <= max_iters; ++it) {
    const Eigen::VectorXcd v = lam + step * (p.a * r_bar);
    lam = v - step * project_ball(v / step, p.y, p.eta);
    Eigen::VectorXcd r_new = r - step * (p.a.adjoint() * lam);
    shrink(p, r_new, step);
    const double change = (r_new - r).norm();
    r_bar = 2.0 * r_new - r;
    r = std::move(r_new);
    out.iterations = it;
    quiet = change <= tol * std::max(1.0, r.norm()) ? quiet + 1 : 0;
    if (quiet >= 50) break;
  }
  // Least-norm correction onto {||A r - y|| <= eta}.
  const Eigen::VectorXcd e = p.a * r - p.y;
  const double ne = e.norm();
  if (ne > p.eta) {
    const Eigen::VectorXcd target = e * (1.0 - p.eta / ne);
    r -= p.a.completeOrthogonalDecomposition().solve(target);
  }
  out.r = r;
  out.objective = dense_objective(p, r);
  out.residual = (p.a * r - p.y).norm();
  return out;
}

Eigen::VectorXcd to_eigen(const CVector& v) {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

CVector from_eigen(const Eigen::VectorXcd& v) {
  return CVector(v.data(), v.data() + v.size());
}

}  // namespace cwss::testing
