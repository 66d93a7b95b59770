#include <algorithm>
#include <string>

#include "cwss/solver.hpp"

namespace cwss {
namespace {

constexpr std::size_t kMaxOracleN = 20;
constexpr int kMaxOracleSparsity = 4;
constexpr double kFitTol = 1e-8;

// Calls visit(support) for every size-s subset of [0, n) in lexicographic
// order; stops early when visit returns true.
template <typename Visit>
bool for_each_subset(std::size_t n, std::size_t s, Visit&& visit) {
  std::vector<std::size_t> idx(s);
  for (std::size_t i = 0; i < s; ++i) idx[i] = i;
  while (true) {
    if (visit(idx)) return true;
    std::size_t i = s;
    while (i > 0 && idx[i - 1] == n - s + (i - 1)) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::size_t j = i; j < s; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

L0Solution l0_oracle(std::span<const Complex> y, const Eigen::MatrixXcd& op,
                     int s_max) {
  const auto n = static_cast<std::size_t>(op.cols());
  if (n > kMaxOracleN || s_max < 0 || s_max > kMaxOracleSparsity) {
    throw InvalidArgument("l0_oracle: requires n <= 20 and 0 <= s_max <= 4");
  }
  if (static_cast<Eigen::Index>(y.size()) != op.rows()) {
    throw InvalidArgument("l0_oracle: measurement length != operator rows");
  }
  const Eigen::VectorXcd yv = Eigen::Map<const Eigen::VectorXcd>(
      y.data(), static_cast<Eigen::Index>(y.size()));
  const double tol = kFitTol * std::max(1.0, yv.norm());

  L0Solution best;
  for (int s = 0; s <= s_max && !best.found; ++s) {
    if (static_cast<std::size_t>(s) > n) break;
    for_each_subset(n, static_cast<std::size_t>(s), [&](const std::vector<std::size_t>& supp) {
      Eigen::VectorXcd coef;
      double res = yv.norm();
      if (!supp.empty()) {
        Eigen::MatrixXcd sub(op.rows(), static_cast<Eigen::Index>(supp.size()));
        for (std::size_t j = 0; j < supp.size(); ++j) {
          sub.col(static_cast<Eigen::Index>(j)) = op.col(static_cast<Eigen::Index>(supp[j]));
        }
        coef = sub.colPivHouseholderQr().solve(yv);
        res = (sub * coef - yv).norm();
      }
      if (res > tol) return false;
      best.found = true;
      best.support = supp;
      best.r.assign(n, Complex{});
      for (std::size_t j = 0; j < supp.size(); ++j) {
        best.r[supp[j]] = coef(static_cast<Eigen::Index>(j));
      }
      return true;
    });
  }
  return best;
}

}  // namespace cwss
