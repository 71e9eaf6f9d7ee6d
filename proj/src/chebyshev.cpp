#include "hyperell/chebyshev.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace hyperell {

namespace {

QuadratureRule make_rule(int n) {
  if (n < 1) throw std::invalid_argument("Clenshaw-Curtis order must be >= 1");
  QuadratureRule rule;
  rule.order = n;
  rule.nodes.resize(n + 1);
  rule.weights.resize(n + 1);
  for (int j = 0; j <= n; ++j) rule.nodes(j) = std::cos(j * kPi / n);

  // Interpolatory weights via the cosine expansion of the even part.
  rule.weights.setZero();
  if (n % 2 == 0) {
    rule.weights(0) = rule.weights(n) = 1.0 / (n * n - 1.0);
  } else {
    rule.weights(0) = rule.weights(n) = 1.0 / (n * n);
  }
  for (int j = 1; j < n; ++j) {
    const double theta = j * kPi / n;
    double v = 1.0;
    const int half = (n % 2 == 0) ? n / 2 - 1 : (n - 1) / 2;
    for (int k = 1; k <= half; ++k)
      v -= 2.0 * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
    if (n % 2 == 0) v -= std::cos(n * theta) / (n * n - 1.0);
    rule.weights(j) = 2.0 * v / n;
  }
  return rule;
}

Eigen::MatrixXd make_diff(int n) {
  if (n < 1) throw std::invalid_argument("differentiation order must be >= 1");
  Eigen::VectorXd x(n + 1), c(n + 1);
  for (int j = 0; j <= n; ++j) {
    x(j) = std::cos(j * kPi / n);
    c(j) = ((j == 0 || j == n) ? 2.0 : 1.0) * ((j % 2 == 0) ? 1.0 : -1.0);
  }
  Eigen::MatrixXd d(n + 1, n + 1);
  for (int i = 0; i <= n; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j <= n; ++j) {
      if (i == j) continue;
      d(i, j) = (c(i) / c(j)) / (x(i) - x(j));
      row_sum += d(i, j);
    }
    d(i, i) = -row_sum;  // rows annihilate constants
  }
  return d;
}

}  // namespace

const QuadratureRule& clenshaw_curtis_rule(int order) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<const QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end())
    it = cache.emplace(order, std::make_unique<const QuadratureRule>(make_rule(order))).first;
  return *it->second;
}

const Eigen::MatrixXd& chebyshev_diff_matrix(int order) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<const Eigen::MatrixXd>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end())
    it = cache.emplace(order, std::make_unique<const Eigen::MatrixXd>(make_diff(order))).first;
  return *it->second;
}

}  // namespace hyperell
