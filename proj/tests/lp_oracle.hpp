#pragma once

// Test-only reference solver: enumerates every assignment of each variable to
// {lower, upper, basic} and keeps the best feasible point with a uniquely
// determined basic part. Exponential; for tiny instances with finite bounds.

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "bessplan/lp/lp.hpp"

namespace oracle {

using bessplan::lp::LpInstance;
using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

struct BruteForceResult {
  bool feasible = false;
  double objective = 0;
  VectorXd x;
};

inline BruteForceResult brute_force_lp(const LpInstance& lp) {
  const Index n = lp.n_vars, m = lp.n_rows;
  MatrixXd a = MatrixXd::Zero(m, n);
  for (const auto& t : lp.triplets) a(t.row(), t.col()) += t.value();
  BruteForceResult best;
  std::vector<int> choice(n, 0);  // 0 lower, 1 upper, 2 basic
  Index total = 1;
  for (Index j = 0; j < n; ++j) total *= 3;
  for (Index code = 0; code < total; ++code) {
    Index c = code;
    std::vector<Index> basic;
    VectorXd x = VectorXd::Zero(n);
    for (Index j = 0; j < n; ++j) {
      choice[j] = static_cast<int>(c % 3);
      c /= 3;
      if (choice[j] == 0) x[j] = lp.lower[j];
      if (choice[j] == 1) x[j] = lp.upper[j];
      if (choice[j] == 2) basic.push_back(j);
    }
    if (static_cast<Index>(basic.size()) > m) continue;
    VectorXd rhs = lp.rhs - a * x;
    if (!basic.empty()) {
      MatrixXd ab(m, static_cast<Index>(basic.size()));
      for (std::size_t k = 0; k < basic.size(); ++k) ab.col(static_cast<Index>(k)) = a.col(basic[k]);
      Eigen::FullPivLU<MatrixXd> lu(ab);
      lu.setThreshold(1e-10);
      if (lu.rank() < static_cast<Index>(basic.size())) continue;
      const VectorXd xb = ab.colPivHouseholderQr().solve(rhs);
      for (std::size_t k = 0; k < basic.size(); ++k) x[basic[k]] = xb[static_cast<Index>(k)];
      rhs = lp.rhs - a * x;
    }
    if (rhs.lpNorm<Eigen::Infinity>() > 1e-9 * (1 + lp.rhs.lpNorm<Eigen::Infinity>())) continue;
    bool ok = true;
    for (Index j = 0; j < n; ++j)
      if (x[j] < lp.lower[j] - 1e-9 || x[j] > lp.upper[j] + 1e-9) ok = false;
    if (!ok) continue;
    const double obj = lp.objective.dot(x);
    if (!best.feasible || obj < best.objective) {
      best.feasible = true;
      best.objective = obj;
      best.x = x;
    }
  }
  return best;
}

/// Seeded random instance: <= 6 variables, <= 6 equality rows, finite bounds.
/// Roughly 70% have a right-hand side generated from an interior point.
inline LpInstance random_lp(std::mt19937_64& rng) {
  auto uni = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1)); };
  bessplan::lp::LpBuilder b;
  const int n = uni(1, 6), m = uni(1, 6);
  std::vector<double> x0(n);
  for (int j = 0; j < n; ++j) {
    const double lo = uni(-5, 1), up = lo + uni(1, 6);
    b.add_variable(lo, up, uni(-5, 5));
    x0[j] = lo + (up - lo) * (uni(0, 100) / 100.0);
  }
  const bool consistent = uni(0, 9) < 7;
  for (int i = 0; i < m; ++i) {
    double rhs = 0;
    const auto row = b.add_row(0);
    for (int j = 0; j < n; ++j) {
      if (uni(0, 9) < 3) continue;
      const double v = uni(-3, 3);
      b.add_coefficient(row, j, v);
      rhs += v * x0[j];
    }
    b.set_rhs(row, consistent ? rhs : uni(-10, 10));
  }
  return b.build();
}

}  // namespace oracle
