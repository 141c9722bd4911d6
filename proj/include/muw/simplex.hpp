#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "muw/common.hpp"

namespace muw {

struct SimplexOptions {
  int max_iter = 600;
  double f_tol = 1e-24;   // stop when the simplex spread of f is below this
  double x_tol = 1e-13;   // or the simplex diameter is below this
};

struct SimplexResult {
  RVec x;
  double f = 0.0;
  int iterations = 0;
};

/// Derivative-free simplex descent (Nelder-Mead), deterministic.
inline SimplexResult nelder_mead(const std::function<double(const RVec&)>& f, const RVec& x0,
                                 double step, const SimplexOptions& opts = {}) {
  const int n = static_cast<int>(x0.size());
  std::vector<RVec> xs;
  std::vector<double> fs;
  xs.reserve(static_cast<std::size_t>(n) + 1);
  xs.push_back(x0);
  for (int i = 0; i < n; ++i) {
    RVec p = x0;
    p(i) += step;
    xs.push_back(p);
  }
  for (const auto& p : xs) fs.push_back(f(p));

  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
  std::vector<int> order(xs.size());
  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fs[static_cast<std::size_t>(a)] < fs[static_cast<std::size_t>(b)]; });
    const int best = order.front(), worst = order.back(), second = order[order.size() - 2];

    double diam = 0.0;
    for (const auto& p : xs) diam = std::max(diam, (p - xs[static_cast<std::size_t>(best)]).norm());
    if (fs[static_cast<std::size_t>(worst)] - fs[static_cast<std::size_t>(best)] < opts.f_tol ||
        diam < opts.x_tol)
      break;

    RVec centroid = RVec::Zero(n);
    for (int i : order)
      if (i != worst) centroid += xs[static_cast<std::size_t>(i)];
    centroid /= static_cast<double>(n);

    const RVec reflected = centroid + alpha * (centroid - xs[static_cast<std::size_t>(worst)]);
    const double fr = f(reflected);
    if (fr < fs[static_cast<std::size_t>(best)]) {
      const RVec expanded = centroid + gamma * (reflected - centroid);
      const double fe = f(expanded);
      if (fe < fr) {
        xs[static_cast<std::size_t>(worst)] = expanded;
        fs[static_cast<std::size_t>(worst)] = fe;
      } else {
        xs[static_cast<std::size_t>(worst)] = reflected;
        fs[static_cast<std::size_t>(worst)] = fr;
      }
      continue;
    }
    if (fr < fs[static_cast<std::size_t>(second)]) {
      xs[static_cast<std::size_t>(worst)] = reflected;
      fs[static_cast<std::size_t>(worst)] = fr;
      continue;
    }
    const RVec contracted = centroid + rho * (xs[static_cast<std::size_t>(worst)] - centroid);
    const double fc = f(contracted);
    if (fc < fs[static_cast<std::size_t>(worst)]) {
      xs[static_cast<std::size_t>(worst)] = contracted;
      fs[static_cast<std::size_t>(worst)] = fc;
      continue;
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (static_cast<int>(i) == best) continue;
      xs[i] = xs[static_cast<std::size_t>(best)] + sigma * (xs[i] - xs[static_cast<std::size_t>(best)]);
      fs[i] = f(xs[i]);
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < fs.size(); ++i)
    if (fs[i] < fs[best]) best = i;
  return SimplexResult{xs[best], fs[best], iter};
}

}  // namespace muw
