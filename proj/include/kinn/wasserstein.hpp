#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "kinn/grid.hpp"

namespace kinn {

namespace detail {

// Integral of |F_a - F_b| where both CDFs are piecewise linear between the
// merged breakpoints. Each CDF is described by sorted breakpoints xs and the
// CDF values at them (left of xs.front() both are 0, right of xs.back() 1).
struct PiecewiseCdf {
  std::vector<double> xs;   // sorted, unique
  std::vector<double> Fs;   // CDF value at xs[i] (right limit)
  bool step = false;        // step function (empirical) vs linear interpolation

  double eval(double x) const {
    if (x < xs.front()) return 0.0;
    if (x >= xs.back()) return Fs.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
    if (step) return Fs[i];
    const double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return Fs[i] + t * (Fs[i + 1] - Fs[i]);
  }
};

inline double l1_between_cdfs(const PiecewiseCdf& a, const PiecewiseCdf& b) {
  std::vector<double> pts;
  pts.reserve(a.xs.size() + b.xs.size());
  pts.insert(pts.end(), a.xs.begin(), a.xs.end());
  pts.insert(pts.end(), b.xs.begin(), b.xs.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    // both CDFs are linear (or constant) inside the open interval; Simpson on
    // |difference| is exact unless the difference changes sign, so split at
    // the root of the linear difference.
    const double x0 = pts[i], x1 = pts[i + 1];
    const double h = x1 - x0;
    if (h <= 0.0) continue;
    const double eps = h * 1e-12;
    const double d0 = a.eval(x0 + eps) - b.eval(x0 + eps);
    const double d1 = a.eval(x1 - eps) - b.eval(x1 - eps);
    if (d0 * d1 >= 0.0) {
      total += 0.5 * (std::abs(d0) + std::abs(d1)) * h;
    } else {
      const double r = d0 / (d0 - d1);  // root position in [0,1]
      total += 0.5 * std::abs(d0) * r * h + 0.5 * std::abs(d1) * (1.0 - r) * h;
    }
  }
  return total;
}

inline PiecewiseCdf empirical_cdf(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  PiecewiseCdf c;
  c.step = true;
  const double n = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!c.xs.empty() && samples[i] == c.xs.back()) {
      c.Fs.back() = (i + 1) / n;
    } else {
      c.xs.push_back(samples[i]);
      c.Fs.push_back((i + 1) / n);
    }
  }
  return c;
}

inline PiecewiseCdf field_cdf(const DensityField& f) {
  if (f.grid.dim != 1) throw std::invalid_argument("field_cdf: 1D only");
  PiecewiseCdf c;
  const int n = f.grid.x.cells;
  const double dx = f.grid.x.dx();
  c.xs.resize(n + 1);
  c.Fs.resize(n + 1);
  c.xs[0] = f.grid.x.edge(0);
  c.Fs[0] = 0.0;
  for (int i = 0; i < n; ++i) {
    c.xs[i + 1] = f.grid.x.edge(i + 1);
    c.Fs[i + 1] = c.Fs[i] + f.at(i) * dx;
  }
  const double total = c.Fs[n];
  if (total <= 0.0) throw std::invalid_argument("field_cdf: field has no mass");
  for (double& v : c.Fs) v /= total;
  return c;
}

}  // namespace detail

/// 1-Wasserstein distance between two 1D sample sets. Equal sizes reduce to
/// the mean absolute difference of the sorted samples; unequal sizes use the
/// CDF-distance integral.
inline double wasserstein1_1d(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("wasserstein1_1d: empty sample list");
  if (a.size() == b.size()) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s / a.size();
  }
  return detail::l1_between_cdfs(detail::empirical_cdf(std::move(a)),
                                 detail::empirical_cdf(std::move(b)));
}

/// W1 between an empirical sample and a cell-averaged density (the density's
/// CDF is piecewise linear across cells).
inline double wasserstein1_1d(const std::vector<double>& samples,
                              const DensityField& f) {
  if (samples.empty()) throw std::invalid_argument("wasserstein1_1d: empty samples");
  return detail::l1_between_cdfs(detail::empirical_cdf(samples),
                                 detail::field_cdf(f));
}

}  // namespace kinn
