#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "kinn/activation.hpp"
#include "kinn/network.hpp"

namespace kinn {

// ---------------------------------------------------------------------------
// Exponential-polynomial algebra: finite sums  f(t) = sum c * t^p * e^{a t}.
// The moment recursion for piecewise-constant (w, b) stays inside this class
// of functions, so each segment is integrated exactly (the p-branch covers the
// resonant case w = 0).
// ---------------------------------------------------------------------------

class ExpPoly {
 public:
  struct Term {
    double c;
    int p;
    double a;
  };

  static ExpPoly constant(double c) {
    ExpPoly f;
    f.add({c, 0, 0.0});
    return f;
  }

  void add(Term t) {
    if (t.c == 0.0) return;
    for (auto& u : terms_)
      if (u.p == t.p && u.a == t.a) {
        u.c += t.c;
        return;
      }
    terms_.push_back(t);
  }

  double eval(double t) const {
    double s = 0.0;
    for (const auto& u : terms_) s += u.c * std::pow(t, u.p) * std::exp(u.a * t);
    return s;
  }

  ExpPoly times_exp(double da) const {  // f(t) * e^{da t}
    ExpPoly g;
    for (auto u : terms_) {
      u.a += da;
      g.add(u);
    }
    return g;
  }

  ExpPoly scaled(double s) const {
    ExpPoly g;
    for (auto u : terms_) {
      u.c *= s;
      g.add(u);
    }
    return g;
  }

  ExpPoly plus_constant(double c) const {
    ExpPoly g = *this;
    g.add({c, 0, 0.0});
    return g;
  }

  /// F(t) = int_0^t f(s) ds, exact.
  ExpPoly antiderivative0() const {
    ExpPoly F;
    for (const auto& u : terms_) {
      if (u.a == 0.0) {
        F.add({u.c / (u.p + 1), u.p + 1, 0.0});
        continue;
      }
      // int_0^t s^p e^{as} ds by repeated integration by parts
      double coeff = u.c;
      int p = u.p;
      while (true) {
        F.add({coeff / u.a, p, u.a});
        if (p == 0) {
          F.add({-coeff / u.a, 0, 0.0});
          break;
        }
        coeff = -coeff * p / u.a;
        --p;
      }
    }
    return F;
  }

  const std::vector<Term>& terms() const { return terms_; }

 private:
  std::vector<Term> terms_;
};

// ---------------------------------------------------------------------------
// Moment dynamics of the 1D identity-activation mean-field equation:
//   d/dt m_k = k ( w(t) m_k + b(t) m_{k-1} ),
//   m_k(t) = e^{Phi_k(t)} ( m_k(0) + k int_0^t e^{-Phi_k(s)} b(s) m_{k-1}(s) ds ),
//   Phi_k(t) = k int_0^t w(s) ds.
// ---------------------------------------------------------------------------

inline double moment_ode_rhs(int k, double w, double b, double m_k, double m_km1) {
  if (k < 1) throw std::invalid_argument("moment_ode_rhs: k must be >= 1");
  return k * (w * m_k + b * m_km1);
}

/// Phi_k(t) = k int_0^t w(s) ds for piecewise-constant w.
inline double phi_k(int k, double t, const NetworkParams& params) {
  if (params.dim != 1) throw std::invalid_argument("phi_k: 1D params required");
  double acc = 0.0;
  double prev_t = 0.0;
  double prev_w = params.table.front().w[0];
  for (const auto& e : params.table) {
    if (e.t >= t) break;
    if (e.t > prev_t) acc += prev_w * (e.t - prev_t);
    prev_t = std::max(prev_t, e.t);
    prev_w = e.w[0];
  }
  if (t > prev_t) acc += prev_w * (t - prev_t);
  return k * acc;
}

/// Exact moments m_0..m_K at time t for piecewise-constant (w, b).
inline std::vector<double> moments_closed(const NetworkParams& params,
                                          std::vector<double> initial, double t) {
  if (params.dim != 1) throw std::invalid_argument("moments_closed: 1D params");
  if (initial.empty() || std::abs(initial[0] - 1.0) > 1e-12)
    throw std::invalid_argument("moments_closed: m_0 must be 1");
  const int K = static_cast<int>(initial.size()) - 1;

  // segment boundaries covering [0, t]
  std::vector<double> cuts{0.0};
  for (const auto& e : params.table)
    if (e.t > 0.0 && e.t < t) cuts.push_back(e.t);
  cuts.push_back(t);

  std::vector<double> m = initial;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double t0 = cuts[s], t1 = cuts[s + 1];
    const double tau = t1 - t0;
    if (tau <= 0.0) continue;
    const double w = params.w1(0.5 * (t0 + t1));
    const double b = params.b1(0.5 * (t0 + t1));
    // local recursion in tau
    std::vector<ExpPoly> mk(K + 1);
    mk[0] = ExpPoly::constant(1.0);
    for (int k = 1; k <= K; ++k) {
      const ExpPoly integrand = mk[k - 1].scaled(k * b).times_exp(-k * w);
      mk[k] = integrand.antiderivative0().plus_constant(m[k]).times_exp(k * w);
    }
    for (int k = 1; k <= K; ++k) m[k] = mk[k].eval(tau);
  }
  return m;
}

/// m_k(t) for constant or piecewise-constant (w, b); moments 0..k-1 are
/// computed recursively from the supplied initial values.
inline double moment_closed_solution(int k, double t, const NetworkParams& params,
                                     const std::vector<double>& initial) {
  if (k < 0 || k >= static_cast<int>(initial.size()))
    throw std::invalid_argument("moment_closed_solution: initial moments 0..k needed");
  return moments_closed(params, initial, t)[k];
}

inline double variance_closed(const NetworkParams& params,
                              const std::vector<double>& initial, double t) {
  auto m = moments_closed(params, initial, t);
  if (m.size() < 3) throw std::invalid_argument("variance_closed: need m_0..m_2");
  return m[2] - m[1] * m[1];
}

// ---------------------------------------------------------------------------
// Behavior taxonomy and threshold times
// ---------------------------------------------------------------------------

enum class BiasFamily { ZeroBias, MeanPreserving };
enum class ThresholdQuantity { Energy, Variance };

struct BehaviorFlags {
  bool local_energy_bound = false;  // m2(t1) < m2(0)
  bool energy_decay = false;        // m2 strictly decreasing
  bool local_aggregation = false;   // V(t1) < V(0)
  bool aggregation = false;         // V strictly decreasing
  bool clustering = false;          // V -> 0
  BiasFamily family = BiasFamily::ZeroBias;
  double delta_location = 0.0;      // concentration point when clustering
};

namespace detail {

inline BiasFamily detect_family(const NetworkParams& params, double m1_initial) {
  bool zero = true, meanp = true;
  for (const auto& e : params.table) {
    if (e.b[0] != 0.0) zero = false;
    if (std::abs(e.b[0] + e.w[0] * m1_initial) > 1e-12) meanp = false;
  }
  if (zero) return BiasFamily::ZeroBias;
  if (meanp) return BiasFamily::MeanPreserving;
  throw std::invalid_argument(
      "classify_behavior: unsupported (w,b) family; need b == 0 or b == -w*m1(0)");
}

}  // namespace detail

/// Evaluates the aggregation/clustering taxonomy from the closed solutions.
/// Supported families: zero bias and the mean-preserving bias b = -w m1(0).
inline BehaviorFlags classify_behavior(const NetworkParams& params,
                                       const std::vector<double>& initial, double t1,
                                       double t2) {
  if (!(t1 < t2)) throw std::invalid_argument("classify_behavior: need t1 < t2");
  if (initial.size() < 3)
    throw std::invalid_argument("classify_behavior: need m_0..m_2");
  BehaviorFlags f;
  f.family = detail::detect_family(params, initial[1]);

  const auto m_t1 = moments_closed(params, initial, t1);
  const double V0 = initial[2] - initial[1] * initial[1];
  const double V1 = m_t1[2] - m_t1[1] * m_t1[1];
  f.local_energy_bound = m_t1[2] < initial[2];
  f.local_aggregation = V1 < V0;

  bool w_all_negative = true;
  for (const auto& e : params.table)
    if (!(e.w[0] < 0.0)) w_all_negative = false;
  // zero bias: m2(t) = m2(0) e^{Phi_2}; mean-preserving: m2 = V(0) e^{Phi_2} + m1(0)^2.
  // In both families V(t) = V(0) e^{Phi_2}, so monotone decay means w < 0.
  const double energy_scale = f.family == BiasFamily::ZeroBias ? initial[2] : V0;
  f.energy_decay = w_all_negative && energy_scale > 0.0;
  f.aggregation = w_all_negative && V0 > 0.0;
  f.clustering = params.table.back().w[0] < 0.0;  // lim Phi_1 = -inf

  f.delta_location = f.family == BiasFamily::ZeroBias ? 0.0 : initial[1];
  return f;
}

/// Smallest t with energy/variance below level V (Corollary-style bounds,
/// constant w < 0). The mean-preserving energy case additionally requires
/// V > m1(0)^2.
inline double threshold_time(double V, double w, BiasFamily family,
                             ThresholdQuantity quantity,
                             const std::vector<double>& initial) {
  if (!(w < 0.0))
    throw std::invalid_argument("threshold_time: requires constant w < 0");
  if (!(V > 0.0)) throw std::invalid_argument("threshold_time: level V must be > 0");
  if (initial.size() < 3)
    throw std::invalid_argument("threshold_time: need m_0..m_2");
  const double m1 = initial[1], m2 = initial[2];
  const double V0 = m2 - m1 * m1;

  double ratio = 0.0;
  if (family == BiasFamily::ZeroBias) {
    ratio = quantity == ThresholdQuantity::Energy ? V / m2 : V / V0;
  } else {
    if (quantity == ThresholdQuantity::Energy) {
      if (!(V > m1 * m1))
        throw std::invalid_argument(
            "threshold_time: mean-preserving energy bound requires V > m1(0)^2");
      ratio = (V - m1 * m1) / V0;
    } else {
      ratio = V / V0;
    }
  }
  if (ratio >= 1.0) return 0.0;  // already below the level
  if (!(ratio > 0.0))
    throw std::invalid_argument("threshold_time: level unreachable from the start");
  return std::log(ratio) / (2.0 * w);
}

/// Affine surrogate (slope, intercept) so the moment machinery applies with
/// w <- w*slope, b <- b*slope + intercept.
inline std::pair<double, double> linearized_activation(const ActivationFn& act) {
  switch (act.kind()) {
    case Activation::Identity: return {1.0, 0.0};
    case Activation::Tanh: return {1.0, 0.0};
    case Activation::Sigmoid: return {0.25, 0.5};
    default:
      throw std::invalid_argument("linearized_activation: unsupported activation " +
                                  act.key());
  }
}

}  // namespace kinn
