#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace kinn {

/// Activation functions of the network dynamics. All of them are cheap value
/// types; evaluation is pure and thread-safe.
enum class Activation {
  Identity,
  ReLU,
  Sigmoid,
  Tanh,
  GCU,     // x * cos(x)
  SigmaN,  // [(1/delta)(x/c)^delta - 1] * x, defined for x >= 0 only
};

/// Zeros of an activation on an interval. ReLU vanishes on a whole half-line,
/// which `zero_ray` flags; `points` then holds the representative zero 0.
struct ZeroSet {
  std::vector<double> points;  // sorted ascending
  bool zero_ray = false;       // sigma == 0 on (-inf, 0]
};

class ActivationFn {
 public:
  ActivationFn() = default;
  explicit ActivationFn(Activation kind) : kind_(kind) {
    if (kind == Activation::SigmaN)
      throw std::invalid_argument("sigma_n requires (delta, c) parameters");
  }

  static ActivationFn sigma_n(double delta, double c) {
    if (!(delta > 0.0 && delta < 1.0))
      throw std::invalid_argument("sigma_n: delta must lie in (0,1)");
    if (!(c > 0.0)) throw std::invalid_argument("sigma_n: c must be positive");
    ActivationFn a(Activation::Identity);
    a.kind_ = Activation::SigmaN;
    a.delta_ = delta;
    a.c_ = c;
    return a;
  }

  /// Parses the config key: "identity" | "relu" | "sigmoid" | "tanh" | "gcu"
  /// | "sigma_n(delta,c)".
  static ActivationFn from_key(const std::string& key);

  Activation kind() const { return kind_; }
  double delta() const { return delta_; }
  double c() const { return c_; }

  double value(double x) const {
    switch (kind_) {
      case Activation::Identity: return x;
      case Activation::ReLU: return x > 0.0 ? x : 0.0;
      case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-x));
      case Activation::Tanh: return std::tanh(x);
      case Activation::GCU: return x * std::cos(x);
      case Activation::SigmaN: {
        require_nonnegative(x);
        return (std::pow(x / c_, delta_) / delta_ - 1.0) * x;
      }
    }
    return 0.0;
  }

  /// Analytic derivative. ReLU uses sigma'(0) = 0.
  double derivative(double x) const {
    switch (kind_) {
      case Activation::Identity: return 1.0;
      case Activation::ReLU: return x > 0.0 ? 1.0 : 0.0;
      case Activation::Sigmoid: {
        const double s = 1.0 / (1.0 + std::exp(-x));
        return s * (1.0 - s);
      }
      case Activation::Tanh: {
        const double t = std::tanh(x);
        return 1.0 - t * t;
      }
      case Activation::GCU: return std::cos(x) - x * std::sin(x);
      case Activation::SigmaN: {
        require_nonnegative(x);
        return (1.0 + delta_) / delta_ * std::pow(x / c_, delta_) - 1.0;
      }
    }
    return 0.0;
  }

  /// All zeros inside [lo, hi], analytic per activation (no root search).
  ZeroSet zeros(double lo, double hi) const {
    if (!(lo <= hi)) throw std::invalid_argument("zeros: empty interval");
    ZeroSet out;
    auto keep = [&](double z) {
      if (z >= lo && z <= hi) out.points.push_back(z);
    };
    switch (kind_) {
      case Activation::Identity:
      case Activation::Tanh:
        keep(0.0);
        break;
      case Activation::Sigmoid:
        break;  // strictly positive
      case Activation::ReLU:
        out.zero_ray = true;
        keep(0.0);
        break;
      case Activation::GCU: {
        keep(0.0);
        // remaining roots of x cos x: odd multiples of pi/2
        const double half_pi = std::numbers::pi / 2.0;
        for (long k = 0;; ++k) {
          const double z = (2.0 * k + 1.0) * half_pi;
          if (z > hi && -z < lo) break;
          keep(z);
          keep(-z);
        }
        std::sort(out.points.begin(), out.points.end());
        break;
      }
      case Activation::SigmaN: {
        keep(0.0);
        keep(c_ * std::pow(delta_, 1.0 / delta_));
        break;
      }
    }
    return out;
  }

  std::string key() const {
    switch (kind_) {
      case Activation::Identity: return "identity";
      case Activation::ReLU: return "relu";
      case Activation::Sigmoid: return "sigmoid";
      case Activation::Tanh: return "tanh";
      case Activation::GCU: return "gcu";
      case Activation::SigmaN:
        return "sigma_n(" + std::to_string(delta_) + "," + std::to_string(c_) + ")";
    }
    return "?";
  }

 private:
  void require_nonnegative(double x) const {
    if (x < 0.0)
      throw std::domain_error("sigma_n evaluated at negative argument x=" +
                              std::to_string(x));
  }

  Activation kind_ = Activation::Identity;
  double delta_ = 0.0, c_ = 1.0;
};

inline ActivationFn ActivationFn::from_key(const std::string& key) {
  if (key == "identity") return ActivationFn(Activation::Identity);
  if (key == "relu") return ActivationFn(Activation::ReLU);
  if (key == "sigmoid") return ActivationFn(Activation::Sigmoid);
  if (key == "tanh") return ActivationFn(Activation::Tanh);
  if (key == "gcu") return ActivationFn(Activation::GCU);
  if (key.rfind("sigma_n(", 0) == 0 && key.back() == ')') {
    const std::string args = key.substr(8, key.size() - 9);
    const auto comma = args.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("activation key: expected sigma_n(delta,c)");
    return sigma_n(std::stod(args.substr(0, comma)), std::stod(args.substr(comma + 1)));
  }
  throw std::invalid_argument("unknown activation key: " + key);
}

}  // namespace kinn
