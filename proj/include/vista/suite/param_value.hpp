#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vista/geometry/pose.hpp"
#include "vista/suite/rng.hpp"

namespace vista {

namespace dist {
struct Constant {
  double value = 0.0;
  friend bool operator==(const Constant&, const Constant&) = default;
};
struct Uniform {
  double lo = 0.0;
  double hi = 0.0;
  friend bool operator==(const Uniform&, const Uniform&) = default;
};
// Box-Muller sample clamped (not rejected) into [lo, hi].
struct Normal {
  double mean = 0.0;
  double sd = 0.0;
  double lo = -INFINITY;
  double hi = INFINITY;
  friend bool operator==(const Normal&, const Normal&) = default;
};
struct Choice {
  std::vector<double> values;
  std::vector<double> weights;  // same length as values
  friend bool operator==(const Choice&, const Choice&) = default;
};
}  // namespace dist

/// A scenario parameter: a plain number, or a distribution sampled when a
/// suite is generated.
class ParamValue {
 public:
  using Repr = std::variant<double, dist::Constant, dist::Uniform, dist::Normal, dist::Choice>;

  ParamValue() : repr_(0.0) {}
  ParamValue(double literal) : repr_(literal) {}  // NOLINT(google-explicit-constructor)
  ParamValue(Repr r) : repr_(std::move(r)) {}     // NOLINT(google-explicit-constructor)

  bool is_literal() const { return std::holds_alternative<double>(repr_); }
  double literal() const { return std::get<double>(repr_); }
  const Repr& repr() const { return repr_; }

  /// Linear rescale, used for the "_deg" unit convention. `k` must be > 0.
  ParamValue scaled(double k) const {
    return std::visit(
        [k](const auto& v) -> ParamValue {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>) {
            return v * k;
          } else if constexpr (std::is_same_v<T, dist::Constant>) {
            return Repr{dist::Constant{v.value * k}};
          } else if constexpr (std::is_same_v<T, dist::Uniform>) {
            return Repr{dist::Uniform{v.lo * k, v.hi * k}};
          } else if constexpr (std::is_same_v<T, dist::Normal>) {
            return Repr{dist::Normal{v.mean * k, v.sd * k, v.lo * k, v.hi * k}};
          } else {
            dist::Choice c = v;
            for (double& x : c.values) x *= k;
            return Repr{c};
          }
        },
        repr_);
  }

  /// Describes the first broken invariant, if any.
  std::optional<std::string> check() const {
    return std::visit(
        [](const auto& v) -> std::optional<std::string> {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>) {
            if (!std::isfinite(v)) return "literal must be finite";
          } else if constexpr (std::is_same_v<T, dist::Constant>) {
            if (!std::isfinite(v.value)) return "constant must be finite";
          } else if constexpr (std::is_same_v<T, dist::Uniform>) {
            if (!std::isfinite(v.lo) || !std::isfinite(v.hi)) return "uniform bounds must be finite";
            if (v.lo > v.hi) return "uniform requires lo <= hi";
          } else if constexpr (std::is_same_v<T, dist::Normal>) {
            if (!std::isfinite(v.mean) || !std::isfinite(v.sd)) return "normal mean/sd must be finite";
            if (v.sd < 0.0) return "normal requires sd >= 0";
            if (v.lo > v.hi) return "normal requires lo <= hi";
          } else {
            if (v.values.empty()) return "choice requires at least one value";
            if (v.values.size() != v.weights.size()) return "choice values/weights length mismatch";
            double sum = 0.0;
            for (double w : v.weights) {
              if (!(w >= 0.0) || !std::isfinite(w)) return "choice weights must be finite and >= 0";
              sum += w;
            }
            if (!(sum > 0.0)) return "choice weights must have a positive sum";
          }
          return std::nullopt;
        },
        repr_);
  }

  friend bool operator==(const ParamValue&, const ParamValue&) = default;

 private:
  Repr repr_;
};

/// Draws one value. Draw counts are fixed per family so a sampled suite is
/// reproducible: literal/constant 0, uniform 1, normal 2, choice 1.
inline double sample_param(const ParamValue& p, Xoshiro256& rng) {
  return std::visit(
      [&rng](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return v;
        } else if constexpr (std::is_same_v<T, dist::Constant>) {
          return v.value;
        } else if constexpr (std::is_same_v<T, dist::Uniform>) {
          const double u = rng.uniform01();
          return v.lo == v.hi ? v.lo : v.lo + u * (v.hi - v.lo);
        } else if constexpr (std::is_same_v<T, dist::Normal>) {
          const double u1 = rng.uniform01_open_low();
          const double u2 = rng.uniform01();
          const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
          return std::clamp(v.mean + v.sd * z, v.lo, v.hi);
        } else {
          const double total = std::accumulate(v.weights.begin(), v.weights.end(), 0.0);
          const double target = rng.uniform01() * total;
          double acc = 0.0;
          for (std::size_t i = 0; i < v.values.size(); ++i) {
            acc += v.weights[i];
            if (target < acc) return v.values[i];
          }
          // Only reachable through rounding at the top of the range.
          for (std::size_t i = v.values.size(); i-- > 0;)
            if (v.weights[i] > 0.0) return v.values[i];
          return v.values.back();
        }
      },
      p.repr());
}

}  // namespace vista
