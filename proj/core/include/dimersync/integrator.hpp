#pragma once

// Adaptive Dormand-Prince 5(4) integrator for linear ODEs on dense complex
// matrices (vectorized density matrices or any Eigen matrix state).

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include <Eigen/Dense>

#include "dimersync/error.hpp"

namespace dimersync {

struct IntegratorOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0 selects a step from the derivative norm
  double min_step = 1e-14;
  double max_step = 0.0;  // 0 means unbounded
  long max_steps = 50'000'000;
};

struct IntegratorStats {
  long accepted = 0;
  long rejected = 0;
  long evaluations = 0;
};

template <typename State>
class DormandPrince {
 public:
  /// rhs(t, y, dydt) must resize/overwrite dydt.
  using Rhs = std::function<void(double, const State&, State&)>;

  DormandPrince(Rhs rhs, IntegratorOptions options = {})
      : rhs_(std::move(rhs)), opt_(options) {}

  /// Advances y from t to t_end exactly. The step size carries over between
  /// calls so a sequence of sample intervals does not restart cold.
  void advance(State& y, double& t, double t_end) {
    if (t_end <= t) return;
    if (!have_derivative_) {
      rhs_(t, y, k1_);
      ++stats_.evaluations;
      have_derivative_ = true;
    }
    if (h_ <= 0.0) h_ = initial_step(y, t_end - t);

    while (t < t_end) {
      if (stats_.accepted + stats_.rejected >= opt_.max_steps) {
        throw NumericalError("integrator exceeded the maximum step count");
      }
      double h = std::min(h_, t_end - t);
      if (opt_.max_step > 0.0) h = std::min(h, opt_.max_step);
      const bool last = h >= t_end - t;
      if (h < opt_.min_step && !last) {
        throw NumericalError("integrator step size underflow at t=" +
                             std::to_string(t));
      }
      const double err = attempt(y, t, h);
      if (err <= 1.0) {
        ++stats_.accepted;
        t = last ? t_end : t + h;
        y.swap(y_new_);
        k1_.swap(k7_);  // first-same-as-last
        const double factor =
            err == 0.0 ? kMaxGrow
                       : std::clamp(kSafety * std::pow(err, -0.2), kMinGrow,
                                    kMaxGrow);
        // Keep the unclipped step when the sample boundary shortened h.
        if (!(last && h < h_)) h_ = h * factor;
      } else {
        ++stats_.rejected;
        h_ = h * std::max(kMinShrink, kSafety * std::pow(err, -0.2));
        if (h_ < opt_.min_step) {
          throw NumericalError("integrator step size underflow at t=" +
                               std::to_string(t));
        }
      }
    }
  }

  /// Call after modifying the state externally.
  void reset() {
    have_derivative_ = false;
  }

  [[nodiscard]] const IntegratorStats& stats() const { return stats_; }

 private:
  static constexpr double kSafety = 0.9;
  static constexpr double kMinGrow = 0.2;
  static constexpr double kMaxGrow = 5.0;
  static constexpr double kMinShrink = 0.1;

  double initial_step(const State& y, double span) {
    if (opt_.initial_step > 0.0) return opt_.initial_step;
    const double d0 = scaled_norm(y, y, y);
    const double d1 = scaled_norm(k1_, y, y);
    double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    return std::min(h, span);
  }

  // RMS of |v_i| / (atol + rtol max(|a_i|, |b_i|)).
  double scaled_norm(const State& v, const State& a, const State& b) const {
    const auto n = v.size();
    if (n == 0) return 0.0;
    double acc = 0.0;
    const auto* pv = v.data();
    const auto* pa = a.data();
    const auto* pb = b.data();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sc =
          opt_.atol + opt_.rtol * std::max(std::abs(pa[i]), std::abs(pb[i]));
      acc += std::norm(pv[i]) / (sc * sc);
    }
    return std::sqrt(acc / static_cast<double>(n));
  }

  double attempt(const State& y, double t, double h) {
    // Dormand-Prince 5(4) tableau.
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                     a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                     a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                     b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    tmp_ = y + h * a21 * k1_;
    rhs_(t + c2 * h, tmp_, k2_);
    tmp_ = y + h * (a31 * k1_ + a32 * k2_);
    rhs_(t + c3 * h, tmp_, k3_);
    tmp_ = y + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
    rhs_(t + c4 * h, tmp_, k4_);
    tmp_ = y + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
    rhs_(t + c5 * h, tmp_, k5_);
    tmp_ = y + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
    rhs_(t + h, tmp_, k6_);
    y_new_ = y + h * (b1 * k1_ + b3 * k3_ + b4 * k4_ + b5 * k5_ + b6 * k6_);
    rhs_(t + h, y_new_, k7_);
    stats_.evaluations += 6;

    tmp_ = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);
    return scaled_norm(tmp_, y, y_new_);
  }

  Rhs rhs_;
  IntegratorOptions opt_;
  IntegratorStats stats_;
  double h_ = 0.0;
  bool have_derivative_ = false;
  State k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, y_new_;
};

}  // namespace dimersync
