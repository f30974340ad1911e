#pragma once

#include <limits>

namespace msq {

/// Radially symmetric far-field gain annulus expressed as a squeeze parameter
/// s(|q|) = s_max * exp(-(|q| - q_peak)^2 / (2 q_sigma^2)), with the value at
/// |q| = 0 clamped to at most q_gap_floor * s_max.
struct GainProfile {
  double s_max = 0.0;
  double q_peak = 0.0;                                         // rad/mm
  double q_sigma = std::numeric_limits<double>::infinity();    // rad/mm
  double q_gap_floor = 1.0;                                    // fraction of s_max at q = 0
  double pump_phase = 0.0;                                     // rad

  /// Flat profile s(q) = s for every q.
  static GainProfile uniform(double s, double pump_phase = 0.0);
  static GainProfile annulus(double s_max, double q_peak, double q_sigma, double q_gap_floor,
                             double pump_phase = 0.0);

  /// Throws InvalidArgument on negative s_max, non-positive width or floor outside [0, 1].
  void validate() const;
  double at(double q_abs) const;
  /// Same shape, new peak value.
  GainProfile with_peak(double s) const;

  friend bool operator==(const GainProfile&, const GainProfile&) = default;
};

}  // namespace msq
