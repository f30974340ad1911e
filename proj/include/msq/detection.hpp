#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "msq/dense_engine.hpp"
#include "msq/gaussian_state.hpp"
#include "msq/program.hpp"

namespace msq {

using Field = std::vector<std::complex<double>>;

/// Bichromatic local oscillator: near-field amplitudes of the probe (+Omega) and
/// conjugate (-Omega) components, normalized to unit total power.
class LocalOscillator {
 public:
  /// Rescales the fields to unit total power. Throws on a zero field.
  static LocalOscillator normalized(const TransverseGrid& grid, Field probe, Field conjugate);
  /// Takes fields as given; throws InvalidArgument unless their power is 1 within 1e-9.
  static LocalOscillator from_normalized(const TransverseGrid& grid, Field probe, Field conjugate);

  const TransverseGrid& grid() const { return grid_; }
  const Field& probe() const { return probe_; }
  const Field& conjugate() const { return conjugate_; }
  double probe_power() const;
  double conjugate_power() const;
  /// Amplitudes c_m in the fixed mode ordering (probe block, then conjugate block).
  Field mode_amplitudes() const;
  /// Same LO with exp(i phi(rho)) applied to the probe component only.
  LocalOscillator with_probe_phase(const std::vector<double>& phase) const;

 private:
  LocalOscillator(TransverseGrid grid, Field probe, Field conjugate)
      : grid_(grid), probe_(std::move(probe)), conjugate_(std::move(conjugate)) {}

  TransverseGrid grid_;
  Field probe_;
  Field conjugate_;
};

/// alpha_c = conj(alpha_p), equal powers.
LocalOscillator ideal_balanced_lo(const TransverseGrid& grid, const Field& field);
/// alpha_c = 0.
LocalOscillator probe_only_lo(const TransverseGrid& grid, const Field& field);

enum class MaskShape { gaussian, slit, uniform };

const char* to_string(MaskShape m);

/// Seed mask imaged onto the gain medium, then spatially filtered and amplified.
/// The narrow axis of the mask points along `angle_rad` from the x axis.
struct BloSeedSpec {
  MaskShape mask = MaskShape::slit;
  double width_mm = 0.31;    // gaussian: 1/e^2 waist along the narrow axis; slit: full width
  double height_mm = 0.58;   // 1/e^2 waist along the long axis
  double center_x_mm = 0.0;
  double center_y_mm = 0.0;
  double angle_rad = 0.0;
  double gain = 4.0;
  std::optional<double> filter_radius;  // rad/mm; nullopt selects the automatic cutoff
  bool ideal_balanced = false;

  void validate() const;
  friend bool operator==(const BloSeedSpec&, const BloSeedSpec&) = default;
};

/// Hard Fourier-plane cutoff: the first zero of the slit's sinc spectrum (2 pi / width),
/// no cutoff (infinity) for the other masks.
double auto_filter_radius(const BloSeedSpec& seed);

/// Masked and Fourier-filtered seed amplitude on the near-field grid.
Field seed_field(const BloSeedSpec& seed, const TransverseGrid& grid);

/// Mean field of the seeded amplifier: alpha_p = sqrt(G) alpha, alpha_c = sqrt(G - 1) conj(alpha),
/// normalized. With ideal_balanced the conjugate is conj(alpha) at equal power.
LocalOscillator build_blo(const BloSeedSpec& seed, const TransverseGrid& grid);

enum class Engine { dense, implicit };

const char* to_string(Engine e);

/// Homodyne noise as a function of the detection phase chi, as a ratio to the
/// vacuum level: ratio(chi) = a cos^2 chi + b sin^2 chi + 2 c sin chi cos chi.
/// The LO measures Q(chi) = sum_m Re(c_m e^{i chi}) X_m + Im(c_m e^{i chi}) Y_m.
struct HomodyneForm {
  double a = 1.0;
  double b = 1.0;
  double c = 0.0;

  double ratio(double chi) const;
  double min_ratio() const;
  double max_ratio() const;
};

/// Dense form from a covariance matrix.
HomodyneForm dense_form(const Eigen::MatrixXd& covariance, const LocalOscillator& lo);

/// Matrix-free form: the LO is back-propagated through the adjoint of every
/// element (FFTs for basis changes), never materializing the covariance.
HomodyneForm implicit_form(const SymplecticProgram& program, const LocalOscillator& lo);

/// Form for any state; program-backed states use the chosen engine.
HomodyneForm homodyne_form(const GaussianState& state, const LocalOscillator& lo, Engine engine = Engine::implicit,
                           const DenseOptions& dense = {});

double homodyne_variance(const GaussianState& state, const LocalOscillator& lo, double chi,
                         Engine engine = Engine::implicit);
double implicit_variance(const SymplecticProgram& program, const LocalOscillator& lo, double chi);

struct PhasePoint {
  double chi;
  double ratio;
};

/// n >= 2 evenly spaced phases over [chi_start, chi_stop].
std::vector<PhasePoint> phase_scan(const HomodyneForm& form, double chi_start, double chi_stop, int n);
std::vector<PhasePoint> phase_scan(const GaussianState& state, const LocalOscillator& lo, double chi_start,
                                   double chi_stop, int n, Engine engine = Engine::implicit);

/// Minimum of a 64-point scan over [0, pi) refined by golden-section search to 1e-4 rad.
PhasePoint optimal_phase(const HomodyneForm& form);

double to_db(double ratio);
double from_db(double db);
/// Removes an electronic noise floor from signal and reference:
/// r = (r_meas - r_floor) / (1 - r_floor).
double correct_electronic_noise(double measured_db, double floor_db);
/// Inverse of correct_electronic_noise.
double add_electronic_noise(double true_db, double floor_db);

struct MismatchPoint {
  double amplitude;
  double ratio;  // mean optimal-phase ratio over the supplied distortion maps
};

/// Optimal-phase ratio as the probe-component phase is distorted by
/// amplitude * map, averaged over the supplied maps.
std::vector<MismatchPoint> lo_mismatch_study(const GaussianState& state, const LocalOscillator& lo,
                                             const std::vector<std::vector<double>>& distortion_maps,
                                             const std::vector<double>& amplitudes, Engine engine = Engine::implicit);

}  // namespace msq
