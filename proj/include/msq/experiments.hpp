#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "msq/config.hpp"
#include "msq/detection.hpp"
#include "msq/program.hpp"

namespace msq {

/// l_coh = sqrt(lambda l_g / (pi n_s)), in mm. l_g = 0 gives 0.
double coherence_length(double wavelength_nm, double length_mm, double refractive_index);
/// N = w_p^2 / l_coh^2.
double mode_count_theory(double pump_waist_mm, double coherence_length_mm);
/// l^2 / (4 w0^2); requires 0 < w0 <= l.
double mode_count_measured(double region_mm, double waist_mm);

/// Relative residual above which a fit is reported as non-Gaussian.
inline constexpr double kNonGaussianResidual = 0.02;

struct GaussianFit1D {
  double amplitude = 0.0;
  double center = 0.0;
  double waist = 0.0;     // 1/e^2 intensity radius
  double residual = 0.0;  // |data - model| / |data|
  bool gaussian = true;
};

/// Least-squares fit of A exp(-2 (u - u0)^2 / w^2) to nonnegative samples.
GaussianFit1D fit_gaussian(const std::vector<double>& u, const std::vector<double>& values);

struct GaussianFit2D {
  double amplitude = 0.0;
  double center_x = 0.0;
  double center_y = 0.0;
  double waist_u = 0.0;  // along the axis at angle_rad
  double waist_v = 0.0;  // perpendicular to it
  double angle_rad = 0.0;
  double residual = 0.0;
  bool gaussian = true;
};

/// Fit of A exp(-2 u^2 / w_u^2 - 2 v^2 / w_v^2) with (u, v) the frame rotated by
/// angle_rad around the fitted center. `intensity` holds one value per grid point.
GaussianFit2D fit_gaussian(const TransverseGrid& grid, const std::vector<double>& intensity, double angle_rad);

struct ScanPoint {
  double value = 0.0;         // scan variable
  double ratio = 1.0;         // noise relative to the vacuum level
  double db = 0.0;            // as read with the electronic floor included
  double db_corrected = 0.0;  // after removing the floor
  double chi = 0.0;           // detection phase (optimal phase for spatial scans)
  GaussianFit2D lo_fit{};     // probe intensity fit; unset for phase scans
};

struct ScanResult {
  std::string variable;
  std::string unit;
  std::vector<ScanPoint> points;
  std::vector<std::pair<std::string, std::string>> metadata;
};

/// Medium, overlap, pump aperture and detector efficiency for `config`, ending
/// in the near field on the detection grid.
std::shared_ptr<const SymplecticProgram> signal_program(const ExperimentConfig& config);

/// Evenly spaced values of a scan.
std::vector<double> scan_values(const ScanSpec& scan);

/// config.scan when its type is `type`; otherwise a default derived from the
/// detection grid: phase [0, pi] in 65 steps; positions along x=y one detection
/// pixel apart, staying two pixels inside the grid; widths from half a pixel to
/// ten pixels (at most half the grid) in 20 steps.
ScanSpec scan_for(const ExperimentConfig& config, ScanType type);

ScanResult phase_scan(const ExperimentConfig& config, const std::vector<double>& phases);
/// Moves the BLO centre along `direction`, narrow mask axis along the motion.
ScanResult position_scan(const ExperimentConfig& config, ScanDirection direction,
                         const std::vector<double>& positions_mm);
/// Narrow-axis mask widths, ascending; the mask is oriented along config.scan.direction.
ScanResult width_scan(const ExperimentConfig& config, const std::vector<double>& widths_mm);
/// Runs whatever [scan] describes.
ScanResult run_scan(const ExperimentConfig& config);

/// Full width of the region where the squeezing (in dB) exceeds half its value
/// at the scan point nearest zero, by linear interpolation. Throws if the
/// plateau reaches the scan ends.
double plateau_length(const ScanResult& position_scan);

struct CoherenceWidth {
  double width_mm;  // mask width at which the squeezing in dB reaches half its saturated value
  double waist_mm;  // fitted narrow-axis LO waist at that width
};

/// Empirical coherence size from a width scan. Saturation is the value at the
/// widest point; nullopt if the narrowest point still exceeds half of it.
std::optional<CoherenceWidth> coherence_width(const ScanResult& width_scan);

/// Largest relative deviation of the fitted narrow waist from its mean.
double waist_spread(const ScanResult& scan);

}  // namespace msq
