#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "msq/detection.hpp"
#include "msq/error.hpp"
#include "msq/gain_profile.hpp"
#include "msq/optics.hpp"

namespace msq {

enum class ScanType { phase, position, width };
/// Scan directions in the near-field plane: along x, along y, along x=y, along x=-y.
enum class ScanDirection { x, y, diagonal, antidiagonal };

const char* to_string(ScanType t);
const char* to_string(ScanDirection d);
/// Angle of the direction from the x axis, in radians.
double direction_angle(ScanDirection d);

struct ScanSpec {
  ScanType type = ScanType::phase;
  double start = 0.0;  // rad for phase scans, mm otherwise
  double stop = 3.141592653589793;
  int steps = 65;
  ScanDirection direction = ScanDirection::diagonal;
  friend bool operator==(const ScanSpec&, const ScanSpec&) = default;
};

/// Fully resolved experiment description. Every field has a default; see
/// README.md for the file format and the default of each key.
struct ExperimentConfig {
  // [grid] medium-plane grid; the detection grid follows from the overlap.
  int nx = 64;
  int ny = 32;
  double pitch_mm = 0.03;
  double pitch_y_mm = 0.06;  // defaults to 2 pitch_mm when parsed
  // [medium]
  MediumSpec medium{};
  // [gain_profile]; s_max always equals gain_to_squeeze(medium.gain).
  GainProfile profile{.q_gap_floor = 0.1};
  // [rgr]
  double q0_rad_per_mm = 0.0;  // 0 selects the largest on-grid value, size/4 samples
  Axis rgr_axis = Axis::x;
  // [pump]
  double pump_waist_mm = 1.0;
  double aperture_radius_mm = 0.9;  // 0 disables the aperture
  double aperture_order = 12.0;
  // [blo]; blo.angle_rad is derived from blo_angle_deg.
  BloSeedSpec blo{MaskShape::slit, 0.2, 0.3, 0.0, 0.0, 0.25 * 3.141592653589793, 4.0, std::nullopt, false};
  double blo_angle_deg = 45.0;
  // [detector]
  double efficiency = 1.0;
  double electronic_floor_db = -13.0;
  // [scan]
  ScanSpec scan{};
  // [engine]
  Engine engine = Engine::implicit;
  Tolerances tolerances{};
  std::size_t mode_cap = 4096;
  // [mode_count] values entering the measured-mode-count formula
  double region_mm = 3.1;
  double coherence_waist_mm = 0.18;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

  TransverseGrid grid() const { return TransverseGrid(nx, ny, pitch_mm, pitch_y_mm); }
  /// q0 actually used (resolves the automatic value).
  double q0() const;
};

struct ConfigDiagnostic {
  int line = 0;  // 0 for whole-file problems
  std::string message;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<ConfigDiagnostic> diagnostics);
  const std::vector<ConfigDiagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<ConfigDiagnostic> diagnostics_;
};

/// Parses the line-oriented `[section]` / `key = value` format. Throws
/// ConfigError listing every problem found, with line numbers.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);
/// Canonical text form with every key spelled out; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);
/// FNV-1a hash of the canonical text, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

}  // namespace msq
