#pragma once

#include <string>

#include "msq/config.hpp"
#include "msq/experiments.hpp"

namespace msq {

inline constexpr const char* kVersion = "1.0.0";

/// parse_config of an empty file: every key at its documented default.
ExperimentConfig default_config();

/// CSV with a `#` header (version, metadata, resolved config) followed by one
/// row per scan point. Phase scans: chi_rad,ratio,db,db_corrected. Spatial
/// scans: <variable>_mm,ratio,db,db_corrected,chi_rad,center_x_mm,center_y_mm,
/// waist_narrow_mm,waist_long_mm,fit_residual. Floats carry 17 significant digits.
std::string scan_csv(const ScanResult& result, const ExperimentConfig& config);
std::string scan_json(const ScanResult& result, const ExperimentConfig& config);

struct ModeCountReport {
  double l_coh_mm;
  double n_theory;
  double n_measured_formula;
  // Filled when the scans are simulated.
  bool simulated = false;
  double plateau_mm = 0.0;
  double w0_mm = 0.0;
  double n_simulated = 0.0;
};

ModeCountReport mode_count_report(const ExperimentConfig& config, bool simulate);
std::string mode_count_json(const ModeCountReport& report, const ExperimentConfig& config);

/// Standalone matplotlib script that reads `csv_path` and writes `<csv_path>.png`.
std::string plot_script(const std::string& csv_path, const ScanResult& result);

}  // namespace msq
