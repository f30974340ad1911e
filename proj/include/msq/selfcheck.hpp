#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "msq/detection.hpp"
#include "msq/error.hpp"
#include "msq/program.hpp"

namespace msq {

/// Dense and implicit homodyne ratios must agree to this absolute tolerance.
inline constexpr double kEngineTolerance = 1e-8;

/// Randomized full pipeline (medium, optional overlap, phases, aperture, loss)
/// on a grid no larger than max_size x max_size, with a random LO and phase.
struct RandomPipeline {
  std::shared_ptr<const SymplecticProgram> program;
  LocalOscillator lo;
  double chi;
};

RandomPipeline random_pipeline(std::mt19937_64& rng, int max_size = 8);
/// Complex Gaussian probe and conjugate amplitudes, normalized.
LocalOscillator random_lo(std::mt19937_64& rng, const TransverseGrid& grid);

struct SelfcheckReport {
  int trials = 0;
  double max_engine_difference = 0.0;
  double min_uncertainty = 0.0;
  double max_symplectic_defect = 0.0;
  double max_vacuum_deviation = 0.0;
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

/// Cross-engine agreement, uncertainty principle, symplecticity of every
/// lossless step and the vacuum noise level, over `trials` random pipelines.
SelfcheckReport run_selfcheck(std::uint64_t seed, int trials, const Tolerances& tolerances = {});

}  // namespace msq
