#include "msq/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "msq/dense_engine.hpp"
#include "msq/gaussian_state.hpp"
#include "msq/optics.hpp"

namespace msq {
namespace {

double uniform(std::mt19937_64& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
int uniform_int(std::mt19937_64& rng, int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }
bool coin(std::mt19937_64& rng, double p) { return uniform(rng, 0.0, 1.0) < p; }

std::vector<double> random_phases(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = uniform(rng, -std::numbers::pi, std::numbers::pi);
  return v;
}

}  // namespace

LocalOscillator random_lo(std::mt19937_64& rng, const TransverseGrid& grid) {
  std::normal_distribution<double> n(0.0, 1.0);
  Field probe(grid.points()), conj(grid.points());
  for (auto& v : probe) v = {n(rng), n(rng)};
  for (auto& v : conj) v = {n(rng), n(rng)};
  return LocalOscillator::normalized(grid, std::move(probe), std::move(conj));
}

RandomPipeline random_pipeline(std::mt19937_64& rng, int max_size) {
  const int half = std::max(1, max_size / 2);
  const TransverseGrid grid(2 * uniform_int(rng, 1, half), 2 * uniform_int(rng, 1, half), uniform(rng, 0.05, 0.3),
                            uniform(rng, 0.05, 0.3));
  auto program = std::make_shared<SymplecticProgram>(grid, Basis::far_field);

  MediumSpec medium;
  medium.length_mm = coin(rng, 0.3) ? 0.0 : uniform(rng, 0.0, 20.0);
  medium.slices = uniform_int(rng, 1, 4);
  medium.gain = uniform(rng, 1.0, 6.0);
  const double qmax = std::numbers::pi / std::min(grid.pitch_x(), grid.pitch_y());
  const GainProfile profile = GainProfile::annulus(1.0, uniform(rng, 0.0, qmax), uniform(rng, 0.2, 2.0) * qmax,
                                                   uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 2.0 * std::numbers::pi));
  build_medium(*program, medium, profile, coin(rng, 0.5) ? NyquistPairing::pair : NyquistPairing::exclude);

  const Axis axis = coin(rng, 0.5) ? Axis::x : Axis::y;
  if (grid.size(axis) >= 4 && coin(rng, 0.8)) {
    const int m = uniform_int(rng, 1, grid.size(axis) / 4);
    program->append(rgr_overlap(m * grid.dq(axis), axis));
  }
  if (coin(rng, 0.5)) {
    program->append(QuadraturePhase{Basis::far_field, random_phases(rng, program->output_grid().points())});
  }
  program->to_basis(Basis::near_field);
  const TransverseGrid& out = program->output_grid();
  if (coin(rng, 0.5)) {
    const double extent = std::min(out.extent_x(), out.extent_y());
    program->append(pump_aperture(out, uniform(rng, 0.2, 1.0) * extent, uniform(rng, 2.0, 10.0)));
  }
  if (coin(rng, 0.3)) program->append(QuadraturePhase{Basis::near_field, random_phases(rng, out.points())});
  if (coin(rng, 0.7)) program->append(loss(uniform(rng, 0.3, 1.0)));

  LocalOscillator lo = random_lo(rng, out);
  const double chi = uniform(rng, 0.0, std::numbers::pi);
  return {program, std::move(lo), chi};
}

SelfcheckReport run_selfcheck(std::uint64_t seed, int trials, const Tolerances& tol) {
  std::mt19937_64 rng(seed);
  SelfcheckReport rep;
  rep.min_uncertainty = std::numeric_limits<double>::infinity();
  DenseOptions opts;
  opts.tolerances = tol;
  auto fail = [&](int trial, const std::string& what) {
    rep.failures.push_back("trial " + std::to_string(trial) + ": " + what);
  };
  for (int t = 0; t < trials; ++t) {
    ++rep.trials;
    RandomPipeline p = random_pipeline(rng);
    try {
      for (const auto& step : p.program->steps()) {
        if (is_lossy(step.element)) continue;
        const double d = symplectic_defect(real_symplectic(mode_transform(step)));
        rep.max_symplectic_defect = std::max(rep.max_symplectic_defect, d);
        if (!(d <= tol.structural)) fail(t, element_name(step.element) + " is not symplectic");
      }
      const Eigen::MatrixXd cov = dense_realize(*p.program, opts);
      const double u = check_uncertainty(cov);
      rep.min_uncertainty = std::min(rep.min_uncertainty, u);
      if (!(u >= -tol.structural)) fail(t, "uncertainty principle violated");
      const double dense = dense_form(cov, p.lo).ratio(p.chi);
      const double implicit = implicit_form(*p.program, p.lo).ratio(p.chi);
      const double diff = std::abs(dense - implicit);
      rep.max_engine_difference = std::max(rep.max_engine_difference, diff);
      if (!(diff < kEngineTolerance)) fail(t, "dense and implicit engines disagree by " + short_number(diff));

      const auto vac = GaussianState::vacuum(p.program->output_grid());
      const double r = dense_form(vac.covariance(), random_lo(rng, p.program->output_grid())).ratio(p.chi);
      rep.max_vacuum_deviation = std::max(rep.max_vacuum_deviation, std::abs(r - 1.0));
      if (!(std::abs(r - 1.0) <= tol.structural)) fail(t, "vacuum is not at the shot-noise level");
    } catch (const Error& e) {
      fail(t, e.what());
    }
  }
  return rep;
}

}  // namespace msq
