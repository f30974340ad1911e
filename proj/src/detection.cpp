#include "msq/detection.hpp"

#include <cmath>
#include <numbers>

#include "msq/error.hpp"

namespace msq {
namespace {

using cd = std::complex<double>;

double power(const Field& f) {
  double s = 0.0;
  for (const auto& v : f) s += std::norm(v);
  return s;
}

}  // namespace

LocalOscillator LocalOscillator::normalized(const TransverseGrid& grid, Field probe, Field conjugate) {
  if (probe.size() != grid.points() || conjugate.size() != grid.points()) {
    throw InvalidArgument("local oscillator: field size does not match grid");
  }
  const double total = power(probe) + power(conjugate);
  if (!(total > 0.0) || !std::isfinite(total)) throw InvalidArgument("local oscillator: zero or non-finite field");
  const double k = 1.0 / std::sqrt(total);
  for (auto& v : probe) v *= k;
  for (auto& v : conjugate) v *= k;
  return LocalOscillator(grid, std::move(probe), std::move(conjugate));
}

LocalOscillator LocalOscillator::from_normalized(const TransverseGrid& grid, Field probe, Field conjugate) {
  if (probe.size() != grid.points() || conjugate.size() != grid.points()) {
    throw InvalidArgument("local oscillator: field size does not match grid");
  }
  const double total = power(probe) + power(conjugate);
  if (!(std::abs(total - 1.0) <= 1e-9)) {
    throw InvalidArgument("local oscillator is not normalized (total power " + std::to_string(total) + ")");
  }
  return LocalOscillator(grid, std::move(probe), std::move(conjugate));
}

double LocalOscillator::probe_power() const { return power(probe_); }
double LocalOscillator::conjugate_power() const { return power(conjugate_); }

Field LocalOscillator::mode_amplitudes() const {
  Field c;
  c.reserve(2 * probe_.size());
  c.insert(c.end(), probe_.begin(), probe_.end());
  c.insert(c.end(), conjugate_.begin(), conjugate_.end());
  return c;
}

LocalOscillator LocalOscillator::with_probe_phase(const std::vector<double>& phase) const {
  if (phase.size() != probe_.size()) throw InvalidArgument("probe phase map does not match grid");
  Field p = probe_;
  for (std::size_t i = 0; i < p.size(); ++i) p[i] *= std::polar(1.0, phase[i]);
  return LocalOscillator(grid_, std::move(p), conjugate_);
}

LocalOscillator ideal_balanced_lo(const TransverseGrid& grid, const Field& field) {
  Field conj(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) conj[i] = std::conj(field[i]);
  return LocalOscillator::normalized(grid, field, std::move(conj));
}

LocalOscillator probe_only_lo(const TransverseGrid& grid, const Field& field) {
  return LocalOscillator::normalized(grid, field, Field(field.size(), cd{}));
}

const char* to_string(Engine e) { return e == Engine::dense ? "dense" : "implicit"; }

double HomodyneForm::ratio(double chi) const {
  const double c2 = std::cos(chi);
  const double s2 = std::sin(chi);
  return a * c2 * c2 + b * s2 * s2 + 2.0 * c * s2 * c2;
}

double HomodyneForm::min_ratio() const {
  return 0.5 * (a + b) - std::hypot(0.5 * (a - b), c);
}

double HomodyneForm::max_ratio() const {
  return 0.5 * (a + b) + std::hypot(0.5 * (a - b), c);
}

HomodyneForm dense_form(const Eigen::MatrixXd& covariance, const LocalOscillator& lo) {
  const Field c = lo.mode_amplitudes();
  const auto n = static_cast<Eigen::Index>(2 * c.size());
  if (covariance.rows() != n) throw InvalidArgument("homodyne: LO grid does not match the covariance");
  Eigen::VectorXd w0(n), w1(n);
  for (std::size_t m = 0; m < c.size(); ++m) {
    const auto i = static_cast<Eigen::Index>(2 * m);
    w0(i) = c[m].real();
    w0(i + 1) = c[m].imag();
    w1(i) = -c[m].imag();
    w1(i + 1) = c[m].real();
  }
  const double vac = 0.25 * w0.squaredNorm();
  const Eigen::VectorXd s0 = covariance * w0;
  const Eigen::VectorXd s1 = covariance * w1;
  return {w0.dot(s0) / vac, w1.dot(s1) / vac, w0.dot(s1) / vac};
}

HomodyneForm homodyne_form(const GaussianState& state, const LocalOscillator& lo, Engine engine,
                           const DenseOptions& dense) {
  if (state.basis() != Basis::near_field) {
    throw InvalidArgument("homodyne: basis mismatch, the state is in the far field");
  }
  if (!(state.grid() == lo.grid())) throw InvalidArgument("homodyne: LO grid does not match the state grid");
  if (state.has_covariance()) return dense_form(state.covariance(), lo);
  if (engine == Engine::implicit) return implicit_form(*state.program(), lo);
  return dense_form(dense_realize(*state.program(), dense), lo);
}

double homodyne_variance(const GaussianState& state, const LocalOscillator& lo, double chi, Engine engine) {
  return homodyne_form(state, lo, engine).ratio(chi);
}

std::vector<PhasePoint> phase_scan(const HomodyneForm& form, double chi_start, double chi_stop, int n) {
  if (n < 2) throw InvalidArgument("phase scan: need at least 2 points");
  std::vector<PhasePoint> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double chi = chi_start + (chi_stop - chi_start) * i / (n - 1);
    out.push_back({chi, form.ratio(chi)});
  }
  return out;
}

std::vector<PhasePoint> phase_scan(const GaussianState& state, const LocalOscillator& lo, double chi_start,
                                   double chi_stop, int n, Engine engine) {
  return phase_scan(homodyne_form(state, lo, engine), chi_start, chi_stop, n);
}

PhasePoint optimal_phase(const HomodyneForm& form) {
  constexpr int kCoarse = 64;
  const double step = std::numbers::pi / kCoarse;
  int best = 0;
  double best_ratio = form.ratio(0.0);
  for (int i = 1; i < kCoarse; ++i) {
    const double r = form.ratio(i * step);
    if (r < best_ratio) {
      best_ratio = r;
      best = i;
    }
  }
  double lo = (best - 1) * step;
  double hi = (best + 1) * step;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = form.ratio(x1);
  double f2 = form.ratio(x2);
  while (hi - lo > 1e-4) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = form.ratio(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = form.ratio(x2);
    }
  }
  double chi = 0.5 * (lo + hi);
  chi = std::fmod(chi + std::numbers::pi, std::numbers::pi);
  return {chi, form.ratio(chi)};
}

double to_db(double ratio) {
  if (!(ratio > 0.0)) throw InvalidArgument("to_db: ratio must be positive");
  return 10.0 * std::log10(ratio);
}

double from_db(double db) { return std::pow(10.0, db / 10.0); }

double correct_electronic_noise(double measured_db, double floor_db) {
  const double r = from_db(measured_db);
  const double f = from_db(floor_db);
  if (!(f < 1.0)) throw InvalidArgument("electronic floor must lie below the quantum noise level");
  if (!(r > f)) throw InvalidArgument("measured noise is at or below the electronic floor");
  return to_db((r - f) / (1.0 - f));
}

double add_electronic_noise(double true_db, double floor_db) {
  const double f = from_db(floor_db);
  if (!(f < 1.0)) throw InvalidArgument("electronic floor must lie below the quantum noise level");
  return to_db(from_db(true_db) * (1.0 - f) + f);
}

std::vector<MismatchPoint> lo_mismatch_study(const GaussianState& state, const LocalOscillator& lo,
                                             const std::vector<std::vector<double>>& distortion_maps,
                                             const std::vector<double>& amplitudes, Engine engine) {
  if (distortion_maps.empty()) throw InvalidArgument("mismatch study: need at least one distortion map");
  std::vector<MismatchPoint> out;
  for (double amp : amplitudes) {
    double sum = 0.0;
    for (const auto& map : distortion_maps) {
      std::vector<double> phase(map.size());
      for (std::size_t i = 0; i < map.size(); ++i) phase[i] = amp * map[i];
      sum += optimal_phase(homodyne_form(state, lo.with_probe_phase(phase), engine)).ratio;
    }
    out.push_back({amp, sum / static_cast<double>(distortion_maps.size())});
  }
  return out;
}

}  // namespace msq
