#include "msq/experiments.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "msq/error.hpp"
#include "msq/gaussian_state.hpp"
#include "msq/optics.hpp"

namespace msq {

double coherence_length(double wavelength_nm, double length_mm, double refractive_index) {
  if (!(wavelength_nm > 0.0) || !(refractive_index > 0.0) || !(length_mm >= 0.0)) {
    throw InvalidArgument("coherence_length: inputs must be positive");
  }
  return std::sqrt(wavelength_nm * 1e-6 * length_mm / (std::numbers::pi * refractive_index));
}

double mode_count_theory(double pump_waist_mm, double coherence_length_mm) {
  if (!(pump_waist_mm > 0.0) || !(coherence_length_mm > 0.0)) {
    throw InvalidArgument("mode_count_theory: inputs must be positive");
  }
  const double r = pump_waist_mm / coherence_length_mm;
  return r * r;
}

double mode_count_measured(double region_mm, double waist_mm) {
  if (!(region_mm > 0.0) || !(waist_mm > 0.0)) throw InvalidArgument("mode_count_measured: inputs must be positive");
  if (waist_mm > region_mm) throw InvalidArgument("mode_count_measured: waist larger than the region");
  const double r = region_mm / waist_mm;
  return 0.25 * r * r;
}

namespace {

// Adapts a model that fills residual and Jacobian together to Eigen's MINPACK port.
template <class Model>
struct LeastSquares {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  Model& model;
  Eigen::Index n_params;
  Eigen::Index n_values;

  int inputs() const { return static_cast<int>(n_params); }
  int values() const { return static_cast<int>(n_values); }
  int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& r) const {
    Eigen::MatrixXd j;
    model(p, r, j);
    return 0;
  }
  int df(const Eigen::VectorXd& p, Eigen::MatrixXd& j) const {
    Eigen::VectorXd r;
    model(p, r, j);
    return 0;
  }
};

template <class Model>
Eigen::VectorXd levenberg_marquardt(Eigen::VectorXd p, Eigen::Index n_values, Model model) {
  LeastSquares<Model> f{model, p.size(), n_values};
  Eigen::LevenbergMarquardt<LeastSquares<Model>> lm(f);
  lm.parameters.ftol = 1e-15;
  lm.parameters.xtol = 1e-15;
  lm.parameters.maxfev = 2000;
  lm.minimize(p);
  return p;
}

void check_profile(const std::vector<double>& values) {
  double mass = 0.0;
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("fit_gaussian: profile must be finite and nonnegative");
    mass += v;
  }
  if (!(mass > 0.0)) throw InvalidArgument("fit_gaussian: profile has zero mass");
}

double relative_residual(const Eigen::VectorXd& r, const std::vector<double>& values) {
  double s = 0.0;
  for (double v : values) s += v * v;
  return r.norm() / std::sqrt(s);
}

}  // namespace

GaussianFit1D fit_gaussian(const std::vector<double>& u, const std::vector<double>& values) {
  if (u.size() != values.size() || u.size() < 3) throw InvalidArgument("fit_gaussian: need at least 3 samples");
  check_profile(values);
  double mass = 0.0, mean = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    mass += values[i];
    mean += values[i] * u[i];
    peak = std::max(peak, values[i]);
  }
  mean /= mass;
  double var = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) var += values[i] * (u[i] - mean) * (u[i] - mean);
  var /= mass;
  double min_step = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < u.size(); ++i) min_step = std::min(min_step, std::abs(u[i] - u[i - 1]));
  Eigen::VectorXd p(3);
  p << peak, mean, std::max(2.0 * std::sqrt(var), 0.5 * min_step);

  const auto m = static_cast<Eigen::Index>(u.size());
  auto model = [&](const Eigen::VectorXd& q, Eigen::VectorXd& r, Eigen::MatrixXd& j) {
    r.resize(m);
    j.resize(m, 3);
    const double w = q(2);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double d = u[static_cast<std::size_t>(i)] - q(1);
      const double e = std::exp(-2.0 * d * d / (w * w));
      r(i) = q(0) * e - values[static_cast<std::size_t>(i)];
      j(i, 0) = e;
      j(i, 1) = q(0) * e * 4.0 * d / (w * w);
      j(i, 2) = q(0) * e * 4.0 * d * d / (w * w * w);
    }
  };
  p = levenberg_marquardt(p, m, model);
  Eigen::VectorXd r;
  Eigen::MatrixXd j;
  model(p, r, j);
  GaussianFit1D fit{p(0), p(1), std::abs(p(2)), relative_residual(r, values), true};
  fit.gaussian = fit.residual <= kNonGaussianResidual;
  return fit;
}

GaussianFit2D fit_gaussian(const TransverseGrid& grid, const std::vector<double>& intensity, double angle_rad) {
  if (intensity.size() != grid.points()) throw InvalidArgument("fit_gaussian: profile does not match grid");
  check_profile(intensity);
  const double c = std::cos(angle_rad);
  const double s = std::sin(angle_rad);
  const std::size_t n = grid.points();
  std::vector<double> xs(n), ys(n);
  double mass = 0.0, mx = 0.0, my = 0.0, peak = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    xs[p] = grid.x(grid.ix_of(p));
    ys[p] = grid.y(grid.iy_of(p));
    mass += intensity[p];
    mx += intensity[p] * xs[p];
    my += intensity[p] * ys[p];
    peak = std::max(peak, intensity[p]);
  }
  mx /= mass;
  my /= mass;
  double vu = 0.0, vv = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    const double u = (xs[p] - mx) * c + (ys[p] - my) * s;
    const double v = -(xs[p] - mx) * s + (ys[p] - my) * c;
    vu += intensity[p] * u * u;
    vv += intensity[p] * v * v;
  }
  const double floor_w = 0.5 * std::min(grid.pitch_x(), grid.pitch_y());
  Eigen::VectorXd p0(5);
  p0 << peak, mx, my, std::max(2.0 * std::sqrt(vu / mass), floor_w), std::max(2.0 * std::sqrt(vv / mass), floor_w);

  const auto m = static_cast<Eigen::Index>(n);
  auto model = [&](const Eigen::VectorXd& q, Eigen::VectorXd& r, Eigen::MatrixXd& j) {
    r.resize(m);
    j.resize(m, 5);
    const double wu2 = q(3) * q(3);
    const double wv2 = q(4) * q(4);
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto k = static_cast<std::size_t>(i);
      const double dx = xs[k] - q(1);
      const double dy = ys[k] - q(2);
      const double u = dx * c + dy * s;
      const double v = -dx * s + dy * c;
      const double e = std::exp(-2.0 * u * u / wu2 - 2.0 * v * v / wv2);
      const double mv = q(0) * e;
      r(i) = mv - intensity[k];
      j(i, 0) = e;
      j(i, 1) = mv * (4.0 * u * c / wu2 - 4.0 * v * s / wv2);
      j(i, 2) = mv * (4.0 * u * s / wu2 + 4.0 * v * c / wv2);
      j(i, 3) = mv * 4.0 * u * u / (wu2 * q(3));
      j(i, 4) = mv * 4.0 * v * v / (wv2 * q(4));
    }
  };
  const Eigen::VectorXd p = levenberg_marquardt(p0, m, model);
  Eigen::VectorXd r;
  Eigen::MatrixXd j;
  model(p, r, j);
  GaussianFit2D fit;
  fit.amplitude = p(0);
  fit.center_x = p(1);
  fit.center_y = p(2);
  fit.waist_u = std::abs(p(3));
  fit.waist_v = std::abs(p(4));
  fit.angle_rad = angle_rad;
  fit.residual = relative_residual(r, intensity);
  fit.gaussian = fit.residual <= kNonGaussianResidual;
  return fit;
}

std::shared_ptr<const SymplecticProgram> signal_program(const ExperimentConfig& config) {
  auto program = std::make_shared<SymplecticProgram>(config.grid(), Basis::far_field);
  build_medium(*program, config.medium, config.profile);
  program->append(rgr_overlap(config.q0(), config.rgr_axis));
  program->to_basis(Basis::near_field);
  if (config.aperture_radius_mm > 0.0) {
    program->append(pump_aperture(program->output_grid(), config.aperture_radius_mm, config.aperture_order));
  }
  if (config.efficiency < 1.0) program->append(loss(config.efficiency));
  return program;
}

std::vector<double> scan_values(const ScanSpec& scan) {
  if (scan.steps < 2) throw InvalidArgument("scan: need at least 2 steps");
  std::vector<double> v(static_cast<std::size_t>(scan.steps));
  for (int i = 0; i < scan.steps; ++i) v[static_cast<std::size_t>(i)] = scan.start + (scan.stop - scan.start) * i / (scan.steps - 1);
  return v;
}

ScanSpec scan_for(const ExperimentConfig& config, ScanType type) {
  if (config.scan.type == type) return config.scan;
  ScanSpec s;
  s.type = type;
  s.direction = config.scan.direction;
  if (type == ScanType::phase) return s;
  const TransverseGrid det = signal_program(config)->output_grid();
  const double p = std::max(det.pitch_x(), det.pitch_y());
  if (type == ScanType::width) {
    s.start = 0.5 * p;
    s.stop = std::min(10.0 * p, 0.5 * std::min(det.extent_x(), det.extent_y()));
    s.steps = 20;
    return s;
  }
  const int half = std::min(det.nx(), det.ny()) / 2 - 2;
  const double reach = half * std::min(det.pitch_x(), det.pitch_y()) * std::sqrt(2.0);
  const int k = static_cast<int>(std::floor(reach / p));
  s.direction = ScanDirection::diagonal;
  s.start = -k * p;
  s.stop = k * p;
  s.steps = 2 * k + 1;
  return s;
}

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string describe(const TransverseGrid& g) {
  return std::to_string(g.nx()) + "x" + std::to_string(g.ny()) + " pitch " + fmt(g.pitch_x()) + "x" + fmt(g.pitch_y()) +
         " mm";
}

// Program plus, for the dense engine, its realized covariance.
class Bench {
 public:
  explicit Bench(const ExperimentConfig& config) : config_(config), program_(signal_program(config)) {
    if (config.engine == Engine::dense) {
      DenseOptions opts;
      opts.mode_cap = config.mode_cap;
      opts.tolerances = config.tolerances;
      covariance_ = dense_realize(*program_, opts);
    }
  }

  const TransverseGrid& detection_grid() const { return program_->output_grid(); }

  HomodyneForm form(const LocalOscillator& lo) const {
    return config_.engine == Engine::dense ? dense_form(covariance_, lo) : implicit_form(*program_, lo);
  }

  ScanPoint point(double value, double ratio, double chi, const LocalOscillator& lo, double angle) const {
    ScanPoint pt;
    pt.value = value;
    pt.ratio = ratio;
    pt.chi = chi;
    const double truth = to_db(ratio);
    pt.db = add_electronic_noise(truth, config_.electronic_floor_db);
    pt.db_corrected = correct_electronic_noise(pt.db, config_.electronic_floor_db);
    std::vector<double> intensity(lo.probe().size());
    for (std::size_t i = 0; i < intensity.size(); ++i) intensity[i] = std::norm(lo.probe()[i]);
    pt.lo_fit = fit_gaussian(detection_grid(), intensity, angle);
    return pt;
  }

  ScanPoint optimal(double value, const BloSeedSpec& seed) const {
    const LocalOscillator lo = build_blo(seed, detection_grid());
    const PhasePoint best = optimal_phase(form(lo));
    return point(value, best.ratio, best.chi, lo, seed.angle_rad);
  }

  ScanResult result(std::string variable, std::string unit) const {
    ScanResult r;
    r.variable = std::move(variable);
    r.unit = std::move(unit);
    r.metadata = {{"config_hash", config_hash(config_)},
                  {"engine", to_string(config_.engine)},
                  {"medium_grid", describe(config_.grid())},
                  {"detection_grid", describe(detection_grid())},
                  {"q0_rad_per_mm", fmt(config_.q0())},
                  {"nyquist_pairing", to_string(NyquistPairing::pair)}};
    return r;
  }

 private:
  const ExperimentConfig& config_;
  std::shared_ptr<const SymplecticProgram> program_;
  Eigen::MatrixXd covariance_;
};

void require_inside(const TransverseGrid& g, double x, double y) {
  const double x0 = g.x(0), x1 = g.x(g.nx() - 1);
  const double y0 = g.y(0), y1 = g.y(g.ny() - 1);
  if (x < x0 || x > x1 || y < y0 || y > y1) throw InvalidArgument("position outside the detection grid");
}

}  // namespace

ScanResult phase_scan(const ExperimentConfig& config, const std::vector<double>& phases) {
  const Bench bench(config);
  const LocalOscillator lo = build_blo(config.blo, bench.detection_grid());
  const HomodyneForm form = bench.form(lo);
  ScanResult r = bench.result("chi", "rad");
  for (double chi : phases) r.points.push_back(bench.point(chi, form.ratio(chi), chi, lo, config.blo.angle_rad));
  return r;
}

ScanResult position_scan(const ExperimentConfig& config, ScanDirection direction,
                         const std::vector<double>& positions_mm) {
  if (!std::is_sorted(positions_mm.begin(), positions_mm.end())) {
    throw InvalidArgument("position scan: positions must be ascending");
  }
  const Bench bench(config);
  const double angle = direction_angle(direction);
  ScanResult r = bench.result("position", "mm");
  r.metadata.emplace_back("direction", to_string(direction));
  for (double pos : positions_mm) {
    BloSeedSpec seed = config.blo;
    seed.angle_rad = angle;
    seed.center_x_mm = pos * std::cos(angle);
    seed.center_y_mm = pos * std::sin(angle);
    require_inside(bench.detection_grid(), seed.center_x_mm, seed.center_y_mm);
    r.points.push_back(bench.optimal(pos, seed));
  }
  return r;
}

ScanResult width_scan(const ExperimentConfig& config, const std::vector<double>& widths_mm) {
  for (std::size_t i = 0; i < widths_mm.size(); ++i) {
    if (!(widths_mm[i] > 0.0)) throw InvalidArgument("width scan: widths must be positive");
    if (i > 0 && !(widths_mm[i] > widths_mm[i - 1])) throw InvalidArgument("width scan: widths must be ascending");
  }
  const Bench bench(config);
  ScanResult r = bench.result("width", "mm");
  r.metadata.emplace_back("direction", to_string(config.scan.direction));
  for (double w : widths_mm) {
    BloSeedSpec seed = config.blo;
    seed.angle_rad = direction_angle(config.scan.direction);
    seed.width_mm = w;
    r.points.push_back(bench.optimal(w, seed));
  }
  return r;
}

ScanResult run_scan(const ExperimentConfig& config) {
  const auto values = scan_values(config.scan);
  switch (config.scan.type) {
    case ScanType::phase:
      return phase_scan(config, values);
    case ScanType::position:
      return position_scan(config, config.scan.direction, values);
    case ScanType::width:
      return width_scan(config, values);
  }
  throw InvalidArgument("unknown scan type");
}

double plateau_length(const ScanResult& scan) {
  const auto& p = scan.points;
  if (p.size() < 3) throw InvalidArgument("plateau_length: need at least 3 points");
  std::size_t c = 0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (std::abs(p[i].value) < std::abs(p[c].value)) c = i;
  }
  const double threshold = 0.5 * p[c].db_corrected;
  if (!(threshold < 0.0)) throw NumericalError("plateau_length: no squeezing at the scan centre");
  auto crossing = [&](std::size_t inside, std::size_t outside) {
    const double a = p[inside].db_corrected - threshold;
    const double b = p[outside].db_corrected - threshold;
    return p[inside].value + (p[outside].value - p[inside].value) * a / (a - b);
  };
  std::optional<double> right, left;
  for (std::size_t i = c; i + 1 < p.size(); ++i) {
    if (p[i + 1].db_corrected > threshold) {
      right = crossing(i, i + 1);
      break;
    }
  }
  for (std::size_t i = c; i > 0; --i) {
    if (p[i - 1].db_corrected > threshold) {
      left = crossing(i, i - 1);
      break;
    }
  }
  if (!right || !left) throw NumericalError("plateau_length: the plateau extends beyond the scan range");
  return *right - *left;
}

std::optional<CoherenceWidth> coherence_width(const ScanResult& scan) {
  const auto& p = scan.points;
  if (p.size() < 2) throw InvalidArgument("coherence_width: need at least 2 points");
  const double half = 0.5 * p.back().db_corrected;
  if (!(half < 0.0)) throw NumericalError("coherence_width: no squeezing at the widest point");
  if (p.front().db_corrected <= half) return std::nullopt;
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p[i].db_corrected <= half) {
      const double a = p[i - 1].db_corrected - half;
      const double b = p[i].db_corrected - half;
      const double t = a / (a - b);
      return CoherenceWidth{p[i - 1].value + t * (p[i].value - p[i - 1].value),
                            p[i - 1].lo_fit.waist_u + t * (p[i].lo_fit.waist_u - p[i - 1].lo_fit.waist_u)};
    }
  }
  return std::nullopt;
}

double waist_spread(const ScanResult& scan) {
  if (scan.points.empty()) return 0.0;
  double mean = 0.0;
  for (const auto& pt : scan.points) mean += pt.lo_fit.waist_u;
  mean /= static_cast<double>(scan.points.size());
  double worst = 0.0;
  for (const auto& pt : scan.points) worst = std::max(worst, std::abs(pt.lo_fit.waist_u - mean) / mean);
  return worst;
}

}  // namespace msq
