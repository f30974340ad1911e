#include "msq/dense_engine.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace msq {
namespace {

using cd = std::complex<double>;
using Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

// Explicit DFT between the centered near-field grid and the far-field grid:
// F(q, rho) = exp(-i q . rho) / sqrt(N).
Eigen::MatrixXcd dft_matrix(const TransverseGrid& g) {
  const std::size_t n = g.points();
  Eigen::MatrixXcd f(idx(n), idx(n));
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const double qx = g.qx(g.ix_of(k));
    const double qy = g.qy(g.iy_of(k));
    for (std::size_t j = 0; j < n; ++j) {
      const double arg = qx * g.x(g.ix_of(j)) + qy * g.y(g.iy_of(j));
      f(idx(k), idx(j)) = std::polar(norm, -arg);
    }
  }
  return f;
}

ModeTransform identity_transform(std::size_t modes) {
  return {Eigen::MatrixXcd::Identity(idx(modes), idx(modes)), Eigen::MatrixXcd::Zero(idx(modes), idx(modes))};
}

ModeTransform phase_transform(const TransverseGrid& g, const std::vector<double>& phase) {
  ModeTransform t = identity_transform(g.modes());
  for (std::size_t p = 0; p < g.points(); ++p) {
    const cd e = std::polar(1.0, phase[p]);
    t.u(idx(g.mode(Sideband::probe, p)), idx(g.mode(Sideband::probe, p))) = e;
    t.u(idx(g.mode(Sideband::conjugate, p)), idx(g.mode(Sideband::conjugate, p))) = e;
  }
  return t;
}

ModeTransform squeeze_transform(const TransverseGrid& g, const SqueezeLayer& layer) {
  ModeTransform t = identity_transform(g.modes());
  const cd pump = std::polar(1.0, layer.profile.pump_phase);
  for (std::size_t p = 0; p < g.points(); ++p) {
    double s = layer.scale * layer.profile.at(g.q_norm(p));
    if (layer.nyquist == NyquistPairing::exclude && g.on_nyquist(p)) s = 0.0;
    const Index m1 = idx(g.mode(Sideband::probe, p));
    const Index m2 = idx(g.mode(Sideband::conjugate, g.mirror(p)));
    t.u(m1, m1) = std::cosh(s);
    t.u(m2, m2) = std::cosh(s);
    t.v(m1, m2) = pump * std::sinh(s);
    t.v(m2, m1) = pump * std::sinh(s);
  }
  return t;
}

ModeTransform overlap_transform(const TransverseGrid& in, const TransverseGrid& out, const RgrOverlap& r) {
  const int m = rgr_shift(r, in);
  const std::size_t n_in = in.points();
  const std::size_t n_out = out.points();
  ModeTransform t{Eigen::MatrixXcd::Zero(idx(2 * n_out), idx(2 * n_in)),
                  Eigen::MatrixXcd::Zero(idx(2 * n_out), idx(2 * n_in))};
  const double h = 1.0 / std::numbers::sqrt2;
  const int n_axis_in = in.size(r.axis);
  const int n_axis_out = out.size(r.axis);
  for (std::size_t po = 0; po < n_out; ++po) {
    const int io = r.axis == Axis::x ? out.ix_of(po) : out.iy_of(po);
    const int other = r.axis == Axis::x ? out.iy_of(po) : out.ix_of(po);
    const int k = TransverseGrid::signed_index(io, n_axis_out);
    auto in_point = [&](int k_in) {
      const int i = TransverseGrid::array_index(k_in, n_axis_in);
      return r.axis == Axis::x ? in.point(i, other) : in.point(other, i);
    };
    for (int sb = 0; sb < 2; ++sb) {
      const auto side = static_cast<Sideband>(sb);
      const Index row = idx(out.mode(side, po));
      if (k == -m) {
        // Band edge: both translated bands meet at the input dc column.
        t.u(row, idx(in.mode(side, in_point(0)))) = 1.0;
      } else {
        t.u(row, idx(in.mode(side, in_point(k + m)))) = h;
        t.u(row, idx(in.mode(side, in_point(k - m)))) = h;
      }
    }
  }
  return t;
}

std::vector<double> fresnel_phase(const TransverseGrid& g, const FresnelSlice& f) {
  std::vector<double> phase(g.points());
  for (std::size_t p = 0; p < g.points(); ++p) {
    const double q = g.q_norm(p);
    phase[p] = -q * q * f.dz_mm / (2.0 * f.wavenumber);
  }
  return phase;
}

}  // namespace

ModeTransform mode_transform(const ProgramStep& step) {
  const TransverseGrid& g = step.grid_in;
  if (const auto* s = std::get_if<SqueezeLayer>(&step.element)) return squeeze_transform(g, *s);
  if (const auto* f = std::get_if<FresnelSlice>(&step.element)) return phase_transform(g, fresnel_phase(g, *f));
  if (const auto* ph = std::get_if<QuadraturePhase>(&step.element)) return phase_transform(g, ph->phase);
  if (const auto* r = std::get_if<RgrOverlap>(&step.element)) return overlap_transform(g, step.grid_out, *r);
  if (const auto* ft = std::get_if<FourierTransform>(&step.element)) {
    const Eigen::MatrixXcd f = ft->inverse ? Eigen::MatrixXcd(dft_matrix(g).adjoint()) : dft_matrix(g);
    const Index n = idx(g.points());
    ModeTransform t{Eigen::MatrixXcd::Zero(2 * n, 2 * n), Eigen::MatrixXcd::Zero(2 * n, 2 * n)};
    t.u.topLeftCorner(n, n) = f;
    t.u.bottomRightCorner(n, n) = f;
    return t;
  }
  throw InvalidArgument("mode_transform: " + element_name(step.element) + " is not a unitary element");
}

Eigen::MatrixXd real_symplectic(const ModeTransform& t) {
  // a = X + iY, so a' = U a + V a^dagger gives
  //   X' = Re(U + V) X + (Im V - Im U) Y,   Y' = Im(U + V) X + Re(U - V) Y.
  const Index rows = t.u.rows();
  const Index cols = t.u.cols();
  Eigen::MatrixXd s(2 * rows, 2 * cols);
  for (Index m = 0; m < rows; ++m) {
    for (Index n = 0; n < cols; ++n) {
      const cd u = t.u(m, n);
      const cd v = t.v(m, n);
      s(2 * m, 2 * n) = u.real() + v.real();
      s(2 * m, 2 * n + 1) = v.imag() - u.imag();
      s(2 * m + 1, 2 * n) = u.imag() + v.imag();
      s(2 * m + 1, 2 * n + 1) = u.real() - v.real();
    }
  }
  return s;
}

double symplectic_defect(const Eigen::MatrixXd& s) {
  const Eigen::MatrixXd j_in = symplectic_form(static_cast<std::size_t>(s.cols() / 2));
  const Eigen::MatrixXd j_out = symplectic_form(static_cast<std::size_t>(s.rows() / 2));
  return (s * j_in * s.transpose() - j_out).cwiseAbs().maxCoeff();
}

Eigen::MatrixXd apply_step(const ProgramStep& step, const Eigen::MatrixXd& covariance, const DenseOptions& options) {
  if (const auto* l = std::get_if<Loss>(&step.element)) {
    Eigen::MatrixXd out = l->eta * covariance;
    out.diagonal().array() += 0.25 * (1.0 - l->eta);
    return out;
  }
  if (const auto* sl = std::get_if<SpatialLoss>(&step.element)) {
    const TransverseGrid& g = step.grid_in;
    Eigen::VectorXd d(idx(g.quadratures()));
    for (std::size_t p = 0; p < g.points(); ++p) {
      const double t = std::sqrt(sl->eta[p]);
      for (int sb = 0; sb < 2; ++sb) {
        const Index m = idx(g.mode(static_cast<Sideband>(sb), p));
        d(2 * m) = t;
        d(2 * m + 1) = t;
      }
    }
    Eigen::MatrixXd out = d.asDiagonal() * covariance * d.asDiagonal();
    out.diagonal().array() += 0.25 * (1.0 - d.array().square());
    return out;
  }
  const Eigen::MatrixXd s = real_symplectic(mode_transform(step));
  if (options.verify_symplectic) {
    const double defect = symplectic_defect(s);
    if (!(defect < options.tolerances.structural)) {
      throw NumericalError("dense engine: element " + element_name(step.element) +
                           " is not symplectic (defect " + short_number(defect) + ")");
    }
  }
  return s * covariance * s.transpose();
}

Eigen::MatrixXd dense_realize(const SymplecticProgram& program, const DenseOptions& options) {
  std::size_t largest = program.input_grid().modes();
  for (const auto& step : program.steps()) largest = std::max(largest, step.grid_out.modes());
  if (largest > options.mode_cap) {
    throw NumericalError("dense engine: " + std::to_string(largest) + " modes exceed the mode cap " +
                         std::to_string(options.mode_cap));
  }
  const auto n = idx(program.input_grid().quadratures());
  Eigen::MatrixXd cov = 0.25 * Eigen::MatrixXd::Identity(n, n);
  for (const auto& step : program.steps()) cov = apply_step(step, cov, options);
  return cov;
}

GaussianState densify(const GaussianState& state, const DenseOptions& options) {
  if (state.has_covariance()) return state;
  const SymplecticProgram* p = state.program();
  return GaussianState::from_covariance(p->output_grid(), p->output_basis(), dense_realize(*p, options));
}

}  // namespace msq
