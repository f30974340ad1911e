// Matrix-free homodyne evaluation.
//
// A quadrature observable Re(sum_m conj(z_m) a_m) pulled back through
// a' = U a + V a^dagger becomes Re(sum_n conj(z'_n) a_n) with z' = U^H z + V^T conj(z).
// Loss adds (1 - eta)/4 |z|^2 of vacuum noise and scales z by sqrt(eta). Two
// observables (chi = 0 and chi = pi/2) are carried together so the full phase
// dependence is recovered from one pass.

#include <cmath>
#include <numbers>

#include "msq/detection.hpp"
#include "msq/error.hpp"
#include "msq/fft.hpp"

namespace msq {
namespace {

using cd = std::complex<double>;

struct Pullback {
  Field z0;
  Field z1;
  double n00 = 0.0;
  double n11 = 0.0;
  double n01 = 0.0;
};

double real_dot(const Field& a, const Field& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return s;
}

void apply_phase(const TransverseGrid& g, Field& z, const std::vector<double>& phase) {
  const std::size_t n = g.points();
  for (std::size_t p = 0; p < n; ++p) {
    const cd e = std::polar(1.0, -phase[p]);
    z[p] *= e;
    z[n + p] *= e;
  }
}

void squeeze_adjoint(const TransverseGrid& g, const SqueezeLayer& layer, Field& z) {
  const std::size_t n = g.points();
  const cd pump = std::polar(1.0, layer.profile.pump_phase);
  for (std::size_t p = 0; p < n; ++p) {
    double s = layer.scale * layer.profile.at(g.q_norm(p));
    if (layer.nyquist == NyquistPairing::exclude && g.on_nyquist(p)) s = 0.0;
    if (s == 0.0) continue;
    const std::size_t m1 = p;
    const std::size_t m2 = n + g.mirror(p);
    const double c = std::cosh(s);
    const cd v = pump * std::sinh(s);
    const cd z1 = z[m1];
    const cd z2 = z[m2];
    z[m1] = c * z1 + v * std::conj(z2);
    z[m2] = c * z2 + v * std::conj(z1);
  }
}

Field overlap_adjoint(const TransverseGrid& in, const TransverseGrid& out, const RgrOverlap& r, const Field& z) {
  const int m = rgr_shift(r, in);
  Field back(in.modes(), cd{});
  const double h = 1.0 / std::numbers::sqrt2;
  const int n_axis_in = in.size(r.axis);
  const int n_axis_out = out.size(r.axis);
  for (std::size_t po = 0; po < out.points(); ++po) {
    const int io = r.axis == Axis::x ? out.ix_of(po) : out.iy_of(po);
    const int other = r.axis == Axis::x ? out.iy_of(po) : out.ix_of(po);
    const int k = TransverseGrid::signed_index(io, n_axis_out);
    auto in_point = [&](int k_in) {
      const int i = TransverseGrid::array_index(k_in, n_axis_in);
      return r.axis == Axis::x ? in.point(i, other) : in.point(other, i);
    };
    for (int sb = 0; sb < 2; ++sb) {
      const auto side = static_cast<Sideband>(sb);
      const cd v = z[out.mode(side, po)];
      if (k == -m) {
        back[in.mode(side, in_point(0))] += v;
      } else {
        back[in.mode(side, in_point(k + m))] += h * v;
        back[in.mode(side, in_point(k - m))] += h * v;
      }
    }
  }
  return back;
}

void loss_adjoint(Pullback& pb, const std::vector<double>& eta_per_point, std::size_t points) {
  for (std::size_t i = 0; i < pb.z0.size(); ++i) {
    const double eta = eta_per_point[i % points];
    const double w = 0.25 * (1.0 - eta);
    const cd a = pb.z0[i];
    const cd b = pb.z1[i];
    pb.n00 += w * std::norm(a);
    pb.n11 += w * std::norm(b);
    pb.n01 += w * (a.real() * b.real() + a.imag() * b.imag());
    const double t = std::sqrt(eta);
    pb.z0[i] = t * a;
    pb.z1[i] = t * b;
  }
}

void step_adjoint(const ProgramStep& step, Pullback& pb) {
  const TransverseGrid& g = step.grid_in;
  const std::size_t n = g.points();
  if (const auto* s = std::get_if<SqueezeLayer>(&step.element)) {
    squeeze_adjoint(g, *s, pb.z0);
    squeeze_adjoint(g, *s, pb.z1);
  } else if (const auto* f = std::get_if<FresnelSlice>(&step.element)) {
    std::vector<double> phase(n);
    for (std::size_t p = 0; p < n; ++p) {
      const double q = g.q_norm(p);
      phase[p] = -q * q * f->dz_mm / (2.0 * f->wavenumber);
    }
    apply_phase(g, pb.z0, phase);
    apply_phase(g, pb.z1, phase);
  } else if (const auto* ph = std::get_if<QuadraturePhase>(&step.element)) {
    apply_phase(g, pb.z0, ph->phase);
    apply_phase(g, pb.z1, ph->phase);
  } else if (const auto* ft = std::get_if<FourierTransform>(&step.element)) {
    // U = F (forward) pulls back with F^H; U = F^H (inverse) pulls back with F.
    for (Field* z : {&pb.z0, &pb.z1}) {
      for (int sb = 0; sb < 2; ++sb) {
        std::span<cd> block(z->data() + sb * n, n);
        if (ft->inverse) {
          fourier_forward(g, block);
        } else {
          fourier_adjoint(g, block);
        }
      }
    }
  } else if (const auto* r = std::get_if<RgrOverlap>(&step.element)) {
    pb.z0 = overlap_adjoint(g, step.grid_out, *r, pb.z0);
    pb.z1 = overlap_adjoint(g, step.grid_out, *r, pb.z1);
  } else if (const auto* l = std::get_if<Loss>(&step.element)) {
    loss_adjoint(pb, std::vector<double>(n, l->eta), n);
  } else if (const auto* sl = std::get_if<SpatialLoss>(&step.element)) {
    loss_adjoint(pb, sl->eta, n);
  } else {
    throw InvalidArgument("implicit engine: no adjoint for element " + element_name(step.element));
  }
}

}  // namespace

HomodyneForm implicit_form(const SymplecticProgram& program, const LocalOscillator& lo) {
  if (program.output_basis() != Basis::near_field) {
    throw InvalidArgument("homodyne: the local oscillator is a near-field object but the program ends in the far field");
  }
  if (!(program.output_grid() == lo.grid())) throw InvalidArgument("homodyne: LO grid does not match the state grid");
  Pullback pb;
  pb.z0 = lo.mode_amplitudes();
  pb.z1 = pb.z0;
  for (auto& v : pb.z1) v *= cd(0.0, 1.0);
  const double vac = 0.25 * real_dot(pb.z0, pb.z0);
  const auto& steps = program.steps();
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) step_adjoint(*it, pb);
  HomodyneForm form;
  form.a = (pb.n00 + 0.25 * real_dot(pb.z0, pb.z0)) / vac;
  form.b = (pb.n11 + 0.25 * real_dot(pb.z1, pb.z1)) / vac;
  form.c = (pb.n01 + 0.25 * real_dot(pb.z0, pb.z1)) / vac;
  return form;
}

double implicit_variance(const SymplecticProgram& program, const LocalOscillator& lo, double chi) {
  return implicit_form(program, lo).ratio(chi);
}

}  // namespace msq
