#include "msq/program.hpp"

#include <cmath>
#include <numbers>

#include "msq/error.hpp"

namespace msq {

GainProfile GainProfile::uniform(double s, double pump_phase) {
  GainProfile g;
  g.s_max = s;
  g.pump_phase = pump_phase;
  g.validate();
  return g;
}

GainProfile GainProfile::annulus(double s_max, double q_peak, double q_sigma, double q_gap_floor,
                                 double pump_phase) {
  GainProfile g{s_max, q_peak, q_sigma, q_gap_floor, pump_phase};
  g.validate();
  return g;
}

void GainProfile::validate() const {
  if (!(s_max >= 0.0) || !std::isfinite(s_max)) throw InvalidArgument("gain profile: s_max must be >= 0");
  if (!(q_peak >= 0.0) || !std::isfinite(q_peak)) throw InvalidArgument("gain profile: q_peak must be >= 0");
  if (!(q_sigma > 0.0)) throw InvalidArgument("gain profile: q_sigma must be > 0");
  if (!(q_gap_floor >= 0.0 && q_gap_floor <= 1.0)) {
    throw InvalidArgument("gain profile: q_gap_floor must lie in [0, 1]");
  }
  if (!std::isfinite(pump_phase)) throw InvalidArgument("gain profile: pump phase must be finite");
}

double GainProfile::at(double q_abs) const {
  const double d = q_abs - q_peak;
  double s = std::isinf(q_sigma) ? s_max : s_max * std::exp(-d * d / (2.0 * q_sigma * q_sigma));
  if (q_abs == 0.0) s = std::min(s, q_gap_floor * s_max);
  return s;
}

GainProfile GainProfile::with_peak(double s) const {
  GainProfile g = *this;
  g.s_max = s;
  g.validate();
  return g;
}

const char* to_string(NyquistPairing n) { return n == NyquistPairing::pair ? "pair" : "exclude"; }

std::string element_name(const Element& e) {
  struct Visitor {
    std::string operator()(const SqueezeLayer&) const { return "squeeze"; }
    std::string operator()(const FresnelSlice&) const { return "fresnel"; }
    std::string operator()(const FourierTransform& f) const { return f.inverse ? "ifft" : "fft"; }
    std::string operator()(const RgrOverlap&) const { return "rgr_overlap"; }
    std::string operator()(const Loss&) const { return "loss"; }
    std::string operator()(const SpatialLoss&) const { return "spatial_loss"; }
    std::string operator()(const QuadraturePhase&) const { return "phase"; }
  };
  return std::visit(Visitor{}, e);
}

bool is_lossy(const Element& e) {
  return std::holds_alternative<Loss>(e) || std::holds_alternative<SpatialLoss>(e);
}

int rgr_shift(const RgrOverlap& r, const TransverseGrid& grid) {
  if (!(r.q0 > 0.0)) throw InvalidArgument("rgr: q0 must be positive");
  const double dq = grid.dq(r.axis);
  const double ratio = r.q0 / dq;
  const double m = std::round(ratio);
  if (std::abs(ratio - m) > 1e-9 * std::max(1.0, ratio)) {
    throw InvalidArgument("rgr: q0 = " + std::to_string(r.q0) + " rad/mm is not a multiple of the grid spacing " +
                          std::to_string(dq));
  }
  const int shift = static_cast<int>(m);
  if (shift < 1 || 4 * shift > grid.size(r.axis)) {
    throw InvalidArgument("rgr: band [-2 q0, 2 q0) is wider than the available grid");
  }
  return shift;
}

TransverseGrid rgr_output_grid(const RgrOverlap& r, const TransverseGrid& grid) {
  const int m = rgr_shift(r, grid);
  const int n_out = 2 * m;
  const double pitch_out = 2.0 * std::numbers::pi / (n_out * grid.dq(r.axis));
  if (r.axis == Axis::x) return TransverseGrid(n_out, grid.ny(), pitch_out, grid.pitch_y());
  return TransverseGrid(grid.nx(), n_out, grid.pitch_x(), pitch_out);
}

SymplecticProgram::SymplecticProgram(TransverseGrid input, Basis input_basis)
    : input_grid_(input), input_basis_(input_basis) {}

SymplecticProgram& SymplecticProgram::to_basis(Basis b) {
  if (output_basis() != b) append(FourierTransform{b == Basis::near_field});
  return *this;
}

SymplecticProgram& SymplecticProgram::append(Element e) {
  const TransverseGrid grid = output_grid();
  auto require = [&](Basis b) { to_basis(b); };

  if (auto* f = std::get_if<FourierTransform>(&e)) {
    const Basis from = f->inverse ? Basis::far_field : Basis::near_field;
    if (output_basis() != from) {
      throw InvalidArgument(std::string("fourier transform expects the ") + to_string(from) + "-field basis");
    }
    const Basis to = f->inverse ? Basis::near_field : Basis::far_field;
    steps_.push_back(ProgramStep{e, grid, grid, from, to});
    return *this;
  }
  if (auto* s = std::get_if<SqueezeLayer>(&e)) {
    s->profile.validate();
    if (!(s->scale >= 0.0)) throw InvalidArgument("squeeze layer: scale must be >= 0");
    require(Basis::far_field);
  } else if (std::holds_alternative<FresnelSlice>(e)) {
    if (!(std::get<FresnelSlice>(e).wavenumber > 0.0)) throw InvalidArgument("fresnel: wavenumber must be > 0");
    require(Basis::far_field);
  } else if (auto* r = std::get_if<RgrOverlap>(&e)) {
    require(Basis::far_field);
    const TransverseGrid out = rgr_output_grid(*r, grid);
    steps_.push_back(ProgramStep{e, grid, out, Basis::far_field, Basis::far_field});
    return *this;
  } else if (auto* l = std::get_if<Loss>(&e)) {
    if (!(l->eta >= 0.0 && l->eta <= 1.0)) throw InvalidArgument("loss: eta must lie in [0, 1]");
  } else if (auto* sl = std::get_if<SpatialLoss>(&e)) {
    if (sl->eta.size() != grid.points()) throw InvalidArgument("spatial loss: map size does not match grid");
    for (double v : sl->eta) {
      if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("spatial loss: transmission must lie in [0, 1]");
    }
    require(Basis::near_field);
  } else if (auto* ph = std::get_if<QuadraturePhase>(&e)) {
    if (ph->phase.size() != grid.points()) throw InvalidArgument("phase map: size does not match grid");
    require(ph->basis);
  }
  const Basis b = output_basis();
  steps_.push_back(ProgramStep{std::move(e), grid, grid, b, b});
  return *this;
}

}  // namespace msq
