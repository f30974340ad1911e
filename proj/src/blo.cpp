#include <cmath>
#include <limits>
#include <numbers>

#include "msq/detection.hpp"
#include "msq/error.hpp"
#include "msq/fft.hpp"

namespace msq {

const char* to_string(MaskShape m) {
  switch (m) {
    case MaskShape::gaussian:
      return "gaussian";
    case MaskShape::slit:
      return "slit";
    case MaskShape::uniform:
      return "uniform";
  }
  return "?";
}

void BloSeedSpec::validate() const {
  if (mask != MaskShape::uniform && (!(width_mm > 0.0) || !(height_mm > 0.0))) {
    throw InvalidArgument("blo: mask widths must be positive");
  }
  if (!(gain >= 1.0)) throw InvalidArgument("blo: gain must be >= 1");
  if (filter_radius && !(*filter_radius > 0.0)) throw InvalidArgument("blo: filter radius must be positive");
}

double auto_filter_radius(const BloSeedSpec& seed) {
  if (seed.mask == MaskShape::slit) return 2.0 * std::numbers::pi / seed.width_mm;
  return std::numeric_limits<double>::infinity();
}

Field seed_field(const BloSeedSpec& seed, const TransverseGrid& grid) {
  seed.validate();
  const double extent = std::min(grid.extent_x(), grid.extent_y());
  if (seed.mask != MaskShape::uniform && (seed.width_mm > extent || seed.height_mm > extent)) {
    throw InvalidArgument("blo: mask is wider than the grid");
  }
  const double cu = std::cos(seed.angle_rad);
  const double su = std::sin(seed.angle_rad);
  // Slit edges are pixel-averaged along the narrow axis so that slits narrower
  // than the sampling still carry weight.
  const double footprint = grid.pitch_x() * std::abs(cu) + grid.pitch_y() * std::abs(su);
  auto slit_fraction = [&](double u) {
    const double lo = std::max(u - 0.5 * footprint, -0.5 * seed.width_mm);
    const double hi = std::min(u + 0.5 * footprint, 0.5 * seed.width_mm);
    return std::max(0.0, hi - lo) / footprint;
  };
  Field field(grid.points());
  double mass = 0.0;
  for (std::size_t p = 0; p < grid.points(); ++p) {
    const double dx = grid.x(grid.ix_of(p)) - seed.center_x_mm;
    const double dy = grid.y(grid.iy_of(p)) - seed.center_y_mm;
    const double u = dx * cu + dy * su;
    const double v = -dx * su + dy * cu;
    double a = 1.0;
    switch (seed.mask) {
      case MaskShape::gaussian:
        a = std::exp(-(u * u) / (seed.width_mm * seed.width_mm) - (v * v) / (seed.height_mm * seed.height_mm));
        break;
      case MaskShape::slit:
        a = slit_fraction(u) * std::exp(-(v * v) / (seed.height_mm * seed.height_mm));
        break;
      case MaskShape::uniform:
        break;
    }
    field[p] = a;
    mass += a * a;
  }
  if (!(mass > 0.0)) throw InvalidArgument("blo: mask does not cover any grid point");

  const double radius = seed.filter_radius.value_or(auto_filter_radius(seed));
  if (std::isfinite(radius)) {
    fourier_forward(grid, field);
    for (std::size_t p = 0; p < grid.points(); ++p) {
      if (grid.q_norm(p) > radius) field[p] = 0.0;
    }
    fourier_adjoint(grid, field);
  }
  return field;
}

LocalOscillator build_blo(const BloSeedSpec& seed, const TransverseGrid& grid) {
  const Field alpha = seed_field(seed, grid);
  if (seed.ideal_balanced) return ideal_balanced_lo(grid, alpha);
  const double gp = std::sqrt(seed.gain);
  const double gc = std::sqrt(seed.gain - 1.0);
  Field probe(alpha.size());
  Field conj(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    probe[i] = gp * alpha[i];
    conj[i] = gc * std::conj(alpha[i]);
  }
  return LocalOscillator::normalized(grid, std::move(probe), std::move(conj));
}

}  // namespace msq
