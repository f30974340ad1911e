#include "msq/optics.hpp"

#include <cmath>
#include <numbers>

#include "msq/error.hpp"

namespace msq {

void MediumSpec::validate() const {
  if (!(length_mm >= 0.0) || !std::isfinite(length_mm)) throw InvalidArgument("medium: length must be >= 0");
  if (!(wavelength_nm > 0.0)) throw InvalidArgument("medium: wavelength must be > 0");
  if (!(refractive_index > 0.0)) throw InvalidArgument("medium: refractive index must be > 0");
  if (slices < 1) throw InvalidArgument("medium: slices must be >= 1");
  if (!(gain >= 1.0)) throw InvalidArgument("medium: gain must be >= 1");
}

double MediumSpec::wavenumber() const { return 2.0 * std::numbers::pi * refractive_index / (wavelength_nm * 1e-6); }

double gain_to_squeeze(double gain) {
  if (!(gain >= 1.0) || !std::isfinite(gain)) throw InvalidArgument("gain must be >= 1");
  return std::log(std::sqrt(gain) + std::sqrt(gain - 1.0));
}

double squeeze_to_gain(double s) {
  const double c = std::cosh(s);
  return c * c;
}

Element squeeze_layer(const GainProfile& profile, double s_scale, NyquistPairing nyquist) {
  profile.validate();
  if (!(s_scale > 0.0 && s_scale <= 1.0)) throw InvalidArgument("squeeze layer: scale must lie in (0, 1]");
  return SqueezeLayer{profile, s_scale, nyquist};
}

Element fresnel_slice(double dz_mm, double wavelength_nm, double refractive_index) {
  if (!(wavelength_nm > 0.0) || !(refractive_index > 0.0)) {
    throw InvalidArgument("fresnel: wavelength and index must be positive");
  }
  return FresnelSlice{dz_mm, 2.0 * std::numbers::pi * refractive_index / (wavelength_nm * 1e-6)};
}

Element rgr_overlap(double q0_rad_per_mm, Axis axis) {
  if (!(q0_rad_per_mm > 0.0)) throw InvalidArgument("rgr: q0 must be positive");
  return RgrOverlap{q0_rad_per_mm, axis};
}

Element loss(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidArgument("loss: eta must lie in [0, 1]");
  return Loss{eta};
}

Element pump_aperture(const TransverseGrid& grid, double radius_mm, double order) {
  if (!(radius_mm > 0.0) || !(order > 0.0)) throw InvalidArgument("aperture: radius and order must be positive");
  std::vector<double> eta(grid.points());
  for (std::size_t p = 0; p < grid.points(); ++p) {
    const double r = std::hypot(grid.x(grid.ix_of(p)), grid.y(grid.iy_of(p)));
    eta[p] = std::exp(-2.0 * std::pow(r / radius_mm, order));
  }
  return SpatialLoss{std::move(eta)};
}

void build_medium(SymplecticProgram& program, const MediumSpec& medium, const GainProfile& profile,
                  NyquistPairing nyquist) {
  medium.validate();
  const int m = medium.slices;
  const double dz = medium.length_mm / m;
  const GainProfile shaped = profile.with_peak(gain_to_squeeze(medium.gain));
  auto propagate = [&](double z) {
    if (z != 0.0) program.append(fresnel_slice(z, medium.wavelength_nm, medium.refractive_index));
  };
  // Input referenced to the cell centre is carried to the entrance face, each
  // layer sits at a slice centre, and the exit face is imaged back to the centre.
  propagate(-0.5 * medium.length_mm + 0.5 * dz);
  for (int i = 0; i < m; ++i) {
    program.append(squeeze_layer(shaped, 1.0 / m, nyquist));
    propagate(i + 1 < m ? dz : 0.5 * dz - 0.5 * medium.length_mm);
  }
}

}  // namespace msq
