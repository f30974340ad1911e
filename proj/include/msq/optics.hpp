#pragma once

#include "msq/gain_profile.hpp"
#include "msq/program.hpp"

namespace msq {

/// Finite-length four-wave-mixing medium.
struct MediumSpec {
  double length_mm = 12.5;
  double wavelength_nm = 795.0;
  double refractive_index = 1.0;
  int slices = 16;
  double gain = 4.0;

  void validate() const;
  /// k = 2 pi n_s / lambda, in rad/mm.
  double wavenumber() const;
  friend bool operator==(const MediumSpec&, const MediumSpec&) = default;
};

/// Squeeze parameter of a phase-insensitive amplifier of gain G: G = cosh^2(s).
double gain_to_squeeze(double gain);
double squeeze_to_gain(double s);

/// Two-mode squeezing on every far-field pair with parameter s_scale * profile(|q|).
Element squeeze_layer(const GainProfile& profile, double s_scale, NyquistPairing nyquist = NyquistPairing::pair);

/// Paraxial propagation over dz in a medium of index n_s.
Element fresnel_slice(double dz_mm, double wavelength_nm, double refractive_index);

Element rgr_overlap(double q0_rad_per_mm, Axis axis = Axis::x);

Element loss(double eta);

/// Super-Gaussian near-field transmission exp(-2 (r / radius)^order): the
/// squeezed region is bounded by the pumped area, outside of which only vacuum
/// reaches the detector.
Element pump_aperture(const TransverseGrid& grid, double radius_mm, double order);

/// Appends the sliced medium to `program`: symmetric split-step with the
/// squeeze layers at the slice centres, referenced to the centre of the cell.
/// The peak squeeze parameter is gain_to_squeeze(medium.gain) spread evenly
/// over the slices; the profile only contributes its shape.
void build_medium(SymplecticProgram& program, const MediumSpec& medium, const GainProfile& profile,
                  NyquistPairing nyquist = NyquistPairing::pair);

}  // namespace msq
