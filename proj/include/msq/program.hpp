#pragma once

#include <string>
#include <variant>
#include <vector>

#include "msq/gain_profile.hpp"
#include "msq/grid.hpp"

namespace msq {

/// How the far-field Nyquist row/column is treated by a squeeze layer. On an even
/// DFT grid the Nyquist frequency is its own mirror, so its partner (-q, -Omega)
/// is the same grid point on the other sideband.
enum class NyquistPairing { pair, exclude };

const char* to_string(NyquistPairing n);

/// Independent two-mode squeezer on every far-field pair {(q, +), (-q, -)} with
/// parameter scale * profile(|q|) and phase profile.pump_phase.
struct SqueezeLayer {
  GainProfile profile;
  double scale = 1.0;
  NyquistPairing nyquist = NyquistPairing::pair;
};

/// Paraxial free propagation over dz: far-field phase -|q|^2 dz / (2 k) on both sidebands.
struct FresnelSlice {
  double dz_mm = 0.0;
  double wavenumber = 1.0;  // rad/mm, k = 2 pi n_s / lambda
};

/// Change of basis. Forward maps near field to far field, inverse maps back.
struct FourierTransform {
  bool inverse = false;
};

/// 50/50 superposition of the two restricted gain regions at +-q0 along `axis`.
/// The output lives on a reduced grid covering q in [-q0, q0) along that axis.
struct RgrOverlap {
  double q0 = 0.0;  // rad/mm
  Axis axis = Axis::x;
};

/// Uniform lumped loss with transmission eta on every mode.
struct Loss {
  double eta = 1.0;
};

/// Near-field transmission map (one value per grid point, applied to both sidebands).
struct SpatialLoss {
  std::vector<double> eta;
};

/// Per-point quadrature rotation a -> exp(i phi) a on both sidebands, in a given basis.
struct QuadraturePhase {
  Basis basis = Basis::near_field;
  std::vector<double> phase;
};

using Element = std::variant<SqueezeLayer, FresnelSlice, FourierTransform, RgrOverlap, Loss, SpatialLoss,
                             QuadraturePhase>;

std::string element_name(const Element& e);
bool is_lossy(const Element& e);

/// One element together with the grid and basis it consumes and produces.
struct ProgramStep {
  Element element;
  TransverseGrid grid_in;
  TransverseGrid grid_out;
  Basis basis_in;
  Basis basis_out;
};

/// Ordered list of optical elements acting on vacuum. Steps are validated on
/// append, so every engine can trust grid and basis bookkeeping.
class SymplecticProgram {
 public:
  explicit SymplecticProgram(TransverseGrid input, Basis input_basis = Basis::far_field);

  /// Appends an element; squeeze, Fresnel and overlap steps are inserted in the
  /// far field, spatial loss in the near field, with basis changes added as needed.
  SymplecticProgram& append(Element e);
  /// Appends a Fourier transform when the current basis differs from `b`.
  SymplecticProgram& to_basis(Basis b);

  const TransverseGrid& input_grid() const { return input_grid_; }
  Basis input_basis() const { return input_basis_; }
  const TransverseGrid& output_grid() const { return steps_.empty() ? input_grid_ : steps_.back().grid_out; }
  Basis output_basis() const { return steps_.empty() ? input_basis_ : steps_.back().basis_out; }
  const std::vector<ProgramStep>& steps() const { return steps_; }
  bool empty() const { return steps_.empty(); }

 private:
  TransverseGrid input_grid_;
  Basis input_basis_;
  std::vector<ProgramStep> steps_;
};

/// Shift (in grid samples) realizing q0 on `grid`. Throws when q0 is off-grid,
/// not positive, or the band [-2 q0, 2 q0) does not fit the grid.
int rgr_shift(const RgrOverlap& r, const TransverseGrid& grid);
/// Reduced grid produced by an overlap on `grid`.
TransverseGrid rgr_output_grid(const RgrOverlap& r, const TransverseGrid& grid);

}  // namespace msq
