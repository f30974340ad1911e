#pragma once

#include <cstddef>
#include <vector>

namespace msq {

/// Which plane the mode operators of a state or program step live in.
enum class Basis { near_field, far_field };

/// The two coupled frequency sidebands: probe at +Omega, conjugate at -Omega.
enum class Sideband { probe = 0, conjugate = 1 };

/// Transverse axis selector.
enum class Axis { x, y };

const char* to_string(Basis b);

/// Discretized transverse plane and its conjugate spatial-frequency grid.
///
/// Index conventions (all bit-reproducible):
///  - near field: x(ix) = (ix - nx/2) * pitch_x, so ix = nx/2 is the optical axis;
///  - far field:  qx(ix) = k * dq_x with k = ix for ix < nx/2 and k = ix - nx otherwise
///    (standard DFT order), dq_x = 2 pi / (nx * pitch_x);
///  - the same mirror map (n - i) mod n sends rho -> -rho and q -> -q.
/// Grid points are row-major (x fastest). Lengths are in mm, frequencies in rad/mm.
class TransverseGrid {
 public:
  TransverseGrid(int nx, int ny, double pitch_x_mm, double pitch_y_mm);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double pitch_x() const { return pitch_x_; }
  double pitch_y() const { return pitch_y_; }
  double pitch(Axis a) const { return a == Axis::x ? pitch_x_ : pitch_y_; }
  int size(Axis a) const { return a == Axis::x ? nx_ : ny_; }
  double dq_x() const;
  double dq_y() const;
  double dq(Axis a) const { return a == Axis::x ? dq_x() : dq_y(); }
  double extent_x() const { return nx_ * pitch_x_; }
  double extent_y() const { return ny_ * pitch_y_; }

  std::size_t points() const { return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_); }
  std::size_t modes() const { return 2 * points(); }
  std::size_t quadratures() const { return 4 * points(); }

  std::size_t point(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(ix);
  }
  int ix_of(std::size_t p) const { return static_cast<int>(p % static_cast<std::size_t>(nx_)); }
  int iy_of(std::size_t p) const { return static_cast<int>(p / static_cast<std::size_t>(nx_)); }

  /// Signed DFT frequency index of array index i on an axis of n samples.
  static int signed_index(int i, int n) { return i < n / 2 ? i : i - n; }
  /// Array index of a signed DFT frequency index.
  static int array_index(int k, int n) { return ((k % n) + n) % n; }

  double x(int ix) const { return (ix - nx_ / 2) * pitch_x_; }
  double y(int iy) const { return (iy - ny_ / 2) * pitch_y_; }
  double qx(int ix) const;
  double qy(int iy) const;
  double q_norm(std::size_t p) const;

  /// Index of the point at -rho (near field) or -q (far field).
  std::size_t mirror(std::size_t p) const;
  /// True when the point lies on the Nyquist column or row of the far-field grid,
  /// where -q aliases onto q.
  bool on_nyquist(std::size_t p) const;

  /// Mode index in the fixed ordering: sideband-major, then row-major grid order.
  std::size_t mode(Sideband sb, std::size_t p) const {
    return static_cast<std::size_t>(sb) * points() + p;
  }

  friend bool operator==(const TransverseGrid&, const TransverseGrid&) = default;

 private:
  int nx_;
  int ny_;
  double pitch_x_;
  double pitch_y_;
};

/// Square-pitch grid. Rejects odd or non-positive sizes and non-positive pitch.
TransverseGrid make_grid(int nx, int ny, double pitch_mm);

/// Involutive permutation of mode indices that sends (p, conjugate) to
/// (mirror(p), conjugate) and fixes probe modes, so each far-field pair
/// {(q, +), (-q, -)} ends up at indices {m, m + points}.
std::vector<std::size_t> pair_permutation(const TransverseGrid& grid);

}  // namespace msq
