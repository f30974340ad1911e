#include "msq/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "msq/error.hpp"

namespace msq {

const char* to_string(Basis b) { return b == Basis::near_field ? "near" : "far"; }

TransverseGrid::TransverseGrid(int nx, int ny, double pitch_x_mm, double pitch_y_mm)
    : nx_(nx), ny_(ny), pitch_x_(pitch_x_mm), pitch_y_(pitch_y_mm) {
  if (nx < 2 || ny < 2 || nx % 2 != 0 || ny % 2 != 0) {
    throw InvalidArgument("grid dimensions must be even and >= 2, got " + std::to_string(nx) + "x" +
                          std::to_string(ny));
  }
  if (!(pitch_x_mm > 0.0) || !(pitch_y_mm > 0.0) || !std::isfinite(pitch_x_mm) ||
      !std::isfinite(pitch_y_mm)) {
    throw InvalidArgument("grid pitch must be positive");
  }
}

double TransverseGrid::dq_x() const { return 2.0 * std::numbers::pi / (nx_ * pitch_x_); }
double TransverseGrid::dq_y() const { return 2.0 * std::numbers::pi / (ny_ * pitch_y_); }

double TransverseGrid::qx(int ix) const { return signed_index(ix, nx_) * dq_x(); }
double TransverseGrid::qy(int iy) const { return signed_index(iy, ny_) * dq_y(); }

double TransverseGrid::q_norm(std::size_t p) const { return std::hypot(qx(ix_of(p)), qy(iy_of(p))); }

std::size_t TransverseGrid::mirror(std::size_t p) const {
  const int ix = ix_of(p);
  const int iy = iy_of(p);
  return point((nx_ - ix) % nx_, (ny_ - iy) % ny_);
}

bool TransverseGrid::on_nyquist(std::size_t p) const { return ix_of(p) == nx_ / 2 || iy_of(p) == ny_ / 2; }

TransverseGrid make_grid(int nx, int ny, double pitch_mm) { return TransverseGrid(nx, ny, pitch_mm, pitch_mm); }

std::vector<std::size_t> pair_permutation(const TransverseGrid& grid) {
  const std::size_t n = grid.points();
  std::vector<std::size_t> perm(2 * n);
  for (std::size_t p = 0; p < n; ++p) {
    perm[p] = p;
    perm[n + p] = n + grid.mirror(p);
  }
  return perm;
}

}  // namespace msq
