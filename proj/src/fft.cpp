#include "msq/fft.hpp"

#include <cmath>
#include <unsupported/Eigen/FFT>
#include <vector>

namespace msq {
namespace {

using cd = std::complex<double>;

// Unscaled 2D DFT on a row-major nx x ny array.
void dft2(const TransverseGrid& g, std::span<cd> data, bool inverse) {
  thread_local Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  const int nx = g.nx();
  const int ny = g.ny();
  std::vector<cd> in(static_cast<std::size_t>(std::max(nx, ny)));
  std::vector<cd> out(in.size());
  auto run = [&](int n) {
    std::vector<cd> src(in.begin(), in.begin() + n);
    std::vector<cd> dst(static_cast<std::size_t>(n));
    if (inverse) {
      fft.inv(dst, src);
    } else {
      fft.fwd(dst, src);
    }
    std::copy(dst.begin(), dst.end(), out.begin());
  };
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) in[ix] = data[g.point(ix, iy)];
    run(nx);
    for (int ix = 0; ix < nx; ++ix) data[g.point(ix, iy)] = out[ix];
  }
  for (int ix = 0; ix < nx; ++ix) {
    for (int iy = 0; iy < ny; ++iy) in[iy] = data[g.point(ix, iy)];
    run(ny);
    for (int iy = 0; iy < ny; ++iy) data[g.point(ix, iy)] = out[iy];
  }
}

// (-1)^(kx + ky): phase from centering the near-field coordinates.
void checkerboard(const TransverseGrid& g, std::span<cd> data, double scale) {
  for (std::size_t p = 0; p < g.points(); ++p) {
    const bool odd = ((g.ix_of(p) + g.iy_of(p)) & 1) != 0;
    data[p] *= odd ? -scale : scale;
  }
}

}  // namespace

void fourier_forward(const TransverseGrid& grid, std::span<cd> field) {
  dft2(grid, field, false);
  checkerboard(grid, field, 1.0 / std::sqrt(static_cast<double>(grid.points())));
}

void fourier_adjoint(const TransverseGrid& grid, std::span<cd> field) {
  checkerboard(grid, field, 1.0 / std::sqrt(static_cast<double>(grid.points())));
  dft2(grid, field, true);
}

}  // namespace msq
