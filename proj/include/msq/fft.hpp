#pragma once

#include <complex>
#include <span>

#include "msq/grid.hpp"

namespace msq {

/// Unitary transforms between the centered near-field grid and the far-field
/// grid of TransverseGrid, acting in place on one sideband (grid.points() values).
/// forward: F v with F(q, rho) = exp(-i q . rho) / sqrt(N); adjoint: F^H v.
void fourier_forward(const TransverseGrid& grid, std::span<std::complex<double>> field);
void fourier_adjoint(const TransverseGrid& grid, std::span<std::complex<double>> field);

}  // namespace msq
