#pragma once

#include <Eigen/Dense>

#include "msq/error.hpp"
#include "msq/gaussian_state.hpp"
#include "msq/program.hpp"

namespace msq {

/// Reference engine: every element is realized as an explicit matrix and the
/// covariance is propagated as Sigma -> S Sigma S^T. Intended for small grids
/// and as the oracle for the implicit engine.
struct DenseOptions {
  std::size_t mode_cap = 4096;
  Tolerances tolerances{};
  bool verify_symplectic = true;
};

/// Mode-space Bogoliubov transform a_out = U a_in + V a_in^dagger.
struct ModeTransform {
  Eigen::MatrixXcd u;
  Eigen::MatrixXcd v;
};

/// Explicit transform of a lossless step. Throws InvalidArgument for loss steps.
ModeTransform mode_transform(const ProgramStep& step);

/// Real quadrature matrix of a Bogoliubov transform, rows/cols in (X_m, Y_m) order.
Eigen::MatrixXd real_symplectic(const ModeTransform& t);

/// max |S J_in S^T - J_out|.
double symplectic_defect(const Eigen::MatrixXd& s);

/// Applies one step to a covariance matrix.
Eigen::MatrixXd apply_step(const ProgramStep& step, const Eigen::MatrixXd& covariance,
                           const DenseOptions& options = {});

/// Covariance of `program` acting on vacuum.
Eigen::MatrixXd dense_realize(const SymplecticProgram& program, const DenseOptions& options = {});

/// Covariance-backed state for a program (or the state itself when already dense).
GaussianState densify(const GaussianState& state, const DenseOptions& options = {});

}  // namespace msq
