#pragma once

#include <Eigen/Dense>
#include <memory>
#include <variant>

#include "msq/grid.hpp"
#include "msq/program.hpp"

namespace msq {

/// Zero-mean Gaussian state over (grid x two sidebands) modes.
///
/// Quadratures follow X = (a + a^dagger)/2, Y = i(a^dagger - a)/2, so a = X + iY and
/// the vacuum variance of every quadrature is 1/4. Covariance rows are ordered
/// (X_m, Y_m) for m in the mode ordering of TransverseGrid::mode().
class GaussianState {
 public:
  /// Dense (1/4) I. Refuses grids above `mode_cap` modes.
  static GaussianState vacuum(const TransverseGrid& grid, Basis basis = Basis::near_field,
                              std::size_t mode_cap = 4096);
  static GaussianState from_covariance(const TransverseGrid& grid, Basis basis, Eigen::MatrixXd covariance);
  static GaussianState from_program(std::shared_ptr<const SymplecticProgram> program);

  const TransverseGrid& grid() const { return grid_; }
  Basis basis() const { return basis_; }
  bool has_covariance() const { return std::holds_alternative<Eigen::MatrixXd>(rep_); }
  /// Throws when the state is only available as a program.
  const Eigen::MatrixXd& covariance() const;
  /// nullptr for covariance-backed states.
  const SymplecticProgram* program() const;

 private:
  GaussianState(TransverseGrid grid, Basis basis, std::variant<Eigen::MatrixXd, std::shared_ptr<const SymplecticProgram>> rep)
      : grid_(grid), basis_(basis), rep_(std::move(rep)) {}

  TransverseGrid grid_;
  Basis basis_;
  std::variant<Eigen::MatrixXd, std::shared_ptr<const SymplecticProgram>> rep_;
};

/// Block-diagonal [[0, 1], [-1, 0]] in the (X_m, Y_m) ordering.
Eigen::MatrixXd symplectic_form(std::size_t modes);

/// Smallest eigenvalue of the Hermitian matrix Sigma + (i/4) J. Non-negative for physical states.
double check_uncertainty(const Eigen::MatrixXd& covariance);
double check_uncertainty(const GaussianState& state);

/// Symplectic eigenvalues (ascending), in covariance units: vacuum gives 1/4.
Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& covariance);
/// Tr(rho^2) = 1 / sqrt(det(4 Sigma)).
double purity(const Eigen::MatrixXd& covariance);

/// Max relative asymmetry of a covariance matrix.
double asymmetry(const Eigen::MatrixXd& covariance);

/// Joint quadratures between a probe mode and its partner on the conjugate sideband:
/// (rho, -) in the near field, (-q, -) in the far field.
enum class Joint { x_minus, y_plus, x_plus, y_minus };

/// Quadrature-space weight vector of a joint quadrature at grid point `p`.
Eigen::VectorXd joint_weights(const TransverseGrid& grid, Basis basis, std::size_t p, Joint which);
double joint_variance(const Eigen::MatrixXd& covariance, const TransverseGrid& grid, Basis basis, std::size_t p,
                      Joint which);

}  // namespace msq
