#include "msq/gaussian_state.hpp"

#include <cmath>
#include <numbers>

#include "msq/error.hpp"

namespace msq {

GaussianState GaussianState::vacuum(const TransverseGrid& grid, Basis basis, std::size_t mode_cap) {
  if (grid.modes() > mode_cap) {
    throw NumericalError("vacuum: " + std::to_string(grid.modes()) + " modes exceed the dense mode cap " +
                         std::to_string(mode_cap));
  }
  const auto n = static_cast<Eigen::Index>(grid.quadratures());
  return GaussianState(grid, basis, Eigen::MatrixXd(0.25 * Eigen::MatrixXd::Identity(n, n)));
}

GaussianState GaussianState::from_covariance(const TransverseGrid& grid, Basis basis, Eigen::MatrixXd covariance) {
  const auto n = static_cast<Eigen::Index>(grid.quadratures());
  if (covariance.rows() != n || covariance.cols() != n) {
    throw InvalidArgument("covariance size does not match grid");
  }
  return GaussianState(grid, basis, std::move(covariance));
}

GaussianState GaussianState::from_program(std::shared_ptr<const SymplecticProgram> program) {
  if (!program) throw InvalidArgument("null program");
  const TransverseGrid g = program->output_grid();
  const Basis b = program->output_basis();
  return GaussianState(g, b, std::move(program));
}

const Eigen::MatrixXd& GaussianState::covariance() const {
  if (const auto* m = std::get_if<Eigen::MatrixXd>(&rep_)) return *m;
  throw InvalidArgument("state has no dense covariance; realize its program first");
}

const SymplecticProgram* GaussianState::program() const {
  if (const auto* p = std::get_if<std::shared_ptr<const SymplecticProgram>>(&rep_)) return p->get();
  return nullptr;
}

Eigen::MatrixXd symplectic_form(std::size_t modes) {
  const auto n = static_cast<Eigen::Index>(2 * modes);
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index m = 0; m < n; m += 2) {
    j(m, m + 1) = 1.0;
    j(m + 1, m) = -1.0;
  }
  return j;
}

double check_uncertainty(const Eigen::MatrixXd& covariance) {
  const auto modes = static_cast<std::size_t>(covariance.rows() / 2);
  Eigen::MatrixXcd h = covariance.cast<std::complex<double>>();
  h += std::complex<double>(0.0, 0.25) * symplectic_form(modes).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double check_uncertainty(const GaussianState& state) { return check_uncertainty(state.covariance()); }

Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& covariance) {
  // The eigenvalues of i J Sigma come in +-nu pairs.
  const auto modes = static_cast<std::size_t>(covariance.rows() / 2);
  const Eigen::MatrixXd j = symplectic_form(modes);
  Eigen::MatrixXcd m = std::complex<double>(0.0, 1.0) * (j * covariance).cast<std::complex<double>>();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  std::vector<double> vals;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i).real() > 0.0) vals.push_back(es.eigenvalues()(i).real());
  }
  std::sort(vals.begin(), vals.end());
  Eigen::VectorXd out(static_cast<Eigen::Index>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) out(static_cast<Eigen::Index>(i)) = vals[i];
  return out;
}

double purity(const Eigen::MatrixXd& covariance) {
  Eigen::LLT<Eigen::MatrixXd> llt(4.0 * covariance);
  if (llt.info() != Eigen::Success) throw NumericalError("purity: covariance is not positive definite");
  const Eigen::MatrixXd l = llt.matrixL();
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) logdet += 2.0 * std::log(l(i, i));
  return std::exp(-0.5 * logdet);
}

double asymmetry(const Eigen::MatrixXd& covariance) {
  const double scale = std::max(covariance.cwiseAbs().maxCoeff(), 1e-300);
  return (covariance - covariance.transpose()).cwiseAbs().maxCoeff() / scale;
}

Eigen::VectorXd joint_weights(const TransverseGrid& grid, Basis basis, std::size_t p, Joint which) {
  const std::size_t partner = basis == Basis::near_field ? p : grid.mirror(p);
  const auto m1 = static_cast<Eigen::Index>(grid.mode(Sideband::probe, p));
  const auto m2 = static_cast<Eigen::Index>(grid.mode(Sideband::conjugate, partner));
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.quadratures()));
  const double h = 1.0 / std::numbers::sqrt2;
  const bool is_x = which == Joint::x_minus || which == Joint::x_plus;
  const double sign = (which == Joint::x_minus || which == Joint::y_minus) ? -1.0 : 1.0;
  const Eigen::Index offset = is_x ? 0 : 1;
  w(2 * m1 + offset) += h;
  w(2 * m2 + offset) += sign * h;
  return w;
}

double joint_variance(const Eigen::MatrixXd& covariance, const TransverseGrid& grid, Basis basis, std::size_t p,
                      Joint which) {
  const Eigen::VectorXd w = joint_weights(grid, basis, p, which);
  return w.dot(covariance * w);
}

}  // namespace msq
