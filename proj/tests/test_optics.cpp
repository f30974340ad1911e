#include <cmath>
#include <numbers>

#include "doctest.h"
#include "msq/dense_engine.hpp"
#include "msq/detection.hpp"
#include "msq/error.hpp"
#include "msq/optics.hpp"
#include "support.hpp"

using namespace msq;

namespace {

int count_steps(const SymplecticProgram& p, auto pred) {
  int n = 0;
  for (const auto& s : p.steps()) n += pred(s.element) ? 1 : 0;
  return n;
}

}  // namespace

TEST_CASE("gain and squeeze parameter") {
  CHECK(gain_to_squeeze(4.0) == doctest::Approx(std::log(2.0 + std::sqrt(3.0))));
  CHECK(gain_to_squeeze(2.0) == doctest::Approx(std::log(1.0 + std::sqrt(2.0))));
  CHECK(gain_to_squeeze(1.0) == 0.0);
  CHECK(squeeze_to_gain(gain_to_squeeze(3.3)) == doctest::Approx(3.3));
  CHECK_THROWS_AS(gain_to_squeeze(0.5), InvalidArgument);
}

TEST_CASE("medium wavenumber") {
  MediumSpec m;
  CHECK(m.wavenumber() == doctest::Approx(2 * std::numbers::pi / 795e-6));
  m.refractive_index = 1.5;
  CHECK(m.wavenumber() == doctest::Approx(1.5 * 2 * std::numbers::pi / 795e-6));
  m.slices = 0;
  CHECK_THROWS_AS(m.validate(), InvalidArgument);
}

TEST_CASE("zero-length Fresnel slice is the identity and q = 0 never picks up phase") {
  const TransverseGrid g = make_grid(4, 4, 0.1);
  SymplecticProgram p(g);
  p.append(fresnel_slice(0.0, 795, 1));
  const ModeTransform t = mode_transform(p.steps()[0]);
  CHECK((t.u - Eigen::MatrixXcd::Identity(32, 32)).norm() == 0.0);
  CHECK(t.v.norm() == 0.0);

  SymplecticProgram q(g);
  q.append(fresnel_slice(7.0, 795, 1));
  const ModeTransform t2 = mode_transform(q.steps()[0]);
  CHECK(t2.u(0, 0) == std::complex<double>(1.0, 0.0));
  const double k = 2 * std::numbers::pi / 795e-6;
  const std::size_t p1 = g.point(1, 0);
  CHECK(std::arg(t2.u(p1, p1)) == doctest::Approx(-g.dq_x() * g.dq_x() * 7.0 / (2 * k)));
}

TEST_CASE("propagating forward then back restores the covariance") {
  const TransverseGrid g = make_grid(4, 4, 0.05);
  SymplecticProgram a(g);
  a.append(squeeze_layer(GainProfile::annulus(0.8, 20.0, 30.0, 0.3), 1.0));
  const Eigen::MatrixXd before = dense_realize(a);
  a.append(fresnel_slice(12.5, 795, 1));
  a.append(fresnel_slice(-12.5, 795, 1));
  CHECK((dense_realize(a) - before).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("lumped loss on pure G = 4 squeezing") {
  const TransverseGrid g = make_grid(2, 2, 0.1);
  const double s = gain_to_squeeze(4.0);
  auto prog = test::thin_squeezer(g, s);
  const auto lo = test::point_lo(g, 0, 1.0, 0, 1.0);
  const double pure = dense_form(dense_realize(*prog), lo).min_ratio();
  CHECK(std::abs(pure - std::exp(-2 * s)) < 1e-12);
  CHECK(to_db(pure) == doctest::Approx(-11.44).epsilon(1e-3));
  prog->append(loss(0.8));
  const double lossy = dense_form(dense_realize(*prog), lo).min_ratio();
  CHECK(std::abs(lossy - (0.8 * std::exp(-2 * s) + 0.2)) < 1e-12);
  CHECK(lossy == doctest::Approx(0.2574).epsilon(1e-3));
  CHECK(to_db(lossy) == doctest::Approx(-5.89).epsilon(1e-3));
}

TEST_CASE("loss extremes") {
  const TransverseGrid g = make_grid(2, 2, 0.1);
  const auto lo = test::point_lo(g, 1, {0.3, 0.4}, 1, {0.5, -0.1});
  auto a = test::thin_squeezer(g, 0.7);
  const HomodyneForm before = dense_form(dense_realize(*a), lo);
  a->append(loss(1.0));
  const HomodyneForm same = dense_form(dense_realize(*a), lo);
  CHECK(std::abs(same.ratio(0.3) - before.ratio(0.3)) < 1e-14);
  a->append(loss(0.0));
  const HomodyneForm vac = dense_form(dense_realize(*a), lo);
  CHECK(std::abs(vac.ratio(0.3) - 1.0) < 1e-14);
  CHECK(std::abs(vac.ratio(1.7) - 1.0) < 1e-14);
}

TEST_CASE("medium slicing") {
  const TransverseGrid g = make_grid(4, 4, 0.1);
  auto is_squeeze = [](const Element& e) { return std::holds_alternative<SqueezeLayer>(e); };
  auto is_fresnel = [](const Element& e) { return std::holds_alternative<FresnelSlice>(e); };

  SymplecticProgram thin(g);
  MediumSpec m;
  m.length_mm = 0.0;
  m.slices = 1;
  build_medium(thin, m, GainProfile::uniform(1.0));
  CHECK(thin.steps().size() == 1);
  CHECK(count_steps(thin, is_squeeze) == 1);
  CHECK(std::get<SqueezeLayer>(thin.steps()[0].element).profile.s_max == doctest::Approx(gain_to_squeeze(4.0)));

  SymplecticProgram thick(g);
  m.length_mm = 12.5;
  m.slices = 4;
  build_medium(thick, m, GainProfile::uniform(1.0));
  CHECK(count_steps(thick, is_squeeze) == 4);
  CHECK(count_steps(thick, is_fresnel) == 5);
  double net = 0.0;
  for (const auto& st : thick.steps()) {
    if (const auto* f = std::get_if<FresnelSlice>(&st.element)) net += f->dz_mm;
  }
  CHECK(std::abs(net) < 1e-12);  // referenced to the cell centre
}

TEST_CASE("uniform thin medium squeezes every near-field point locally") {
  const TransverseGrid g = make_grid(4, 4, 0.1);
  SymplecticProgram p(g);
  MediumSpec m;
  m.length_mm = 0.0;
  m.slices = 1;
  m.gain = 2.0;
  build_medium(p, m, GainProfile::uniform(1.0));
  p.to_basis(Basis::near_field);
  const Eigen::MatrixXd cov = dense_realize(p);
  for (std::size_t q = 0; q < g.points(); ++q) {
    CHECK(std::abs(joint_variance(cov, g, Basis::near_field, q, Joint::x_minus) - 0.25 / (1 + std::sqrt(2.0)) /
                                                                                         (1 + std::sqrt(2.0))) < 1e-12);
  }
}

TEST_CASE("overlap of vacuum is vacuum on the reduced grid") {
  const TransverseGrid g(8, 4, 0.1, 0.1);
  SymplecticProgram p(g);
  p.append(rgr_overlap(2 * g.dq_x()));
  const Eigen::MatrixXd cov = dense_realize(p);
  CHECK(cov.rows() == 4 * 4 * 4);
  CHECK((cov - 0.25 * Eigen::MatrixXd::Identity(cov.rows(), cov.cols())).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("slice refinement converges") {
  // Doubling the slice count changes the narrow-LO squeezing by shrinking amounts;
  // 16 slices agree with 32 to better than 0.01 dB.
  const TransverseGrid g(16, 8, 0.03, 0.06);
  BloSeedSpec seed;
  seed.mask = MaskShape::gaussian;
  seed.width_mm = 0.08;
  seed.height_mm = 0.12;
  std::vector<double> db;
  for (int m : {2, 4, 8, 16, 32, 64}) {
    auto p = std::make_shared<SymplecticProgram>(g);
    MediumSpec med;
    med.slices = m;
    build_medium(*p, med, GainProfile::annulus(1.0, 4 * g.dq_x(), 12 * g.dq_x(), 0.1));
    p->append(rgr_overlap(4 * g.dq_x()));
    p->to_basis(Basis::near_field);
    db.push_back(to_db(implicit_form(*p, build_blo(seed, p->output_grid())).min_ratio()));
  }
  for (std::size_t i = 2; i < db.size(); ++i) CHECK(std::abs(db[i] - db[i - 1]) < std::abs(db[i - 1] - db[i - 2]));
  CHECK(std::abs(db[4] - db[3]) < 0.01);
}

TEST_CASE("aperture map") {
  const TransverseGrid g = make_grid(8, 8, 0.1);
  const auto e = std::get<SpatialLoss>(pump_aperture(g, 0.2, 2));
  CHECK(e.eta[g.point(4, 4)] == 1.0);
  CHECK(e.eta[g.point(6, 4)] == doctest::Approx(std::exp(-2.0)));
  CHECK_THROWS_AS(pump_aperture(g, 0.0, 2), InvalidArgument);
}
