#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "msq/dense_engine.hpp"
#include "msq/detection.hpp"
#include "msq/error.hpp"
#include "msq/gaussian_state.hpp"
#include "msq/optics.hpp"
#include "msq/selfcheck.hpp"
#include "support.hpp"

using namespace msq;

namespace {

LocalOscillator rotate(const LocalOscillator& lo, double theta) {
  const std::complex<double> e = std::polar(1.0, theta);
  Field p = lo.probe(), c = lo.conjugate();
  for (auto& v : p) v *= e;
  for (auto& v : c) v *= e;
  return LocalOscillator::normalized(lo.grid(), p, c);
}

}  // namespace

TEST_CASE("dense and implicit engines agree on 200 random pipelines") {
  std::mt19937_64 rng(1234);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const RandomPipeline p = random_pipeline(rng);
    const Eigen::MatrixXd cov = dense_realize(*p.program);
    const HomodyneForm d = dense_form(cov, p.lo);
    const HomodyneForm i = implicit_form(*p.program, p.lo);
    worst = std::max({worst, std::abs(d.a - i.a), std::abs(d.b - i.b), std::abs(d.c - i.c)});
    CHECK(check_uncertainty(cov) > -1e-10);
    CHECK(d.min_ratio() > 0.0);
  }
  CHECK(worst < kEngineTolerance);
  MESSAGE("largest engine difference " << worst);
}

TEST_CASE("every lossless step of a random pipeline is symplectic") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 40; ++t) {
    const RandomPipeline p = random_pipeline(rng, 6);
    for (const auto& step : p.program->steps()) {
      if (is_lossy(step.element)) {
        CHECK_THROWS_AS(mode_transform(step), InvalidArgument);
        continue;
      }
      CHECK(symplectic_defect(real_symplectic(mode_transform(step))) < 1e-12);
    }
  }
}

TEST_CASE("vacuum sits at the shot-noise level for any LO") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, std::numbers::pi);
  const auto g = make_grid(4, 6, 0.1);
  const auto vac = GaussianState::vacuum(g);
  // a lossless passive program keeps vacuum as vacuum
  auto passive = std::make_shared<SymplecticProgram>(g);
  passive->append(fresnel_slice(3.0, 795, 1));
  passive->append(QuadraturePhase{Basis::far_field, std::vector<double>(g.points(), 0.7)});
  passive->to_basis(Basis::near_field);
  for (int t = 0; t < 100; ++t) {
    const auto lo = random_lo(rng, g);
    const double chi = u(rng);
    CHECK(std::abs(homodyne_form(vac, lo).ratio(chi) - 1.0) < 1e-13);
    CHECK(std::abs(implicit_form(*passive, lo).ratio(chi) - 1.0) < 1e-12);
  }
}

TEST_CASE("symplectic spectrum does not depend on the basis") {
  const auto g = make_grid(4, 4, 0.1);
  auto p = std::make_shared<SymplecticProgram>(g);
  MediumSpec m;
  m.slices = 3;
  build_medium(*p, m, GainProfile::annulus(1.0, 10.0, 15.0, 0.2));
  p->append(loss(0.7));
  const Eigen::MatrixXd far = dense_realize(*p);
  p->to_basis(Basis::near_field);
  const Eigen::MatrixXd near = dense_realize(*p);
  CHECK((symplectic_eigenvalues(far) - symplectic_eigenvalues(near)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(purity(far) == doctest::Approx(purity(near)).epsilon(1e-10));
}

TEST_CASE("composition: Fresnel slices add, losses multiply") {
  const auto g = make_grid(4, 4, 0.1);
  auto base = [&] {
    SymplecticProgram p(g);
    p.append(squeeze_layer(GainProfile::annulus(0.9, 12.0, 20.0, 0.3, 0.4), 1.0));
    return p;
  };
  SymplecticProgram a = base(), b = base();
  a.append(fresnel_slice(2.0, 795, 1)).append(fresnel_slice(5.0, 795, 1));
  b.append(fresnel_slice(7.0, 795, 1));
  CHECK((dense_realize(a) - dense_realize(b)).cwiseAbs().maxCoeff() < 1e-12);

  SymplecticProgram c = base(), d = base();
  c.append(loss(0.8)).append(loss(0.5));
  d.append(loss(0.4));
  CHECK((dense_realize(c) - dense_realize(d)).cwiseAbs().maxCoeff() < 1e-14);

  // loss commutes with a passive phase
  SymplecticProgram e = base(), f = base();
  const QuadraturePhase ph{Basis::far_field, std::vector<double>(g.points(), 1.1)};
  e.append(loss(0.6)).append(ph);
  f.append(ph).append(loss(0.6));
  CHECK((dense_realize(e) - dense_realize(f)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("gauge: a global LO phase shifts the detection phase") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 20; ++t) {
    const RandomPipeline p = random_pipeline(rng, 6);
    const double theta = 0.3 + 0.1 * t;
    const HomodyneForm f0 = implicit_form(*p.program, p.lo);
    const HomodyneForm f1 = implicit_form(*p.program, rotate(p.lo, theta));
    CHECK(std::abs(f1.ratio(p.chi) - f0.ratio(p.chi + theta)) < 1e-10);
    CHECK(std::abs(f1.min_ratio() - f0.min_ratio()) < 1e-10);
  }
}

TEST_CASE("gauge: the pump phase rotates but does not change the squeezing") {
  const auto g = make_grid(2, 2, 0.1);
  const auto lo = test::point_lo(g, 0, 1.0, 0, 1.0);
  const double ref = dense_form(dense_realize(*test::thin_squeezer(g, 0.9)), lo).min_ratio();
  for (double phi : {0.4, 1.3, 2.9}) {
    const HomodyneForm f = dense_form(dense_realize(*test::thin_squeezer(g, 0.9, phi)), lo);
    CHECK(std::abs(f.min_ratio() - ref) < 1e-12);
  }
}

TEST_CASE("lumped loss bounds the squeezing from below") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 60; ++t) {
    RandomPipeline p = random_pipeline(rng, 6);
    auto prog = std::make_shared<SymplecticProgram>(*p.program);
    const double eta = 0.2 + 0.01 * t;
    prog->append(loss(eta));
    CHECK(implicit_form(*prog, p.lo).min_ratio() >= 1.0 - eta - 1e-12);
  }
}

TEST_CASE("dense engine honours the mode cap") {
  const auto g = make_grid(8, 8, 0.1);
  SymplecticProgram p(g);
  p.append(squeeze_layer(GainProfile::uniform(0.2), 1.0));
  DenseOptions o;
  o.mode_cap = 64;
  CHECK_THROWS_AS(dense_realize(p, o), Error);
  o.mode_cap = 128;
  CHECK_NOTHROW(dense_realize(p, o));
}

TEST_CASE("selfcheck passes and is reproducible") {
  const SelfcheckReport a = run_selfcheck(42, 25);
  const SelfcheckReport b = run_selfcheck(42, 25);
  CHECK(a.passed());
  CHECK(a.trials == 25);
  CHECK(a.max_engine_difference == b.max_engine_difference);
  CHECK(a.max_engine_difference < kEngineTolerance);
  CHECK(a.max_vacuum_deviation < 1e-12);
}
