#include <cmath>
#include <numbers>

#include "doctest.h"
#include "msq/error.hpp"
#include "msq/optics.hpp"
#include "msq/program.hpp"

using namespace msq;

TEST_CASE("squeeze and overlap are placed in the far field, spatial loss in the near field") {
  const TransverseGrid g(8, 4, 0.1, 0.1);
  SymplecticProgram p(g, Basis::near_field);
  p.append(squeeze_layer(GainProfile::uniform(0.3), 1.0));
  REQUIRE(p.steps().size() == 2);
  CHECK(std::holds_alternative<FourierTransform>(p.steps()[0].element));
  CHECK_FALSE(std::get<FourierTransform>(p.steps()[0].element).inverse);
  CHECK(p.output_basis() == Basis::far_field);

  p.append(pump_aperture(g, 0.2, 4));
  REQUIRE(p.steps().size() == 4);
  CHECK(std::get<FourierTransform>(p.steps()[2].element).inverse);
  CHECK(p.output_basis() == Basis::near_field);
}

TEST_CASE("explicit transforms must match the current basis") {
  SymplecticProgram p(make_grid(4, 4, 0.1), Basis::far_field);
  CHECK_THROWS_AS(p.append(FourierTransform{false}), InvalidArgument);
  p.append(FourierTransform{true});
  CHECK(p.output_basis() == Basis::near_field);
  p.to_basis(Basis::near_field);
  CHECK(p.steps().size() == 1);
}

TEST_CASE("overlap shift and reduced grid") {
  const TransverseGrid g(16, 8, 0.05, 0.1);
  const double dq = g.dq_x();
  CHECK(rgr_shift(RgrOverlap{4 * dq, Axis::x}, g) == 4);
  const TransverseGrid out = rgr_output_grid(RgrOverlap{4 * dq, Axis::x}, g);
  CHECK(out.nx() == 8);
  CHECK(out.ny() == 8);
  CHECK(out.pitch_x() == doctest::Approx(std::numbers::pi / (4 * dq)));
  CHECK(out.pitch_y() == doctest::Approx(0.1));
  CHECK(out.dq_x() == doctest::Approx(dq));

  CHECK_THROWS_AS(rgr_shift(RgrOverlap{5 * dq, Axis::x}, g), InvalidArgument);    // band too wide
  CHECK_THROWS_AS(rgr_shift(RgrOverlap{1.5 * dq, Axis::x}, g), InvalidArgument);  // off grid
  CHECK_THROWS_AS(rgr_shift(RgrOverlap{0.0, Axis::x}, g), InvalidArgument);
  CHECK_THROWS_AS(rgr_shift(RgrOverlap{3 * g.dq_y(), Axis::y}, g), InvalidArgument);
}

TEST_CASE("program tracks grids through the overlap") {
  const TransverseGrid g(8, 8, 0.1, 0.1);
  SymplecticProgram p(g);
  p.append(rgr_overlap(2 * g.dq_y(), Axis::y));
  CHECK(p.output_grid().ny() == 4);
  CHECK(p.output_grid().nx() == 8);
  CHECK(p.steps().back().grid_in == g);
}

TEST_CASE("element validation") {
  const TransverseGrid g = make_grid(4, 4, 0.1);
  SymplecticProgram p(g);
  CHECK_THROWS_AS(p.append(Loss{1.5}), InvalidArgument);
  CHECK_THROWS_AS(p.append(SpatialLoss{std::vector<double>(3, 1.0)}), InvalidArgument);
  CHECK_THROWS_AS(p.append(QuadraturePhase{Basis::near_field, std::vector<double>(5, 0.0)}), InvalidArgument);
  CHECK_THROWS_AS(loss(-0.1), InvalidArgument);
  CHECK_THROWS_AS(squeeze_layer(GainProfile::uniform(0.1), 0.0), InvalidArgument);
  CHECK(is_lossy(Loss{0.5}));
  CHECK(is_lossy(SpatialLoss{}));
  CHECK_FALSE(is_lossy(FourierTransform{}));
  CHECK(element_name(RgrOverlap{}) == "rgr_overlap");
}

TEST_CASE("gain profile shape") {
  const GainProfile a = GainProfile::annulus(1.0, 10.0, 2.0, 0.25);
  CHECK(a.at(10.0) == doctest::Approx(1.0));
  CHECK(a.at(12.0) == doctest::Approx(std::exp(-0.5)));
  CHECK(a.at(0.0) <= 0.25 + 1e-15);
  CHECK(GainProfile::uniform(0.7).at(123.0) == 0.7);
  CHECK(a.with_peak(2.0).at(12.0) == doctest::Approx(2.0 * std::exp(-0.5)));
  CHECK_THROWS_AS(GainProfile::annulus(1.0, 1.0, 0.0, 0.5).validate(), InvalidArgument);
  CHECK_THROWS_AS(GainProfile::annulus(1.0, 1.0, 1.0, 1.5).validate(), InvalidArgument);
}
