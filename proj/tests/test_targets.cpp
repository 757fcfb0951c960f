#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "morphnet/targets.hpp"

using namespace morphnet;

// Frozen outputs of the brute-force floor searches on the 512-point grid,
// re-verified against a live run below.
namespace {
constexpr double kTropicalSquareFloor = 0.12499952129474201;
constexpr double kFClassHalfslopeFloor = 0.12475538160470179;
}  // namespace

TEST_CASE("builtin targets") {
    CHECK(builtin_targets().size() == 5);
    CHECK(target_by_id("square").f(0.5) == 0.25);
    CHECK(target_by_id("double").f(0.5) == 1.0);
    CHECK(target_by_id("neg").f(0.5) == -0.5);
    CHECK(target_by_id("halfslope").f(0.5) == 0.25);
    CHECK(target_by_id("sinewave").f(0.25) == doctest::Approx(1.0).epsilon(1e-12));
    try {
        target_by_id("cube");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("square") != std::string::npos);  // lists valid ids
    }
}

TEST_CASE("derivative-gap floors") {
    // slope-2 target against a [0,1] box: the (0,1) endpoint pair pays 1/2
    CHECK(lower_bound_floor(target_by_id("double"), 0.0, 1.0) ==
          doctest::Approx(0.5).epsilon(1e-12));
    // -x against [0,1]: same gap from the other side
    CHECK(lower_bound_floor(target_by_id("neg"), 0.0, 1.0) ==
          doctest::Approx(0.5).epsilon(1e-12));
    // x/2 fits inside the box: no floor
    CHECK(lower_bound_floor(target_by_id("halfslope"), 0.0, 1.0) == 0.0);
    // square's slope reaches 2, so even the [-1,1] box pays 1/8 at (1/2, 1)
    CHECK(lower_bound_floor(target_by_id("square"), -1.0, 1.0) ==
          doctest::Approx(0.125).epsilon(1e-6));
}

TEST_CASE("tropical brute-force floor for the square target") {
    const TropicalFloor f = tropical_floor(target_by_id("square"));
    CHECK(std::fabs(f.sup_error - kTropicalSquareFloor) <= 1e-9);
    // the optimizer's own form must achieve what it reports
    double dev = 0.0;
    for (double x : linspace(0.0, 1.0, 512))
        dev = std::max(dev, std::fabs(f.form.eval(x) - x * x));
    CHECK(dev == doctest::Approx(f.sup_error).epsilon(1e-12));
}

TEST_CASE("three-slope brute-force floor for the halfslope target") {
    const FClassFloor f = fclass_floor(target_by_id("halfslope"));
    CHECK(std::fabs(f.sup_error - kFClassHalfslopeFloor) <= 1e-9);
    CHECK(f.sup_error > 0.05);  // slope-1/2 targets defeat the three-slope family
}

TEST_CASE("relu interpolation networks track the target") {
    const TargetFunction& square = target_by_id("square");
    const NetworkSpec net = relu_interpolation_network(square, 16);
    CHECK(net.depth() == 1);
    CHECK(net.layers[0].width() == 16);
    CHECK(sup_error(net, square) < 0.002);
    CHECK(pl_interpolation_error(square, 16) < 0.02);

    const TargetFunction& sine = target_by_id("sinewave");
    CHECK(sup_error(relu_interpolation_network(sine, 32), sine) < 0.05);
    CHECK(pl_interpolation_error(sine, 32) < 0.02);

    CHECK_THROWS_AS(relu_interpolation_network(square, 0), std::invalid_argument);
}

TEST_CASE("linspace endpoints are inclusive") {
    const auto g = linspace(0.0, 1.0, 512);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 1.0);
    CHECK(g.size() == 512);
}
