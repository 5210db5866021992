#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "invdes/io.hpp"
#include "invdes/profile.hpp"

using namespace invdes;

TEST_CASE("primitive of simple profiles") {
    // u == 1 on [0,1]: U(x) = x.
    const SampledProfile one = testing::make_profile(0.0, 0.01, 100, [](double) { return 1.0; });
    const LipschitzProfile U = primitive(one, 0.0);
    CHECK(U.at(0.0) == doctest::Approx(0.0));
    CHECK(U.at(0.37) == doctest::Approx(0.37));
    CHECK(U.at(1.0) == doctest::Approx(1.0));

    // step 0 -> 1 at 0 on [-1,1], base -1: U = 0 then x.
    const SampledProfile step =
        testing::make_profile(-1.0, 0.01, 200, [](double x) { return x <= 0.0 ? 0.0 : 1.0; });
    const LipschitzProfile Us = primitive(step, -1.0);
    CHECK(Us.at(-0.2) == doctest::Approx(0.0));
    CHECK(Us.at(0.5) == doctest::Approx(0.5));

    // u(x) = -x on (-1,0) with fine cells: integral over the interval is 1/2
    // (exact for the midpoint step sequence).
    const SampledProfile ramp =
        testing::make_profile_midpoint({-1.0, 0.0}, 1e-3, [](double x) { return -x; });
    const LipschitzProfile Ur = primitive(ramp, -1.0);
    CHECK(Ur.at(0.0) - Ur.at(-1.0) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("derivative undoes primitive exactly") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    Grid g(-1.0, 0.02, 100);
    std::vector<double> v(100);
    for (double& w : v) w = val(rng);
    const SampledProfile u(g, v);
    const SampledProfile back = derivative(primitive(u, 0.0));
    for (int i = 0; i < g.n; ++i)
        CHECK(back.values[i] == doctest::Approx(u.values[i]).epsilon(1e-12));
}

TEST_CASE("derivative of a kinked potential") {
    // U = min(x + 1/2, 0) on (-1, 0): slopes 1 then 0.
    Grid g(-1.0, 0.01, 100);
    std::vector<double> nodes(101);
    for (int k = 0; k <= 100; ++k) nodes[k] = std::min(g.node(k) + 0.5, 0.0);
    const SampledProfile u = derivative(LipschitzProfile(g, nodes, {0.0, 1.0}));
    CHECK(u.at(-0.75) == doctest::Approx(1.0));
    CHECK(u.at(-0.25) == doctest::Approx(0.0));
}

TEST_CASE("total variation") {
    const SampledProfile c = testing::make_profile(0.0, 0.1, 20, [](double) { return 5.0; });
    CHECK(total_variation(c) == doctest::Approx(0.0));

    const SampledProfile step =
        testing::make_profile(-1.0, 0.01, 200, [](double x) { return x <= 0.0 ? 0.0 : 1.0; });
    CHECK(total_variation(step) == doctest::Approx(1.0));

    const SampledProfile clamp = testing::make_profile(
        -1.0, 1e-3, 3000, [](double x) { return std::clamp(x, 0.0, 1.0); });
    CHECK(total_variation(clamp) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tv is stable under refinement when jumps sit on nodes") {
    auto f = [](double x) { return x <= 0.25 ? 2.0 : (x <= 0.5 ? -1.0 : 0.5); };
    const SampledProfile coarse = testing::make_profile(0.0, 0.25 / 4, 16, f);
    const SampledProfile fine = testing::make_profile(0.0, 0.25 / 64, 256, f);
    CHECK(total_variation(coarse) == doctest::Approx(total_variation(fine)));
}

TEST_CASE("one-sided traces") {
    const SampledProfile step =
        testing::make_profile(-1.0, 0.01, 200, [](double x) { return x <= 0.0 ? 0.0 : 1.0; });
    CHECK(trace(step, 0.0, Side::Left) == doctest::Approx(0.0));
    CHECK(trace(step, 0.0, Side::Right) == doctest::Approx(1.0));

    const SampledProfile c = testing::make_profile(0.0, 0.1, 20, [](double) { return 5.0; });
    CHECK(trace(c, 1.0, Side::Left) == doctest::Approx(5.0));
    CHECK(trace(c, 1.0, Side::Right) == doctest::Approx(5.0));
    CHECK_THROWS_AS(trace(c, 0.0, Side::Left), std::domain_error);
    CHECK_THROWS_AS(trace(c, 2.0, Side::Right), std::domain_error);

    const SampledProfile ramp =
        testing::make_profile(-1.0, 1e-3, 1000, [](double x) { return -x; });
    CHECK(trace(ramp, -0.5, Side::Left) == doctest::Approx(0.5).epsilon(1e-2));
}

TEST_CASE("primitive slope bounds follow the value range") {
    const SampledProfile ramp =
        testing::make_profile(-1.0, 1e-2, 100, [](double x) { return -x; });
    const LipschitzProfile U = primitive(ramp, 0.0);
    CHECK(U.slope_bounds.lo == doctest::Approx(0.0).epsilon(0.02));
    CHECK(U.slope_bounds.hi == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("csv round trip preserves values bitwise") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> val(-3.0, 3.0);
    Grid g(-2.0, 1.0 / 3.0, 30);  // awkward spacing on purpose
    std::vector<double> v(30);
    for (double& w : v) w = val(rng);
    const SampledProfile u(g, v);

    std::stringstream buf;
    io::write_profile_csv(buf, u);
    const SampledProfile back = io::read_profile_csv(buf);
    REQUIRE(back.grid.n == u.grid.n);
    for (int i = 0; i < g.n; ++i) CHECK(back.values[i] == u.values[i]);
    CHECK(back.grid.dx == doctest::Approx(u.grid.dx).epsilon(1e-14));

    // A second write of the re-read profile is byte identical.
    std::stringstream buf2;
    io::write_profile_csv(buf2, back);
    std::stringstream buf3;
    io::write_profile_csv(buf3, u);
    CHECK(buf2.str() == buf3.str());
}

TEST_CASE("csv rejects non-uniform grids and junk") {
    std::stringstream bad("x,value\n0.0,1.0\n0.1,1.0\n0.35,1.0\n");
    CHECK_THROWS_AS(io::read_profile_csv(bad), std::invalid_argument);
    std::stringstream junk("x,value\n0.0,1.0\npotato\n");
    CHECK_THROWS_AS(io::read_profile_csv(junk), std::invalid_argument);
}

TEST_CASE("l1 distance integrates across mismatched grids") {
    const SampledProfile a = testing::make_profile(0.0, 0.1, 10, [](double) { return 1.0; });
    const SampledProfile b =
        testing::make_profile(0.05, 0.1, 10, [](double) { return 0.0; });
    CHECK(l1_distance(a, b, {0.0, 1.0}) == doctest::Approx(1.0));
}
