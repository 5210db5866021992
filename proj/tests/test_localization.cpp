#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "invdes/localization.hpp"

using namespace invdes;

namespace {

const FluxModel burgers = make_burgers_flux();
const double dx = 1e-3;
const Interval J01{0.0, 1.0};

SampledProfile shock_on(const Interval& span) {
    return testing::make_profile_on(span, dx,
                                    [](double x) { return x <= 0.0 ? 1.0 : 0.0; });
}

}  // namespace

TEST_CASE("extensions continue the traces") {
    // Constant target: extension constant.
    const LocalizedTarget tc{
        testing::make_profile_on({0.0, 1.0}, dx, [](double) { return 0.5; }), J01, 1.0};
    const SampledProfile ec = extend_profile(tc, burgers);
    CHECK(ec.grid.x0 < -0.6);  // covers K_o = [-0.5, 0.5] plus margin
    for (double v : ec.values) CHECK(v == doctest::Approx(0.5));

    // Shock restricted to [-2,2]: already constant outside, so the extension
    // is the original shock.
    const LocalizedTarget ts{shock_on({-2.0, 2.0}), J01, 1.0};
    const SampledProfile es = extend_profile(ts, burgers);
    CHECK(es.at(-2.7) == doctest::Approx(1.0));
    CHECK(es.at(2.7) == doctest::Approx(0.0));
    CHECK(l1_distance(es, shock_on({-2.0, 2.0}), {-2.0, 2.0}) <= 1e-12);

    // Ramp seen through [0.25, 0.75]: trace continuation on both sides.
    const LocalizedTarget tr{
        testing::make_profile_on({0.25, 0.75}, dx,
                                 [](double x) { return std::clamp(x, 0.0, 1.0); }),
        J01, 1.0};
    const SampledProfile er = extend_profile(tr, burgers);
    CHECK(er.at(0.0) == doctest::Approx(0.25).epsilon(2 * dx));
    CHECK(er.at(1.2) == doctest::Approx(0.75).epsilon(2 * dx));
    CHECK(er.at(0.5) == doctest::Approx(0.5).epsilon(2 * dx));
}

TEST_CASE("restricted design of the windowed shock equals the full-line one") {
    const LocalizedTarget target{shock_on({-2.0, 2.0}), J01, 1.0};
    const RestrictedDesign rd = restricted_design(target, burgers);
    CHECK(rd.K_o.lo == doctest::Approx(-3.0));
    CHECK(rd.K_o.hi == doctest::Approx(2.0));
    CHECK_FALSE(rd.degenerate);

    // Full-line reference: the same shock on a much larger window, same base.
    const DesignEnvelope full =
        design_envelope(shock_on({-4.0, 4.0}), burgers, 1.0, J01, 0.0);
    CHECK(l1_distance(rd.envelope.u_flat, full.u_flat, rd.K_o) <= 1e-9);
    CHECK(l1_distance(rd.envelope.u_sharp, full.u_sharp, rd.K_o) <= 1e-9);
}

TEST_CASE("constant window target collapses to the shifted constant") {
    const LocalizedTarget target{
        testing::make_profile_on({0.0, 1.0}, dx, [](double) { return 0.5; }), J01, 1.0};
    const RestrictedDesign rd = restricted_design(target, burgers);
    CHECK(rd.K_o.lo == doctest::Approx(-0.5));
    CHECK(rd.K_o.hi == doctest::Approx(0.5));
    for (int i = 0; i < rd.envelope.grid_o.n; ++i) {
        CHECK(rd.envelope.u_flat.values[i] == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(rd.envelope.u_sharp.values[i] == doctest::Approx(0.5).epsilon(1e-9));
    }
}

TEST_CASE("critical ramp window degenerates to a point") {
    const LocalizedTarget target{
        testing::make_profile_on({0.0, 1.0}, dx,
                                 [](double x) { return std::clamp(x, 0.0, 1.0); }),
        J01, 1.0};
    const RestrictedDesign rd = restricted_design(target, burgers);
    CHECK(rd.degenerate);
    CHECK(std::abs(rd.K_o.lo) <= 2 * dx);
    CHECK(std::abs(rd.K_o.hi) <= 2 * dx);
}

TEST_CASE("glue reproduces a solution glued to itself") {
    const SampledProfile u = shock_on({-2.0, 2.0});
    const SampledProfile w = glue(u, u, 0.3, burgers, 1.0, 1e-6);
    CHECK(l1_distance(w, u, {-2.0, 2.0}) <= 1e-12);
}

TEST_CASE("glueing two members of a design set yields a member") {
    const SampledProfile target = shock_on({-3.0, 3.0});
    const DesignEnvelope env = design_envelope(target, burgers, 1.0, J01, 0.0);
    const SampledProfile a = sample_design(env, 0.2);
    const SampledProfile b = sample_design(env, 0.9);
    // Both evolve to the same profile at T, so traces match at any point.
    const SampledProfile w = glue(a, b, 0.5, burgers, 1.0, 1e-4);
    const SampledProfile wr = resample(w, env.grid_o);
    CHECK(membership(wr, env).member);
    const SampledProfile back = evolve(wr, burgers, 1.0, target.grid.span());
    CHECK(l1_distance(back, target, target.grid.span()) <= 5e-3);
}

TEST_CASE("glue refuses mismatched traces") {
    const SampledProfile c0 =
        testing::make_profile_on({-2.0, 2.0}, dx, [](double) { return 0.0; });
    const SampledProfile c1 =
        testing::make_profile_on({-2.0, 2.0}, dx, [](double) { return 1.0; });
    CHECK_THROWS_AS(glue(c0, c1, 0.0, burgers, 1.0, 1e-6), GlueMismatchError);
}

TEST_CASE("different feasible extensions give the same restricted envelope") {
    // Profile 1: the shock itself on the full line. Profile 2: agrees on
    // [-2,2], drifts elsewhere while staying admissible (up-slopes below
    // 1/T, arbitrary down-jumps).
    const SampledProfile u1 = shock_on({-5.0, 5.0});
    const SampledProfile u2 = testing::make_profile_on({-5.0, 5.0}, dx, [](double x) {
        if (x <= -3.0) return 1.4;                        // down-jump toward the window
        if (x <= 0.0) return 1.0;
        if (x <= 2.5) return 0.0;
        return std::min(0.9 * (x - 2.5), 0.8);            // slow climb far right
    });
    const ConsistencyReport rep =
        extension_consistency(u1, u2, -2.0, 2.0, burgers, 1.0, {0.0, 1.5});
    CHECK(rep.K_o.lo == doctest::Approx(-3.0));
    CHECK(rep.K_o.hi == doctest::Approx(2.0));
    CHECK(rep.flat_discrepancy <= 10 * dx);
    CHECK(rep.sharp_discrepancy <= 20 * dx);

    // Identical profiles give zero discrepancy.
    const ConsistencyReport same =
        extension_consistency(u1, u1, -2.0, 2.0, burgers, 1.0, {0.0, 1.5});
    CHECK(same.flat_discrepancy <= 1e-12);
    CHECK(same.sharp_discrepancy <= 1e-12);

    // Two constants equal on the window but different outside.
    const SampledProfile c1 = testing::make_profile_on({-4.0, 4.0}, dx, [](double x) {
        return x <= 2.0 ? 0.5 : 0.2;
    });
    const SampledProfile c2 = testing::make_profile_on({-4.0, 4.0}, dx, [](double x) {
        return x > -2.0 ? 0.5 : 0.9;
    });
    const ConsistencyReport rc =
        extension_consistency(c1, c2, -2.0, 2.0, burgers, 1.0, {0.0, 1.0});
    CHECK(rc.flat_discrepancy <= 10 * dx);
    CHECK(rc.sharp_discrepancy <= 20 * dx);
}

TEST_CASE("randomized windowed targets: extension equals full line on K_o") {
    std::mt19937_64 rng(77);
    for (int rep = 0; rep < 5; ++rep) {
        const SampledProfile inner = testing::random_feasible_profile(
            rng, burgers, 1.0, {-1.0, 1.0}, 2e-3, {0.0, 1.0});
        const LocalizedTarget target{inner, J01, 1.0};
        const RestrictedDesign rd = restricted_design(target, burgers);
        // Independent route: extend by hand, run the global design with the
        // same base point, restrict.
        const SampledProfile ext = extend_profile(target, burgers);
        const DesignEnvelope full = design_envelope(ext, burgers, 1.0, J01, 0.0);
        CHECK(l1_distance(rd.envelope.u_flat, full.u_flat, rd.K_o) <= 1e-9);
        CHECK(l1_distance(rd.envelope.u_sharp, full.u_sharp, rd.K_o) <= 1e-9);
    }
}
