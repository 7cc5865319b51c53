#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "nlcsbp/scale.hpp"

using namespace nlcsbp;

TEST_CASE("pure drift: W = 1/gamma") {
    auto sf = ScaleFunction::build(BranchingMechanism(2.0, 0.0));
    CHECK(sf.method() == ScaleFunction::Method::PureDrift);
    CHECK(sf(1.0) == doctest::Approx(0.5));
    CHECK(sf(-1.0) == 0.0);
    CHECK(sf.limit() == doctest::Approx(0.5));
}

TEST_CASE("Brownian with drift: W(x) = 1 - e^{-x} for psi = l + l^2") {
    auto sf = ScaleFunction::build(BranchingMechanism(1.0, 2.0));
    CHECK(sf.method() == ScaleFunction::Method::BrownianDrift);
    for (double x : {0.05, 0.5, 2.0, 20.0})
        CHECK(sf(x) == doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-12));
    CHECK(sf.limit() == doctest::Approx(1.0));
    CHECK(sf.delta(2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-10));
}

TEST_CASE("stable: W(x) = x^{alpha-1}/Gamma(alpha)") {
    for (double alpha : {1.2, 1.5, 2.0}) {
        auto sf = ScaleFunction::build(BranchingMechanism::stable(1.0, alpha));
        for (double x : {0.05, 1.0, 20.0})
            CHECK(sf(x) == doctest::Approx(std::pow(x, alpha - 1.0) /
                                           std::tgamma(alpha))
                               .epsilon(1e-10));
        CHECK(sf.limit() == kInf);
    }
}

TEST_CASE("numerical inversion matches Brownian closed form") {
    ScaleFunction::Options opts;
    opts.force = ScaleFunction::Method::NumericInversion;
    auto sf = ScaleFunction::build(BranchingMechanism(1.0, 2.0), opts);
    CHECK(sf.method() == ScaleFunction::Method::NumericInversion);
    for (double x : {0.05, 0.3, 1.0, 5.0, 20.0}) {
        double ref = 1.0 - std::exp(-x);
        CHECK(std::abs(sf(x) - ref) / ref <= 1e-6);
    }
}

TEST_CASE("numerical inversion matches stable closed form") {
    ScaleFunction::Options opts;
    opts.force = ScaleFunction::Method::NumericInversion;
    auto sf =
        ScaleFunction::build(BranchingMechanism::stable(1.0, 1.5), opts);
    for (double x : {0.05, 1.0, 8.0, 20.0}) {
        double ref = std::pow(x, 0.5) / std::tgamma(1.5);
        CHECK(std::abs(sf(x) - ref) / ref <= 1e-6);
    }
}

TEST_CASE("compound Poisson mechanism validates against its transform") {
    BranchingMechanism m(1.0, 1.0,
                         LevyMeasureSpec::compound_poisson_exp(2.0, 0.5));
    auto sf = ScaleFunction::build(m);
    auto q = geometric_grid(0.1, 10.0, 16);
    auto x = geometric_grid(0.05, 20.0, 32);
    auto v = sf.validate(q, x);
    CHECK(v.max_laplace_residual < 1e-6);
    CHECK(v.monotonicity_violations == 0);
    CHECK(v.ratio_finite);
    CHECK(v.c1 > 0.0);
    CHECK(v.c2 >= v.c1);
    CHECK(sf.limit() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("tempered stable validates") {
    BranchingMechanism m(0.5, 0.0,
                         LevyMeasureSpec::tempered_stable(1.5, 1.0, 1.0));
    auto sf = ScaleFunction::build(m);
    auto v = sf.validate(geometric_grid(0.1, 10.0, 16),
                         geometric_grid(0.05, 20.0, 32));
    CHECK(v.max_laplace_residual < 1e-6);
    CHECK(v.monotonicity_violations == 0);
}

TEST_CASE("critical stable-tail mechanism: W unbounded, sandwich finite") {
    BranchingMechanism m(0.0, 0.0, LevyMeasureSpec::stable_tail(1.5, 1.0));
    auto sf = ScaleFunction::build(m);
    CHECK(sf.limit() == kInf);
    auto v = sf.validate(geometric_grid(0.1, 10.0, 16),
                         geometric_grid(0.05, 20.0, 32));
    CHECK(v.monotonicity_violations == 0);
    CHECK(v.ratio_finite);
    // exact stable comparison: Psi = c_pi Gamma(-alpha) l^alpha
    double c = 1.0 * std::tgamma(-1.5);
    for (double x : {0.1, 1.0, 10.0}) {
        double ref = std::pow(x, 0.5) / (c * std::tgamma(1.5));
        CHECK(sf(x) == doctest::Approx(ref).epsilon(1e-6));
    }
}

TEST_CASE("W is nondecreasing and zero below the origin") {
    BranchingMechanism m(1.0, 1.0,
                         LevyMeasureSpec::compound_poisson_exp(1.0, 1.0));
    auto sf = ScaleFunction::build(m);
    CHECK(sf(-0.5) == 0.0);
    double prev = 0.0;
    for (double x : geometric_grid(1e-3, 50.0, 100)) {
        double w = sf(x);
        CHECK(w >= prev - 1e-12);
        prev = w;
    }
}
