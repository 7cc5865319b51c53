#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "nlcsbp/boundary.hpp"

using namespace nlcsbp;

TEST_CASE("linear rate: no entrance for (sub)critical mechanisms") {
    BranchingMechanism sub(1.0, 1.0);
    auto v = entrance_test(sub, RateFunction::power(1.0));
    CHECK_FALSE(v.is_entrance);
    CHECK(v.integral_value == kInf);

    BranchingMechanism crit(0.0, 2.0);
    CHECK_FALSE(entrance_test(crit, RateFunction::power(1.0)).is_entrance);
}

TEST_CASE("subcritical shortcut: entrance iff the rate tail is integrable") {
    BranchingMechanism m(1.0, 1.0);
    auto yes = entrance_test(m, RateFunction::power(2.0));
    CHECK(yes.is_entrance);
    CHECK(yes.criterion_used == EntranceVerdict::Criterion::SubcriticalShortcut);
    CHECK(std::isfinite(yes.integral_value));
    CHECK_FALSE(entrance_test(m, RateFunction::power(0.5)).is_entrance);
}

TEST_CASE("critical stable: entrance iff theta > alpha") {
    auto m = BranchingMechanism::stable(1.0, 1.5);
    auto lo = entrance_test(m, RateFunction::power(1.2));
    CHECK_FALSE(lo.is_entrance);
    CHECK(lo.criterion_used == EntranceVerdict::Criterion::FullIntegral);
    auto hi = entrance_test(m, RateFunction::power(2.0));
    CHECK(hi.is_entrance);
    CHECK(std::isfinite(hi.integral_value));
    // borderline theta = alpha diverges
    CHECK_FALSE(entrance_test(m, RateFunction::power(1.5)).is_entrance);
}

TEST_CASE("exponential rates give an entrance for any gamma >= 0") {
    auto r = RateFunction::exp_rate(1.0, RateFunction::power(0.0));
    CHECK(entrance_test(BranchingMechanism(1.0, 1.0), r).is_entrance);
    CHECK(entrance_test(BranchingMechanism(0.0, 2.0), r).is_entrance);
    CHECK(entrance_test(BranchingMechanism::stable(1.0, 1.5), r).is_entrance);
}

TEST_CASE("supercritical mechanisms never have an entrance at infinity") {
    auto v = entrance_test(BranchingMechanism(-1.0, 1.0),
                           RateFunction::power(3.0));
    CHECK_FALSE(v.is_entrance);
    CHECK(v.criterion_used == EntranceVerdict::Criterion::SupercriticalRule);
}

TEST_CASE("full-integral value matches quadrature") {
    // gamma=0, sigma2=2: Psi(l) = l^2, x Psi(1/x) = 1/x, R = x^2:
    // int_1^inf x / x^2 dx diverges; R = x^3: int x/x^3 = 1.
    auto m = BranchingMechanism::stable(1.0, 2.0);
    auto v = entrance_test(m, RateFunction::power(3.0));
    CHECK(v.is_entrance);
    auto oracle = integrate_upper_tail(
        [&](double x) { return 1.0 / (x * m.psi(1.0 / x) * std::pow(x, 3.0)); },
        1.0, 1e-10);
    CHECK(v.integral_value == doctest::Approx(oracle.value).epsilon(1e-6));
}

TEST_CASE("borderline tabulated tail is inconclusive") {
    auto g = geometric_grid(1.0, 1e4, 60);
    std::vector<double> vals(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) vals[i] = std::pow(g[i], 1.02);
    auto tab = RateFunction::tabulated(g, vals, 1.02);
    CHECK_THROWS_AS(entrance_test(BranchingMechanism(1.0, 1.0), tab, 0.05),
                    InconclusiveTail);
}

TEST_CASE("empirical ladder plateau detection") {
    std::vector<double> xs = {10, 100, 1000};
    std::vector<double> means = {0.65, 0.705, 0.707};
    std::vector<double> ses = {0.004, 0.004, 0.004};
    auto r = entrance_test_empirical(xs, means, ses, 0.71);
    CHECK(r.plateau);
    CHECK(r.matches_mean);
    CHECK(r.plateau_value == doctest::Approx(0.707).epsilon(0.05));

    std::vector<double> growing = {0.6, 1.2, 2.4};
    CHECK_FALSE(entrance_test_empirical(xs, growing, ses).plateau);
}
