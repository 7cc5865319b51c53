#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "nlcsbp/hitting.hpp"

using namespace nlcsbp;

namespace {

ScaleFunction brownian_sf() {
    return ScaleFunction::build(BranchingMechanism(1.0, 2.0));  // W = 1-e^{-x}
}

}  // namespace

TEST_CASE("omega families") {
    auto rec = Omega::reciprocal(RateFunction::power(2.0), 3.0);
    CHECK(rec(2.0) == doctest::Approx(0.75));
    CHECK(rec.tail_integrable());

    auto ind = Omega::indicator(0.2, 5.0);
    CHECK(ind(4.0) == 0.2);
    CHECK(ind(6.0) == 0.0);
    CHECK(ind.tail_integrable());

    auto tab = Omega::table({1.0, 2.0, 4.0, 8.0, 16.0},
                            {1.0, 0.5, 0.25, 0.125, 0.0625});
    CHECK(tab(2.0) == doctest::Approx(0.5));
    CHECK(tab(32.0) == 0.0);
}

TEST_CASE("weighted recursion closed form for exponential weights") {
    // Psi = l + l^2, omega(z) = e^{-z}: W_n(x) = e^{-nx} / prod_j (j + j^2)
    auto sf = brownian_sf();
    auto om = Omega::reciprocal(
        RateFunction::exp_rate(1.0, RateFunction::power(0.0)));
    auto table = WnTable::build(sf, om);
    table.extend(6);
    for (int n = 1; n <= 6; ++n) {
        double denom = 1.0;
        for (int j = 1; j <= n; ++j) denom *= j + j * j;
        for (double x : {0.5, 1.0, 2.0, 5.0}) {
            double ref = std::exp(-n * x) / denom;
            CHECK(std::abs(table.wn(n, x) - ref) / ref <= 1e-5);
        }
    }
    CHECK(table.wn(0, 3.0) == 1.0);
}

TEST_CASE("Laplace transform as a series ratio") {
    auto sf = brownian_sf();
    auto om = Omega::reciprocal(
        RateFunction::exp_rate(1.0, RateFunction::power(0.0)));
    auto table = WnTable::build(sf, om);
    // from infinity: 1 / sum_n e^{-n} / prod_j (j + j^2)
    double denom = 1.0, sum = 1.0, prod = 1.0;
    for (int n = 1; n <= 20; ++n) {
        prod *= n + n * n;
        sum += std::exp(-static_cast<double>(n)) / prod;
        (void)denom;
    }
    double lap = laplace_hit(table, 1.0, 1.0, kInf);
    CHECK(lap == doctest::Approx(1.0 / sum).epsilon(1e-6));
    CHECK(lap == doctest::Approx(0.8364).epsilon(2e-4));

    // boundary values and monotonicity in lambda
    CHECK(laplace_hit(table, 1.0, 0.0, kInf) == doctest::Approx(1.0));
    double prev = 1.0;
    for (double l : {0.25, 0.5, 1.0, 2.0}) {
        double v = laplace_hit(table, 1.0, l, kInf);
        CHECK(v < prev);
        CHECK(v > 0.0);
        prev = v;
    }
}

TEST_CASE("mean hitting time against direct quadrature") {
    auto sf = brownian_sf();
    auto rate = RateFunction::power(2.0);
    const double b = 1.0;
    double oracle = integrate_upper(
        [&](double y) {
            return (1.0 - std::exp(-(y - b))) / (y * y);
        },
        b, 1e-11);
    CHECK(mean_hit(sf, rate, b, kInf) ==
          doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("strong Markov additivity of the mean") {
    auto sf = brownian_sf();
    auto rate = RateFunction::power(2.0);
    double m_b = mean_hit(sf, rate, 1.0, kInf);
    double m_x = mean_hit(sf, rate, 4.0, kInf);
    CHECK(mean_hit(sf, rate, 1.0, 4.0) ==
          doctest::Approx(m_b - m_x).epsilon(1e-8));
}

TEST_CASE("stable mechanism: exact mean from infinity") {
    // Psi = l^1.5, R = x^3: m(b) = Gamma(theta-alpha)/Gamma(theta) b^{alpha-theta}
    auto sf = ScaleFunction::build(BranchingMechanism::stable(1.0, 1.5));
    auto rate = RateFunction::power(3.0);
    for (double b : {1.0, 2.0, 5.0}) {
        double ref = std::tgamma(1.5) / std::tgamma(3.0) * std::pow(b, -1.5);
        CHECK(mean_hit(sf, rate, b, kInf) ==
              doctest::Approx(ref).epsilon(1e-7));
    }
}

TEST_CASE("moments are consistent with the transform") {
    auto sf = brownian_sf();
    auto rate = RateFunction::power(2.0);
    auto hs = hit_moments(sf, rate, 1.0, kInf, true);
    CHECK(hs.variance == doctest::Approx(hs.second_moment - hs.mean * hs.mean)
                             .epsilon(1e-10));
    CHECK(hs.variance > 0.0);
    CHECK(hs.variance_cross_check ==
          doctest::Approx(hs.variance).epsilon(1e-6));

    // finite differences of the Laplace transform at 0
    auto table = WnTable::build(sf, Omega::reciprocal(rate));
    double h = 1e-4;
    double l1 = laplace_hit(table, 1.0, h, kInf);
    double l2 = laplace_hit(table, 1.0, 2 * h, kInf);
    double fd_mean = (1.0 - l1) / h;
    CHECK(fd_mean == doctest::Approx(hs.mean).epsilon(1e-3));
    double fd_m2 = (1.0 - 2.0 * l1 + l2) / (h * h);
    CHECK(fd_m2 == doctest::Approx(hs.second_moment).epsilon(1e-2));
}

TEST_CASE("inverse of the mean") {
    auto sf = brownian_sf();
    auto rate = RateFunction::power(2.0);
    double t = 0.3;
    double b = m_inverse(sf, rate, t);
    CHECK(mean_hit(sf, rate, b, kInf) == doctest::Approx(t).epsilon(1e-8));
}

TEST_CASE("occupation transform: indicator weight bounds") {
    BranchingMechanism m(1.0, 1.0,
                         LevyMeasureSpec::compound_poisson_exp(1.0, 0.5));
    auto sf = ScaleFunction::build(m);
    const double x = 3.0, b = 1.0;
    double prev = 1.0;
    for (double q : {0.05, 0.1, 0.2, 0.4}) {
        double v = occupation_laplace(sf, Omega::indicator(q, 5.0), b, x);
        CHECK(v > 0.0);
        CHECK(v < prev);  // heavier weight, smaller transform
        prev = v;
        // dominated by the constant-weight lower bound e^{-Phi(q)(x-b)}
        double phi_q = find_root_increasing(
            [&](double l) { return m.psi(l) - q; }, 0.1, 1.0);
        CHECK(v > std::exp(-phi_q * (x - b)) - 1e-12);
    }
}

TEST_CASE("occupation transform matches the passage-time transform") {
    // omega = lambda / R turns the weighted clock into lambda * T_b
    auto sf = brownian_sf();
    auto rate = RateFunction::power(2.0);
    const double lam = 1.0, b = 1.0, x = 5.0;
    double via_omega =
        occupation_laplace(sf, Omega::reciprocal(rate, lam), b, x);
    auto table = WnTable::build(sf, Omega::reciprocal(rate));
    CHECK(via_omega ==
          doctest::Approx(laplace_hit(table, b, lam, x)).epsilon(1e-7));
}

TEST_CASE("asymptotic regimes of the mean") {
    // critical stable: exact power law
    auto a = asymptotic_mean(BranchingMechanism::stable(1.0, 1.5),
                             RateFunction::power(3.0), 2.0);
    CHECK(a.regime == AsymptoticMean::Regime::CriticalStable);
    CHECK(a.value == doctest::Approx(std::tgamma(1.5) / std::tgamma(3.0) *
                                     std::pow(2.0, -1.5))
                         .epsilon(1e-10));

    // subcritical power rate: m(b) ~ phi(b)
    auto s = asymptotic_mean(BranchingMechanism(1.0, 2.0),
                             RateFunction::power(2.0), 50.0);
    CHECK(s.regime == AsymptoticMean::Regime::SubcriticalPhi);
    auto sf = brownian_sf();
    CHECK(s.value == doctest::Approx(mean_hit(sf, RateFunction::power(2.0),
                                              50.0, kInf))
                         .epsilon(0.05));
}
