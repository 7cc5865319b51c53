#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "nlcsbp/simulate.hpp"

using namespace nlcsbp;

TEST_CASE("counter rng determinism and independence") {
    CounterRng a(7, 3), b(7, 3), c(7, 4);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    bool any_diff = false;
    CounterRng a2(7, 3);
    for (int i = 0; i < 100; ++i)
        if (a2.next_u64() != c.next_u64()) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("uniform and normal moments") {
    CounterRng r(42, 0);
    const int n = 200000;
    double su = 0, su2 = 0, sn = 0, sn2 = 0;
    for (int i = 0; i < n; ++i) {
        double u = r.uniform();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        su += u;
        su2 += u * u;
        double z = r.normal();
        sn += z;
        sn2 += z * z;
    }
    CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(su2 / n - 0.25 == doctest::Approx(1.0 / 12).epsilon(0.03));
    CHECK(sn / n == doctest::Approx(0.0).scale(1.0).epsilon(0.01));
    CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("poisson mean") {
    CounterRng r(1, 0);
    for (double mean : {0.5, 5.0, 200.0}) {
        double s = 0;
        const int n = 50000;
        for (int i = 0; i < n; ++i) s += static_cast<double>(r.poisson(mean));
        CHECK(s / n == doctest::Approx(mean).epsilon(0.05));
    }
}

namespace {

// one-unit increment transform check: Ehat[e^{-l (Z_1 - x0)}] vs e^{Psi(l)}
void laplace_identity(const BranchingMechanism& mech, double l,
                      std::size_t reps, double dt) {
    PathConfig cfg;
    cfg.dt = dt;
    cfg.horizon = 1.0;
    cfg.adaptive = false;
    double s = 0, s2 = 0;
    for (std::size_t i = 0; i < reps; ++i) {
        cfg.replica = i;
        auto p = sample_levy_path(mech, 100.0, cfg);
        double v = std::exp(-l * (p.values.back() - 100.0));
        s += v;
        s2 += v * v;
    }
    double mean = s / static_cast<double>(reps);
    double se = std::sqrt((s2 / static_cast<double>(reps) - mean * mean) /
                          static_cast<double>(reps));
    double target = std::exp(mech.psi(l));
    CHECK(std::abs(mean - target) <= 3.5 * se + 1e-12);
}

}  // namespace

TEST_CASE("levy increments reproduce the mechanism transform") {
    laplace_identity(BranchingMechanism(1.0, 1.0), 0.5, 4000, 1e-2);
    laplace_identity(
        BranchingMechanism(1.0, 1.0,
                           LevyMeasureSpec::compound_poisson_exp(1.0, 0.5)),
        0.5, 4000, 1e-2);
    laplace_identity(BranchingMechanism::stable(1.0, 1.5), 0.5, 4000, 1e-2);
    laplace_identity(
        BranchingMechanism(0.0, 0.0, LevyMeasureSpec::stable_tail(1.5, 1.0)),
        0.5, 3000, 1e-2);
    laplace_identity(
        BranchingMechanism(0.5, 0.0,
                           LevyMeasureSpec::tempered_stable(1.5, 1.0, 1.0)),
        0.5, 3000, 1e-2);
}

TEST_CASE("unit rate leaves the clock unchanged") {
    PathConfig cfg;
    cfg.horizon = 2.0;
    cfg.adaptive = false;
    auto levy = sample_levy_path(BranchingMechanism(1.0, 1.0), 5.0, cfg);
    auto path = time_change_path(levy, RateFunction::power(0.0));
    for (std::size_t i = 0; i < levy.times.size(); i += 100)
        CHECK(path.eta[i] == doctest::Approx(levy.times[i]).epsilon(1e-12));
}

TEST_CASE("time change accelerates by the rate") {
    // R = 4: eta = t/4
    PathConfig cfg;
    cfg.horizon = 2.0;
    auto levy = sample_levy_path(BranchingMechanism(1.0, 1.0), 20.0, cfg);
    auto path = time_change_path(levy, RateFunction::power(0.0, 4.0));
    for (std::size_t i = 0; i < levy.times.size(); i += 100)
        CHECK(path.eta[i] == doctest::Approx(levy.times[i] / 4.0).epsilon(1e-12));
}

TEST_CASE("running infimum is the pathwise minimum") {
    PathConfig cfg;
    cfg.horizon = 1.0;
    auto levy = sample_levy_path(
        BranchingMechanism(1.0, 1.0,
                           LevyMeasureSpec::compound_poisson_exp(2.0, 1.0)),
        3.0, cfg);
    auto path = time_change_path(levy, RateFunction::power(1.0));
    // the infimum is tracked on the finer underlying grid, so it sits at or
    // below the cummin of the uniform-grid samples and never increases
    double m = path.x.empty() ? 0.0 : path.x.front();
    double prev = m;
    for (std::size_t i = 0; i < path.x.size(); ++i) {
        m = std::min(m, path.x[i]);
        CHECK(path.running_inf[i] <= m + 1e-12);
        CHECK(path.running_inf[i] <= prev + 1e-12);
        CHECK(path.running_inf[i] >= m - 0.05);  // refinement gap is small
        prev = path.running_inf[i];
    }
}

TEST_CASE("passage-time estimates match quadrature") {
    BranchingMechanism mech(1.0, 1.0);
    auto rate = RateFunction::power(2.0);
    auto sf = ScaleFunction::build(mech);
    const double b = 1.0, x0 = 100.0;
    double target = mean_hit(sf, rate, b, x0);
    double lap_target;
    {
        auto table = WnTable::build(sf, Omega::reciprocal(rate));
        lap_target = laplace_hit(table, b, 1.0, x0);
    }
    PathConfig cfg;
    cfg.dt = 1e-3;
    cfg.seed = 2;
    cfg.laplace_lambdas = {1.0};
    auto mc = sample_hit(mech, rate, x0, b, 3000, cfg);
    CHECK(mc.horizon_exceeded == 0);
    CHECK(std::abs(mc.mean - target) <= 3.5 * mc.std_error);
    CHECK(std::abs(mc.laplace[0].estimate - lap_target) <=
          3.5 * mc.laplace[0].se);
    CHECK(mc.richardson_se > 0.0);

    // determinism: identical settings give the identical summary
    auto mc2 = sample_hit(mech, rate, x0, b, 3000, cfg);
    CHECK(mc.mean == mc2.mean);
    CHECK(mc.variance == mc2.variance);
}

TEST_CASE("ladder stabilizes at an entrance boundary") {
    BranchingMechanism mech(1.0, 1.0);
    auto rate = RateFunction::power(2.0);
    PathConfig cfg;
    cfg.seed = 2;
    auto lad = from_infinity_ladder(mech, rate, 1.0, {50.0, 200.0, 800.0},
                                    2000, cfg);
    CHECK(lad.rungs.size() == 3);
    CHECK(lad.converged);
    auto sf = ScaleFunction::build(mech);
    double target = mean_hit(sf, rate, 1.0, kInf);
    CHECK(std::abs(lad.surrogate_mean - target) <=
          4.0 * lad.rungs.back().std_error + 0.01 * target);
}

TEST_CASE("occupation functional against the series") {
    BranchingMechanism mech(1.0, 1.0,
                            LevyMeasureSpec::compound_poisson_exp(1.0, 0.5));
    auto sf = ScaleFunction::build(mech);
    auto om = Omega::indicator(0.2, 5.0);
    double target = occupation_laplace(sf, om, 1.0, 3.0);
    PathConfig cfg;
    cfg.seed = 3;
    auto mc = occupation_mc(mech, om, 3.0, 1.0, 4000, cfg);
    CHECK(std::abs(mc.mean - target) <= 3.5 * mc.std_error);
}

TEST_CASE("config validation") {
    PathConfig cfg;
    cfg.dt = 0.0;
    CHECK_THROWS_AS(sample_levy_path(BranchingMechanism(1.0, 1.0), 1.0, cfg),
                    ConfigError);
    PathConfig cfg2;
    cfg2.horizon = -1.0;
    CHECK_THROWS_AS(sample_levy_path(BranchingMechanism(1.0, 1.0), 1.0, cfg2),
                    ConfigError);
}

TEST_CASE("speed diagnostics in the subcritical flow window") {
    BranchingMechanism mech(1.0, 1.0);
    auto rate = RateFunction::power(2.0);
    auto sf = ScaleFunction::build(mech);
    PathConfig cfg;
    cfg.seed = 2;
    auto rep = speed_report(mech, rate, sf, 1000.0, 0.5, 60, cfg, 1e-2, 1e-1, 5);
    CHECK_FALSE(rep.critical);
    CHECK(rep.truncated_paths == 0);
    for (std::size_t j = 0; j < rep.t_grid.size(); ++j) {
        // target is the speed function phi^{-1}(t), here 1/t
        CHECK(rep.target[j] ==
              doctest::Approx(1.0 / rep.t_grid[j]).epsilon(1e-6));
        CHECK(rep.median_ratio[j] > 0.7);
        CHECK(rep.median_ratio[j] < 1.3);
        CHECK(rep.q05_ratio[j] <= rep.median_ratio[j]);
        CHECK(rep.median_ratio[j] <= rep.q95_ratio[j]);
        CHECK(rep.median_inf_over_x[j] <= 1.0 + 1e-12);
    }
    CHECK(rep.frac_inf_close > 0.5);
}
