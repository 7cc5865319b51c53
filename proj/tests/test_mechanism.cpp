#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "nlcsbp/mechanism.hpp"

using namespace nlcsbp;

namespace {

// jump integral int_0^inf (e^{-l z} - 1 + l z) pi(dz) by direct quadrature,
// an oracle independent of the closed forms inside psi()
double jump_integral(const LevyMeasureSpec& m, double l) {
    auto density = [&](double z) {
        using F = LevyMeasureSpec::Family;
        switch (m.family) {
            case F::StableTail:
                return m.c_pi * std::pow(z, -1.0 - m.alpha);
            case F::CompoundPoissonExp:
                return m.rate / m.mean_jump * std::exp(-z / m.mean_jump);
            case F::TemperedStable:
                return m.c_pi * std::pow(z, -1.0 - m.alpha) *
                       std::exp(-m.beta * z);
            default:
                return 0.0;
        }
    };
    auto f = [&](double z) {
        return std::expm1(-l * z) + l * z;  // e^{-lz} - 1 + lz, stable near 0
    };
    // geometric segmentation keeps the adaptive rule well within its depth
    // budget on the twelve decades below 1
    double small = 0.0;
    // analytic completion below the cutoff, where the integrand is
    // l^2 z^2 / 2 times the density to leading order
    if (m.family == LevyMeasureSpec::Family::StableTail ||
        m.family == LevyMeasureSpec::Family::TemperedStable)
        small += l * l * m.c_pi / 2.0 * std::pow(1e-12, 2.0 - m.alpha) /
                 (2.0 - m.alpha);
    double lo = 1e-12;
    while (lo < 1.0) {
        double hi = std::min(1.0, lo * 100.0);
        small += integrate([&](double z) { return f(z) * density(z); }, lo,
                           hi, 1e-12);
        lo = hi;
    }
    double big = integrate_upper(
        [&](double z) { return f(z) * density(z); }, 1.0, 1e-11);
    return small + big;
}

}  // namespace

TEST_CASE("Brownian mechanism: sigma2 stores sigma squared") {
    BranchingMechanism m(1.0, 2.0);
    CHECK(m.psi(1.0) == doctest::Approx(2.0).epsilon(1e-15));   // l + l^2
    CHECK(m.psi(3.0) == doctest::Approx(12.0).epsilon(1e-15));  // 3 + 9
}

TEST_CASE("stable shortcut") {
    auto m = BranchingMechanism::stable(2.0, 1.5);
    CHECK(m.psi(4.0) == doctest::Approx(2.0 * std::pow(4.0, 1.5)));
    CHECK(m.classify() == MechanismClass::Critical);
    CHECK(m.small_lambda_index() == 1.5);
    CHECK(m.small_lambda_coefficient() == 2.0);

    // alpha = 2 is Brownian: c l^2 = (sigma2/2) l^2 with sigma2 = 2c
    auto b = BranchingMechanism::stable(3.0, 2.0);
    CHECK(b.sigma2() == 6.0);
    CHECK(b.psi(2.0) == doctest::Approx(12.0));
    CHECK_THROWS_AS(BranchingMechanism::stable(1.0, 0.9), ValidationError);
    CHECK_THROWS_AS(BranchingMechanism::stable(-1.0, 1.5), ValidationError);
}

TEST_CASE("closed-form jump terms match quadrature") {
    std::vector<LevyMeasureSpec> specs = {
        LevyMeasureSpec::stable_tail(1.5, 0.7),
        LevyMeasureSpec::compound_poisson_exp(2.0, 0.5),
        LevyMeasureSpec::tempered_stable(1.3, 0.4, 2.0),
    };
    for (const auto& s : specs) {
        BranchingMechanism m(0.0, 0.0, s);
        for (double l : {0.3, 1.0, 4.0}) {
            CHECK(m.psi(l) ==
                  doctest::Approx(jump_integral(s, l)).epsilon(1e-8));
        }
    }
}

TEST_CASE("psi'(0+) equals gamma") {
    BranchingMechanism m(0.7, 1.3,
                         LevyMeasureSpec::compound_poisson_exp(1.0, 0.5));
    const double h = 1e-6;
    CHECK((m.psi(h) - m.psi(-h)) / (2 * h) ==
          doctest::Approx(0.7).epsilon(1e-6));
}

TEST_CASE("psi is convex") {
    BranchingMechanism m(1.0, 0.5, LevyMeasureSpec::stable_tail(1.7, 0.3));
    for (double a : {0.1, 1.0, 5.0}) {
        double b = 3.0 * a;
        CHECK(m.psi(0.5 * (a + b)) <= 0.5 * (m.psi(a) + m.psi(b)) + 1e-12);
    }
}

TEST_CASE("classification by gamma sign") {
    CHECK(BranchingMechanism(-0.1, 1.0).classify() ==
          MechanismClass::Supercritical);
    CHECK(BranchingMechanism(0.0, 1.0).classify() == MechanismClass::Critical);
    CHECK(BranchingMechanism(0.1, 1.0).classify() ==
          MechanismClass::Subcritical);
}

TEST_CASE("small-lambda behaviour") {
    // critical: Psi(l) ~ c_eff l^idx
    BranchingMechanism st(0.0, 0.0, LevyMeasureSpec::stable_tail(1.5, 1.0));
    CHECK(st.small_lambda_index() == 1.5);
    double c_eff = st.small_lambda_coefficient();
    double l = 1e-5;
    CHECK(st.psi(l) / (c_eff * std::pow(l, 1.5)) ==
          doctest::Approx(1.0).epsilon(1e-6));

    BranchingMechanism cpe(0.0, 1.0,
                           LevyMeasureSpec::compound_poisson_exp(2.0, 0.5));
    CHECK(cpe.small_lambda_index() == 2.0);
    CHECK(cpe.psi(1e-6) / (cpe.small_lambda_coefficient() * 1e-12) ==
          doctest::Approx(1.0).epsilon(1e-5));

    BranchingMechanism sub(2.0, 1.0);
    CHECK(sub.small_lambda_index() == 1.0);
    CHECK(sub.small_lambda_coefficient() == 2.0);
}

TEST_CASE("complex evaluation agrees on the real axis") {
    BranchingMechanism m(1.0, 2.0, LevyMeasureSpec::tempered_stable(1.5, 0.3, 1.0));
    std::complex<double> z(2.0, 0.0);
    CHECK(m.psi(z).real() == doctest::Approx(m.psi(2.0)).epsilon(1e-14));
    CHECK(m.psi(z).imag() == doctest::Approx(0.0));
}

TEST_CASE("analytic extension domain edge") {
    CHECK(BranchingMechanism(1.0, 1.0).domain_lower() == -kInf);
    CHECK(BranchingMechanism(
              1.0, 0.0, LevyMeasureSpec::compound_poisson_exp(1.0, 0.5))
              .domain_lower() == -2.0);
    CHECK(BranchingMechanism(0.0, 0.0, LevyMeasureSpec::stable_tail(1.5, 1.0))
              .domain_lower() == 0.0);
    CHECK(BranchingMechanism(
              0.0, 0.0, LevyMeasureSpec::tempered_stable(1.5, 1.0, 0.7))
              .domain_lower() == -0.7);
}

TEST_CASE("measure parameter validation") {
    CHECK_THROWS_AS(BranchingMechanism(0.0, -1.0), ValidationError);
    CHECK_THROWS_AS(LevyMeasureSpec::stable_tail(2.5, 1.0), ValidationError);
    CHECK_THROWS_AS(LevyMeasureSpec::compound_poisson_exp(0.0, 1.0),
                    ValidationError);
    CHECK_THROWS_AS(LevyMeasureSpec::tempered_stable(1.5, 1.0, 0.0),
                    ValidationError);
}
