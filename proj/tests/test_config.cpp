#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "nlcsbp/config.hpp"

using namespace nlcsbp;

TEST_CASE("defaults fill in") {
    auto cfg = parse_config("");
    CHECK(cfg.mech.family == "linear");
    CHECK(cfg.rate.family == "power");
    CHECK(cfg.rate.theta == 2.0);
    CHECK(cfg.run.b == 1.0);
    CHECK(std::isinf(cfg.run.x));
    CHECK(cfg.run.seed == 1);
    CHECK(cfg.run.lambdas == std::vector<double>{0.5, 1.0, 2.0});
}

TEST_CASE("sections and values parse") {
    auto cfg = parse_config(
        "# comment\n"
        "[mechanism]\n"
        "family = compound_poisson_exp\n"
        "gamma = 1.5\n"
        "sigma2 = 0.25\n"
        "rate = 2\n"
        "mean_jump = 0.5\n"
        "\n"
        "[rate]\n"
        "family = power\n"
        "theta = 3\n"
        "k = 2\n"
        "; another comment\n"
        "[run]\n"
        "b = 2.5\n"
        "x = inf\n"
        "lambdas = 0.1, 0.7\n"
        "seed = 99\n");
    CHECK(cfg.mech.gamma == 1.5);
    CHECK(cfg.mech.rate == 2.0);
    CHECK(cfg.run.b == 2.5);
    CHECK(std::isinf(cfg.run.x));
    CHECK(cfg.run.lambdas == std::vector<double>{0.1, 0.7});
    CHECK(cfg.run.seed == 99);

    auto mech = cfg.mechanism();
    CHECK(mech.gamma() == 1.5);
    CHECK(mech.measure().family ==
          LevyMeasureSpec::Family::CompoundPoissonExp);
    auto rate = cfg.rate_function();
    CHECK(rate(2.0) == doctest::Approx(16.0));
}

TEST_CASE("every mechanism family constructs") {
    CHECK(parse_config("[mechanism]\nfamily = linear\ngamma = 1\nsigma2 = 2\n")
              .mechanism()
              .psi(1.0) == doctest::Approx(2.0));
    CHECK(parse_config("[mechanism]\nfamily = stable\nc = 1\nalpha = 1.5\n")
              .mechanism()
              .psi(1.0) == doctest::Approx(1.0));
    auto st = parse_config(
        "[mechanism]\nfamily = stable_tail\nalpha = 1.5\nc_pi = 1\n");
    CHECK(st.mechanism().measure().family ==
          LevyMeasureSpec::Family::StableTail);
    auto ts = parse_config(
        "[mechanism]\nfamily = tempered_stable\nalpha = 1.5\nc_pi = 1\n"
        "beta = 2\n");
    CHECK(ts.mechanism().measure().beta == 2.0);
}

TEST_CASE("every rate family constructs") {
    CHECK(parse_config("[rate]\nfamily = power_log\ntheta = 1\np = 2\n")
              .rate_function()(1.0) > 0.0);
    auto ex = parse_config(
        "[rate]\nfamily = exp_rate\ntheta2 = 1\ng_theta = 0\ng_k = 1\n");
    CHECK(ex.rate_function()(3.0) == doctest::Approx(std::exp(3.0)));
    auto osc = parse_config(
        "[rate]\nfamily = oscillating_valley\ntheta = 3\nv = 0.6\nx0 = 10\n");
    CHECK(osc.rate_function()(20.0) > 0.0);
    auto tab = parse_config(
        "[rate]\nfamily = tabulated\ngrid = 1, 5, 10, 50, 100\n"
        "values = 1, 25, 100, 2500, 10000\ntail_exponent = 2\n");
    CHECK(tab.rate_function()(10.0) == doctest::Approx(100.0).epsilon(1e-9));
}

TEST_CASE("echo round-trips") {
    auto cfg = parse_config(
        "[mechanism]\nfamily = stable\nalpha = 1.5\n"
        "[run]\nseed = 7\nlambdas = 0.25, 0.5\nx = inf\n");
    std::string echo1 = cfg.echo();
    auto cfg2 = parse_config(echo1);
    CHECK(cfg2.echo() == echo1);
    CHECK(cfg2.run.seed == 7);
    CHECK(std::isinf(cfg2.run.x));
}

TEST_CASE("parse errors carry line numbers") {
    CHECK_THROWS_WITH_AS(parse_config("[mechanism]\nbogus = 1\n"),
                         "line 2: unknown field 'bogus' in [mechanism]",
                         ParseError);
    CHECK_THROWS_AS(parse_config("[nope]\n"), ParseError);
    CHECK_THROWS_AS(parse_config("[mechanism]\ngamma\n"), ParseError);
    CHECK_THROWS_AS(parse_config("[mechanism]\ngamma = abc\n"), ParseError);
    CHECK_THROWS_AS(parse_config("gamma = 1\n"), ParseError);  // no section
}

TEST_CASE("semantic validation") {
    CHECK_THROWS_AS(parse_config("[mechanism]\nsigma2 = -1\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("[rate]\ntheta = -2\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("[run]\ndt = 0\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("[run]\nbarrier_refine = 0\n"),
                    ValidationError);
}

TEST_CASE("subcommand gates") {
    auto sup = parse_config("[mechanism]\ngamma = -1\nsigma2 = 1\n");
    CHECK_THROWS_AS(validate_for(sup, "speed"), ValidationError);
    CHECK_THROWS_AS(validate_for(sup, "scale"), ValidationError);
    CHECK_NOTHROW(validate_for(sup, "classify"));
    auto ok = parse_config("[mechanism]\ngamma = 1\nsigma2 = 1\n");
    CHECK_NOTHROW(validate_for(ok, "speed"));
}
