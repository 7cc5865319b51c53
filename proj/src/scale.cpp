#include "nlcsbp/scale.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "nlcsbp/errors.hpp"
#include "nlcsbp/laplace_invert.hpp"

namespace nlcsbp {

namespace {

LaplaceTransform reciprocal_psi(const BranchingMechanism& mech) {
    return [mech](std::complex<double> s) { return 1.0 / mech.psi(s); };
}

}  // namespace

ScaleFunction ScaleFunction::build(const BranchingMechanism& mech,
                                   Options opts) {
    if (mech.gamma() < 0.0)
        throw DomainError("scale function requires gamma >= 0");

    ScaleFunction sf(mech);
    sf.tol_ = opts.tol;
    sf.talbot_nodes_ = opts.talbot_nodes;
    sf.w_inf_ = mech.gamma() > 0.0 ? 1.0 / mech.gamma() : kInf;

    if (opts.force) {
        sf.method_ = *opts.force;
    } else if (auto sc = mech.stable_shortcut()) {
        sf.method_ = Method::Stable;
    } else if (mech.measure().family == LevyMeasureSpec::Family::None) {
        sf.method_ = mech.sigma2() > 0.0 ? Method::BrownianDrift
                                         : Method::PureDrift;
    } else {
        sf.method_ = Method::NumericInversion;
    }

    switch (sf.method_) {
        case Method::PureDrift:
            if (mech.gamma() <= 0.0 || mech.sigma2() != 0.0 ||
                mech.measure().family != LevyMeasureSpec::Family::None)
                throw DomainError("pure-drift scale form needs Psi = gamma*lambda, gamma > 0");
            return sf;
        case Method::BrownianDrift:
            if (mech.sigma2() <= 0.0 ||
                mech.measure().family != LevyMeasureSpec::Family::None)
                throw DomainError("Brownian scale form needs sigma2 > 0 and no jumps");
            return sf;
        case Method::Stable: {
            auto sc = mech.stable_shortcut();
            if (!sc) throw DomainError("stable scale form needs Psi = c*lambda^alpha");
            sf.stable_c_ = sc->c;
            sf.stable_alpha_ = sc->alpha;
            return sf;
        }
        case Method::NumericInversion:
            break;
    }

    // Pick the inversion scheme: cross-check Talbot against Euler summation
    // at a few abscissae, fall back to Euler if Talbot misbehaves.
    auto F = reciprocal_psi(mech);
    const double probes[] = {0.1, 0.7, 2.0, 13.0, 90.0};
    double worst = 0.0;
    for (double x : probes) {
        double wt = talbot_invert(F, x, sf.talbot_nodes_);
        double we = euler_invert(F, x);
        double scale = std::max({std::abs(wt), std::abs(we), 1e-300});
        worst = std::max(worst, std::abs(wt - we) / scale);
    }
    if (worst > 1e-5) {
        // Talbot and Euler disagree; trust neither blindly. Euler handles
        // mildly non-smooth transforms better, keep it if self-consistent.
        double r0 = euler_invert(F, 1.0, 40, 14);
        double r1 = euler_invert(F, 1.0, 60, 14);
        if (std::abs(r0 - r1) / std::max(std::abs(r1), 1e-300) < 10.0 * sf.tol_)
            sf.use_euler_ = true;
        else
            throw InversionError("Laplace inversion schemes disagree");
    }

    // Geometric cache with midpoint verification.
    sf.cache_lo_ = opts.cache_x_min;
    sf.cache_hi_ = opts.cache_x_max;
    auto grid = geometric_grid(sf.cache_lo_, sf.cache_hi_, opts.cache_points);
    std::vector<double> w(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) w[i] = sf.invert_at(grid[i]);
    sf.cache_ = PositiveInterpolant(grid, w);

    double interp_err = 0.0;
    for (std::size_t i = 8; i + 1 < grid.size(); i += 64) {
        double xm = std::sqrt(grid[i] * grid[i + 1]);
        double exact = sf.invert_at(xm);
        if (exact <= 0.0) continue;
        interp_err = std::max(interp_err,
                              std::abs(sf.cache_(xm) - exact) / exact);
    }
    sf.cache_trusted_ = interp_err < std::max(sf.tol_, 1e-8);

    // Power-law extension of the lower tail for x below the grid.
    if (w[0] > 0.0 && w[2] > 0.0)
        sf.low_tail_exponent_ = std::log(w[2] / w[0]) / std::log(grid[2] / grid[0]);

    return sf;
}

double ScaleFunction::closed_form(double x) const {
    const double g = mech_.gamma();
    switch (method_) {
        case Method::PureDrift:
            return 1.0 / g;
        case Method::BrownianDrift: {
            const double s2 = mech_.sigma2();
            if (g == 0.0) return 2.0 * x / s2;
            return -std::expm1(-2.0 * g * x / s2) / g;
        }
        case Method::Stable:
            return std::pow(x, stable_alpha_ - 1.0) /
                   (stable_c_ * std::tgamma(stable_alpha_));
        case Method::NumericInversion:
            break;
    }
    return 0.0;
}

double ScaleFunction::invert_at(double x) const {
    auto F = reciprocal_psi(mech_);
    return use_euler_ ? euler_invert(F, x)
                      : talbot_invert(F, x, talbot_nodes_);
}

double ScaleFunction::operator()(double x) const {
    if (x < 0.0) return 0.0;
    if (method_ != Method::NumericInversion) return closed_form(x);
    if (x == 0.0) return 0.0;
    if (cache_trusted_ && x >= cache_lo_ && x <= cache_hi_) return cache_(x);
    if (x < cache_lo_ && !cache_.empty())
        return cache_(cache_lo_) * std::pow(x / cache_lo_, low_tail_exponent_);
    return invert_at(x);
}

double ScaleFunction::delta(double z) const {
    if (mech_.gamma() <= 0.0)
        throw DeltaUndefined("Delta(z) = 1/gamma - W(z) needs gamma > 0");
    double d = w_inf_ - (*this)(z);
    return std::max(d, 0.0);
}

ScaleValidation ScaleFunction::validate(const std::vector<double>& q_grid,
                                        const std::vector<double>& x_grid) const {
    ScaleValidation rep;
    for (double q : q_grid) {
        if (q <= 0.0) throw DomainError("validation grid requires q > 0");
        auto f = [this, q](double y) { return std::exp(-q * y) * (*this)(y); };
        double L = integrate_upper(f, 0.0, 1e-11);
        double psi_q = mech_.psi(q);
        rep.max_laplace_residual =
            std::max(rep.max_laplace_residual, std::abs(psi_q * L - 1.0));
    }
    if (rep.max_laplace_residual > 10.0 * tol_ &&
        method_ == Method::NumericInversion)
        throw InversionError("inverted scale function fails the Laplace residual check");

    double prev = -kInf;
    double c1 = kInf, c2 = 0.0;
    for (double x : x_grid) {
        double w = (*this)(x);
        if (w < prev * (1.0 - 1e-12)) ++rep.monotonicity_violations;
        prev = std::max(prev, w);
        double ratio = w * x * mech_.psi(1.0 / x);
        if (std::isfinite(ratio) && ratio > 0.0) {
            c1 = std::min(c1, ratio);
            c2 = std::max(c2, ratio);
        }
    }
    rep.c1 = c1;
    rep.c2 = c2;
    rep.ratio_finite = std::isfinite(c1) && std::isfinite(c2) && c1 > 0.0;
    return rep;
}

}  // namespace nlcsbp
