#include "nlcsbp/hitting.hpp"

#include <algorithm>
#include <cmath>

#include "nlcsbp/errors.hpp"

namespace nlcsbp {

Omega Omega::reciprocal(RateFunction r, double scale) {
    if (scale < 0.0) throw DomainError("omega scale must be nonnegative");
    Omega o;
    o.kind = Kind::ReciprocalRate;
    o.rate = std::move(r);
    o.scale = scale;
    return o;
}

Omega Omega::indicator(double q, double a) {
    if (q < 0.0 || a <= 0.0) throw DomainError("indicator omega needs q >= 0, a > 0");
    Omega o;
    o.kind = Kind::Indicator;
    o.q = q;
    o.a = a;
    return o;
}

Omega Omega::table(std::vector<double> grid, std::vector<double> vals) {
    if (grid.size() < 4 || grid.size() != vals.size())
        throw DomainError("tabulated omega needs matching grids of size >= 4");
    Omega o;
    o.kind = Kind::Table;
    o.interp = PositiveInterpolant(grid, vals);
    o.grid = std::move(grid);
    o.vals = std::move(vals);
    return o;
}

double Omega::operator()(double z) const {
    switch (kind) {
        case Kind::ReciprocalRate:
            return scale * std::exp(-rate.log_eval(z));
        case Kind::Indicator:
            return z <= a ? q : 0.0;
        case Kind::Table:
            return z > grid.back() ? 0.0 : interp(z);
    }
    return 0.0;
}

bool Omega::tail_integrable() const {
    return kind != Kind::ReciprocalRate || rate.tail_integrable();
}

namespace {

bool is_exp_type(const Omega& o) {
    return o.kind == Omega::Kind::ReciprocalRate &&
           o.rate.family == RateFunction::Family::ExpRate;
}

double omega_support_end(const Omega& o) {
    if (o.kind == Omega::Kind::Indicator) return o.a;
    if (o.kind == Omega::Kind::Table) return o.grid.back();
    return kInf;
}

}  // namespace

WnTable WnTable::build(const ScaleFunction& sf, Omega omega, Options opts) {
    if (!omega.tail_integrable())
        throw SummabilityError("omega tail is not integrable; W_1 diverges");
    WnTable t;
    t.sf_ = &sf;
    t.omega_ = std::move(omega);
    t.tol_ = opts.tol;

    if (is_exp_type(t.omega_)) {
        // Exponentially decaying levels: uniform grid, spline of log W_n
        // against x (exact on the pure-exponential closed forms).
        t.log_x_ = false;
        double t2 = t.omega_.rate.theta2;
        double hi = opts.x_max > 0.0
                        ? opts.x_max
                        : std::clamp(600.0 / ((opts.n_max + 2.0) * t2),
                                     30.0 / t2, 200.0 / t2);
        t.grid_.resize(opts.points);
        for (std::size_t i = 0; i < opts.points; ++i)
            t.grid_[i] = hi * double(i) / double(opts.points - 1);
    } else {
        t.log_x_ = true;
        double hi = opts.x_max > 0.0 ? opts.x_max : 500.0;
        double support = omega_support_end(t.omega_);
        if (std::isfinite(support)) hi = support;
        t.grid_ = geometric_grid(opts.x_min, hi, opts.points);
    }

    t.levels_.push_back(std::vector<double>(t.grid_.size(), 1.0));
    t.interps_.emplace_back();  // W_0 never interpolated
    t.extend(opts.n_max);
    return t;
}

std::vector<double> WnTable::compute_level(const std::vector<double>& prev_vals,
                                           bool prev_is_one) const {
    const ScaleFunction& W = *sf_;
    PositiveInterpolant prev;
    if (!prev_is_one) prev = PositiveInterpolant(grid_, prev_vals, log_x_);

    std::vector<double> out(grid_.size());
    const double support = omega_support_end(omega_);
    // A cached numeric W is piecewise (C^1 at its cache nodes), which the
    // adaptive rule cannot push to full precision; cap tolerance and depth
    // there instead of chasing an unreachable estimate.
    const bool smooth = W.method() != ScaleFunction::Method::NumericInversion;
    const double qtol = smooth ? 1e-11 : 3e-7;
    const unsigned depth = smooth ? 12 : 6;
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        const double x = grid_[i];
        auto f = [&](double z) {
            double p = prev_is_one ? 1.0 : prev(z);
            return W(z - x) * omega_(z) * p;
        };
        double val = 0.0;
        if (std::isfinite(support)) {
            if (x < support) val = integrate(f, x, support, qtol, depth);
        } else {
            val = integrate_upper(f, x, qtol, std::max(1.0, 0.5 * x), depth);
        }
        out[i] = std::max(val, 0.0);
    }
    return out;
}

void WnTable::extend(int n) {
    while (max_order() < n) {
        const auto& prev = levels_.back();
        bool prev_is_one = levels_.size() == 1;
        levels_.push_back(compute_level(prev, prev_is_one));
        interps_.emplace_back(grid_, levels_.back(), log_x_);
    }
}

double WnTable::wn(int n, double x) const {
    if (n < 0) throw DomainError("negative recursion order");
    if (n == 0) return 1.0;
    if (n > max_order()) throw DomainError("recursion level not built; extend first");
    if (std::isinf(x)) return 0.0;
    return interps_[n](std::max(x, grid_.front()));
}

double mean_hit(const ScaleFunction& sf, const RateFunction& rate, double b,
                double x) {
    if (b <= 0.0) throw DomainError("barrier must be positive");
    if (x < b) throw DomainError("mean_hit needs x >= b");
    if (x == b) return 0.0;

    auto inv_r = [&](double y) { return std::exp(-rate.log_eval(y)); };
    try {
        if (std::isinf(x)) {
            auto verdict = entrance_test(sf.mechanism(), rate);
            if (!verdict.is_entrance)
                throw NotEntrance("infinity is not an entrance boundary here");
            return integrate_upper(
                [&](double y) { return sf(y - b) * inv_r(y); }, b, 1e-11,
                std::max(1.0, b));
        }
        return integrate_upper(
            [&](double y) { return (sf(y - b) - sf(y - x)) * inv_r(y); }, b,
            1e-11, std::max(1.0, b));
    } catch (const NotIntegrable&) {
        throw Divergent("E_x[T_b] integral diverges");
    }
}

WnTable wn_table(const ScaleFunction& sf, Omega omega, int n_max,
                 WnTable::Options opts) {
    opts.n_max = n_max;
    return WnTable::build(sf, std::move(omega), opts);
}

double laplace_hit(WnTable& table, double b, double lambda, double x) {
    if (lambda < 0.0) throw DomainError("laplace argument must be nonnegative");
    if (x < b) throw DomainError("laplace_hit needs x >= b");
    if (lambda == 0.0) return 1.0;

    const double tol = table.tol();
    const bool x_inf = std::isinf(x);
    double sum_b = 1.0, sum_x = 1.0;
    double coef = 1.0, prev_term = kInf;
    int grow_streak = 0;
    for (int n = 1; n <= 60; ++n) {
        if (n > table.max_order()) table.extend(std::min(n + 3, 60));
        coef *= lambda;
        double term_b = coef * table.wn(n, b);
        if (!x_inf) sum_x += coef * table.wn(n, x);
        sum_b += term_b;
        if (prev_term > 0.0 && term_b >= prev_term) {
            if (++grow_streak >= 3) {
                double ratio = term_b / prev_term;
                throw SeriesDiverges("Laplace series diverges at this lambda",
                                     lambda / ratio);
            }
        } else {
            grow_streak = 0;
        }
        if (n >= 3 && term_b < tol * sum_b &&
            (x_inf || coef * table.wn(n, x) < tol * sum_x))
            return x_inf ? 1.0 / sum_b : sum_x / sum_b;
        prev_term = term_b;
    }
    throw ConvergenceError("Laplace series did not settle within 60 terms");
}

namespace {

double w1_direct(const ScaleFunction& sf, const RateFunction& rate, double y) {
    auto f = [&](double z) {
        return sf(z - y) * std::exp(-rate.log_eval(z));
    };
    return integrate_upper(f, y, 1e-12, std::max(1.0, y));
}

double w2_direct(const ScaleFunction& sf, const RateFunction& rate, double y) {
    auto f = [&](double z) {
        return sf(z - y) * std::exp(-rate.log_eval(z)) *
               w1_direct(sf, rate, z);
    };
    return integrate_upper(f, y, 1e-10, std::max(1.0, y));
}

}  // namespace

HittingSummary hit_moments(const ScaleFunction& sf, const RateFunction& rate,
                           double b, double x, bool cross_check) {
    if (b <= 0.0) throw DomainError("barrier must be positive");
    if (x < b) throw DomainError("hit_moments needs x >= b");
    HittingSummary s;
    s.b = b;
    s.x = x;
    if (x == b) return s;

    const bool x_inf = std::isinf(x);
    double w1b = w1_direct(sf, rate, b);
    double w2b = w2_direct(sf, rate, b);
    double w1x = x_inf ? 0.0 : w1_direct(sf, rate, x);
    double w2x = x_inf ? 0.0 : w2_direct(sf, rate, x);

    s.mean = w1b - w1x;
    s.second_moment = 2.0 * (w2x - w2b + w1b * (w1b - w1x));
    s.variance = s.second_moment - s.mean * s.mean;
    double scale = std::max(s.second_moment, s.mean * s.mean);
    if (s.variance < -1e-8 * scale)
        throw NegativeVariance("variance came out negative; quadrature failure");
    s.variance = std::max(s.variance, 0.0);

    if (cross_check && x_inf) {
        auto inv_r = [&](double y) { return std::exp(-rate.log_eval(y)); };
        auto inner = [&](double u) {
            return integrate_upper(
                [&](double y) { return (sf(y - b) - sf(y - u)) * inv_r(y); },
                u, 1e-10, std::max(1.0, u));
        };
        s.variance_cross_check =
            2.0 * integrate_upper(
                      [&](double u) { return sf(u - b) * inv_r(u) * inner(u); },
                      b, 1e-9, std::max(1.0, b));
    }
    return s;
}

double m_inverse(const ScaleFunction& sf, const RateFunction& rate, double t) {
    if (t <= 0.0) throw DomainError("m_inverse argument must be positive");
    auto m = [&](double b) { return mean_hit(sf, rate, b, kInf); };
    // m is strictly decreasing in b.
    double lo = 1.0, hi = 1.0;
    try {
        while (m(hi) > t) {
            lo = hi;
            hi *= 4.0;
            if (hi > 1e12) throw OutOfRange("t below the range of m");
        }
        while (m(lo) < t) {
            hi = lo;
            lo /= 4.0;
            if (lo < 1e-12) throw OutOfRange("t beyond the range of m");
        }
    } catch (const NotEntrance&) {
        throw OutOfRange("m is not defined: no entrance boundary");
    }
    return bisect([&](double b) { return t - m(b); }, lo, hi, 1e-13);
}

double occupation_laplace(const ScaleFunction& sf, const Omega& omega, double b,
                          double x, double tol) {
    if (omega.kind == Omega::Kind::ReciprocalRate && omega.scale == 0.0)
        return 1.0;
    if (omega.kind == Omega::Kind::Indicator && omega.q == 0.0) return 1.0;
    WnTable::Options opts;
    opts.tol = tol;
    opts.x_min = std::min(1e-2, 0.1 * b);
    WnTable table = WnTable::build(sf, omega, opts);
    try {
        return laplace_hit(table, b, 1.0, x);
    } catch (const SeriesDiverges& e) {
        throw SummabilityError(std::string("occupation series diverges: ") +
                               e.what());
    }
}

AsymptoticMean asymptotic_mean(const BranchingMechanism& mech,
                               const RateFunction& rate, double b) {
    AsymptoticMean out;
    using Family = RateFunction::Family;
    if (rate.family == Family::ExpRate) {
        double t2 = rate.theta2;
        out.regime = AsymptoticMean::Regime::Exponential;
        out.value = std::exp(-std::log(mech.psi(t2)) - rate.log_eval(b));
        out.description = "m(b) ~ 1/(Psi(theta2) R(b))";
        return out;
    }
    bool power_type =
        rate.family == Family::Power || rate.family == Family::PowerLog;
    if (mech.classify() == MechanismClass::Critical && power_type) {
        double alpha = mech.small_lambda_index();
        double c = mech.small_lambda_coefficient();
        double theta = rate.theta;
        if (theta <= alpha) throw NoRegime("rate index must exceed alpha");
        // ell(b) carries the scale factor and any log correction of R.
        double ell = rate(b) / std::pow(b, theta);
        out.regime = AsymptoticMean::Regime::CriticalStable;
        out.value = std::tgamma(theta - alpha) / std::tgamma(theta) *
                    std::pow(b, alpha - theta) / (c * ell);
        out.description =
            "m(b) ~ Gamma(theta-alpha)/(c Gamma(theta)) b^{alpha-theta}/ell(b)";
        return out;
    }
    if (mech.classify() == MechanismClass::Subcritical &&
        rate.tail_integrable()) {
        PhiFunction pf(rate, mech.gamma());
        out.regime = AsymptoticMean::Regime::SubcriticalPhi;
        out.value = pf(b);
        out.description = "m(b) ~ phi(b) (requires H1)";
        return out;
    }
    throw NoRegime("no asymptotic regime matches this mechanism/rate pair");
}

}  // namespace nlcsbp
