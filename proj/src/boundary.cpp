#include "nlcsbp/boundary.hpp"

#include <algorithm>
#include <cmath>

#include "nlcsbp/errors.hpp"

namespace nlcsbp {

namespace {

enum class TailFate { Converges, Diverges, Borderline };

// Fate of int^inf x^{alpha-1} / R(x) dx per rate family, where alpha is the
// small-lambda index of Psi (equals 1 in the subcritical case, making this
// the shortcut integral int^inf dx/R).
TailFate integrand_fate(const RateFunction& rate, double alpha, double tol) {
    using Family = RateFunction::Family;
    switch (rate.family) {
        case Family::ExpRate:
            return TailFate::Converges;
        case Family::Power:
        case Family::OscillatingValley:
            return rate.theta > alpha ? TailFate::Converges : TailFate::Diverges;
        case Family::PowerLog:
            if (rate.theta > alpha) return TailFate::Converges;
            if (rate.theta == alpha && rate.p > 1.0) return TailFate::Converges;
            return TailFate::Diverges;
        case Family::Tabulated:
            if (std::abs(rate.theta - alpha) <= tol) return TailFate::Borderline;
            return rate.theta > alpha ? TailFate::Converges : TailFate::Diverges;
    }
    return TailFate::Borderline;
}

}  // namespace

EntranceVerdict entrance_test(const BranchingMechanism& mech,
                              const RateFunction& rate, double tol) {
    EntranceVerdict out;
    if (mech.gamma() < 0.0) {
        out.is_entrance = false;
        out.integral_value = kInf;
        out.criterion_used = EntranceVerdict::Criterion::SupercriticalRule;
        return out;
    }

    // Full integrand, in logs so that exponential rates cannot overflow.
    auto f = [&](double x) {
        double lp = std::log(mech.psi(1.0 / x));
        return std::exp(-std::log(x) - lp - rate.log_eval(x));
    };

    const double alpha = mech.small_lambda_index();
    TailFate fate = integrand_fate(rate, alpha, tol);
    if (fate == TailFate::Borderline) {
        // Log-log slope over two decades decides; too close to -1 is
        // undecidable at this tolerance.
        std::vector<double> lx, lf;
        for (double x = 1e6; x <= 1.01e8; x *= std::sqrt(10.0)) {
            lx.push_back(std::log(x));
            lf.push_back(std::log(f(x)));
        }
        double slope = fit_slope(lx, lf);
        if (std::abs(slope + 1.0) <= tol)
            throw InconclusiveTail("integrand tail slope too close to -1");
        fate = slope < -1.0 ? TailFate::Converges : TailFate::Diverges;
    }

    out.is_entrance = fate == TailFate::Converges;
    out.criterion_used = mech.gamma() > 0.0
                             ? EntranceVerdict::Criterion::SubcriticalShortcut
                             : EntranceVerdict::Criterion::FullIntegral;
    if (out.is_entrance) {
        // The test concerns a neighborhood of infinity; report the integral
        // from 1.
        auto tail = integrate_upper_tail(f, 1.0, 1e-9, 1.0, 120);
        out.integral_value = tail.converged ? tail.value : kInf;
    } else {
        out.integral_value = kInf;
    }
    return out;
}

EmpiricalEntranceReport entrance_test_empirical(
    const std::vector<double>& x_ladder, const std::vector<double>& means,
    const std::vector<double>& std_errors, double m_b) {
    if (x_ladder.size() != means.size() || means.size() != std_errors.size())
        throw DomainError("empirical entrance ladder arrays must align");
    EmpiricalEntranceReport rep;
    rep.ladder_x = x_ladder;
    rep.ladder_mean = means;
    rep.ladder_se = std_errors;
    const std::size_t n = means.size();
    if (n < 2) return rep;

    double a = means[n - 2], b = means[n - 1];
    double se = std::hypot(std_errors[n - 2], std_errors[n - 1]);
    double gap = std::abs(b - a);
    rep.plateau = gap < std::max(2.0 * se, 0.01 * std::abs(b));
    rep.plateau_value = b;
    rep.plateau_se = std_errors[n - 1];
    if (rep.plateau && m_b >= 0.0)
        rep.matches_mean = std::abs(b - m_b) <= 3.0 * std_errors[n - 1];
    return rep;
}

}  // namespace nlcsbp
