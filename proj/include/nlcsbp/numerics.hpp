#ifndef NLCSBP_NUMERICS_HPP
#define NLCSBP_NUMERICS_HPP

// Shared numerical kernels: adaptive quadrature on finite and semi-infinite
// intervals, bracketed bisection and monotone interpolation in log space.

#include <boost/math/special_functions/fpclassify.hpp>
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "nlcsbp/errors.hpp"

namespace nlcsbp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Adaptive Gauss-Kronrod on a finite interval.
template <typename F>
double integrate(const F& f, double a, double b, double rel_tol = 1e-10,
                 unsigned max_depth = 12) {
    if (b <= a) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, max_depth, rel_tol);
}

struct TailIntegral {
    double value = 0.0;
    bool converged = false;
    double last_ratio = 0.0;  // decay ratio of successive geometric segments
};

/// Integral of f over [a, inf) by geometrically widening segments with a
/// geometric-series completion of the remainder. Works for any integrand
/// whose segment contributions eventually decay by a stable ratio < 1
/// (covers exponential tails and power tails with slope < -1).
template <typename F>
TailIntegral integrate_upper_tail(const F& f, double a, double rel_tol = 1e-10,
                                  double first_len = 0.0, int max_segments = 90,
                                  unsigned max_depth = 12) {
    TailIntegral out;
    double len = first_len > 0 ? first_len : std::max(1.0, std::abs(a));
    double lo = a;
    double total = 0.0;
    double prev_seg = 0.0;
    int decaying = 0;
    for (int k = 0; k < max_segments; ++k) {
        const double hi = lo + len;
        const double seg = integrate(f, lo, hi, rel_tol * 0.1, max_depth);
        total += seg;
        const double aseg = std::abs(seg);
        if (prev_seg > 0.0 && aseg < prev_seg) {
            ++decaying;
        } else if (aseg > 0.0) {
            decaying = 0;
        }
        // Completion once the running remainder estimate is negligible.
        if (prev_seg > 0.0 && aseg > 0.0 && decaying >= 3) {
            const double r = aseg / prev_seg;
            if (r < 0.95) {
                const double rem = aseg * r / (1.0 - r);
                if (rem < rel_tol * std::abs(total) ||
                    (total == 0.0 && rem < rel_tol)) {
                    out.value = total + (seg > 0 ? rem : -rem);
                    out.converged = true;
                    out.last_ratio = r;
                    return out;
                }
            }
        }
        if (aseg == 0.0 && prev_seg == 0.0 && k > 2) {
            out.value = total;
            out.converged = true;
            out.last_ratio = 0.0;
            return out;
        }
        prev_seg = aseg;
        lo = hi;
        len *= 2.0;
    }
    out.value = total;
    out.converged = false;
    out.last_ratio = prev_seg > 0 ? 1.0 : 0.0;
    return out;
}

template <typename F>
double integrate_upper(const F& f, double a, double rel_tol = 1e-10,
                       double first_len = 0.0, unsigned max_depth = 12) {
    TailIntegral t = integrate_upper_tail(f, a, rel_tol, first_len, 90, max_depth);
    if (!t.converged)
        throw NotIntegrable("semi-infinite quadrature did not converge");
    return t.value;
}

/// Bisection on a monotone bracket. abs_tol on the argument.
template <typename F>
double bisect(const F& f, double lo, double hi, double abs_tol = 1e-12,
              int max_iter = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0))
        throw ConvergenceError("bisection bracket does not straddle a root");
    for (int i = 0; i < max_iter; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0 || (hi - lo) < abs_tol) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Expand a bracket geometrically until f changes sign, then bisect.
template <typename F>
double find_root_increasing(const F& f, double lo_seed, double hi_seed,
                            double abs_tol = 1e-12) {
    double lo = lo_seed, hi = hi_seed;
    int guard = 0;
    while (f(lo) > 0 && guard++ < 200) lo *= 0.5;
    guard = 0;
    while (f(hi) < 0 && guard++ < 200) hi *= 2.0;
    if (f(lo) > 0 || f(hi) < 0)
        throw ConvergenceError("failed to bracket root");
    return bisect(f, lo, hi, abs_tol);
}

/// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    return (n * sxy - sx * sy) / denom;
}

inline std::vector<double> geometric_grid(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                                  static_cast<double>(n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

/// Monotone interpolation of a positive function sampled on a positive grid.
/// Interpolates log(value) against log(x); exact for pure power laws and
/// well-conditioned for exponential tails on geometric grids. Falls back to
/// linear-space pchip when values touch zero.
class PositiveInterpolant {
  public:
    PositiveInterpolant() = default;

    PositiveInterpolant(std::vector<double> x, std::vector<double> y,
                        bool log_x = true) {
        x_lo_ = x.front();
        x_hi_ = x.back();
        y_lo_ = y.front();
        y_hi_ = y.back();
        log_x_ = log_x && x_lo_ > 0.0;
        log_y_ = true;
        for (double v : y)
            if (v <= 0.0) log_y_ = false;
        std::vector<double> xs(x.size()), ys(y.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            xs[i] = log_x_ ? std::log(x[i]) : x[i];
            ys[i] = log_y_ ? std::log(y[i]) : y[i];
        }
        spline_.emplace(std::move(xs), std::move(ys));
    }

    double operator()(double x) const {
        if (x <= x_lo_) return y_lo_;
        if (x >= x_hi_) return y_hi_;
        const double u = log_x_ ? std::log(x) : x;
        const double v = (*spline_)(u);
        return log_y_ ? std::exp(v) : v;
    }

    double x_min() const { return x_lo_; }
    double x_max() const { return x_hi_; }
    bool empty() const { return !spline_.has_value(); }

  private:
    std::optional<boost::math::interpolators::pchip<std::vector<double>>> spline_;
    double x_lo_ = 0, x_hi_ = 0, y_lo_ = 0, y_hi_ = 0;
    bool log_x_ = true, log_y_ = true;
};

}  // namespace nlcsbp

#endif
