#ifndef NLCSBP_HITTING_HPP
#define NLCSBP_HITTING_HPP

// First-passage functionals of the time-changed process below a level b:
// the mean m(b) = int_b^inf W(y-b)/R(y) dy, the weighted recursion
//   W_0 = 1,   W_{n+1}(x) = int_x^inf W(z-x) omega(z) W_n(z) dz,
// Laplace transforms of T_b as series ratios, second moments and variance,
// the inverse of m, weighted occupation Laplace transforms, and the
// asymptotic regimes of m.

#include <string>
#include <vector>

#include "nlcsbp/boundary.hpp"
#include "nlcsbp/rates.hpp"
#include "nlcsbp/scale.hpp"

namespace nlcsbp {

struct Omega {
    enum class Kind { ReciprocalRate, Indicator, Table };
    Kind kind = Kind::ReciprocalRate;
    RateFunction rate;               // omega(z) = scale / R(z)
    double scale = 1.0;
    double q = 0.0, a = 0.0;         // omega(z) = q * 1{z <= a}
    std::vector<double> grid, vals;  // tabulated, zero beyond the grid
    PositiveInterpolant interp;

    static Omega reciprocal(RateFunction r, double scale = 1.0);
    static Omega indicator(double q, double a);
    static Omega table(std::vector<double> grid, std::vector<double> vals);

    double operator()(double z) const;
    /// Decays at least like a power of index > 1 (integrable tail)?
    bool tail_integrable() const;
};

class WnTable {
  public:
    struct Options {
        int n_max = 12;
        double tol = 1e-10;
        double x_min = 1e-2;
        double x_max = 0.0;  // 0 = choose from the omega family
        std::size_t points = 257;
    };

    static WnTable build(const ScaleFunction& sf, Omega omega, Options opts);
    static WnTable build(const ScaleFunction& sf, Omega omega) {
        return build(sf, std::move(omega), Options{});
    }

    /// W_n(x), interpolated from the level tables (W_0 is exactly 1).
    double wn(int n, double x) const;
    /// Grow the table to hold at least n levels.
    void extend(int n);

    int max_order() const { return static_cast<int>(levels_.size()) - 1; }
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& level(int n) const { return levels_.at(n); }
    double tol() const { return tol_; }
    const ScaleFunction& scale_function() const { return *sf_; }
    const Omega& omega() const { return omega_; }

  private:
    WnTable() = default;
    std::vector<double> compute_level(const std::vector<double>& prev_vals,
                                      bool prev_is_one) const;

    const ScaleFunction* sf_ = nullptr;
    Omega omega_;
    std::vector<double> grid_;
    std::vector<std::vector<double>> levels_;       // levels_[n][i] = W_n(grid[i])
    std::vector<PositiveInterpolant> interps_;
    double tol_ = 1e-10;
    bool log_x_ = true;  // geometric grid + log-log interpolation
};

struct HittingSummary {
    double b = 0.0;
    double x = 0.0;  // +inf for the started-from-infinity law
    double mean = 0.0;
    double second_moment = 0.0;
    double variance = 0.0;
    double variance_cross_check = -1.0;  // double-integral form, if requested
    std::vector<std::pair<double, double>> laplace;  // (lambda, value)
};

/// E_x[T_b]; x may be +inf (requires an entrance boundary).
double mean_hit(const ScaleFunction& sf, const RateFunction& rate, double b,
                double x);

WnTable wn_table(const ScaleFunction& sf, Omega omega, int n_max,
                 WnTable::Options opts = {});

/// E_x[e^{-lambda T_b}] = sum lambda^n W_n(x) / sum lambda^n W_n(b);
/// x = +inf uses numerator 1.
double laplace_hit(WnTable& table, double b, double lambda, double x);

/// Moments of T_b via W_1, W_2 evaluated by direct nested quadrature.
HittingSummary hit_moments(const ScaleFunction& sf, const RateFunction& rate,
                           double b, double x, bool cross_check = false);

/// b with m(b) = t.
double m_inverse(const ScaleFunction& sf, const RateFunction& rate, double t);

/// E_x[exp(-int_0^{tau_b} omega(Z_s) ds); tau_b < inf].
double occupation_laplace(const ScaleFunction& sf, const Omega& omega, double b,
                          double x, double tol = 1e-10);

struct AsymptoticMean {
    double value = 0.0;
    enum class Regime { Exponential, CriticalStable, SubcriticalPhi } regime;
    std::string description;
};

AsymptoticMean asymptotic_mean(const BranchingMechanism& mech,
                               const RateFunction& rate, double b);

}  // namespace nlcsbp

#endif
