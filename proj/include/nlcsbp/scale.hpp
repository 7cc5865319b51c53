#ifndef NLCSBP_SCALE_HPP
#define NLCSBP_SCALE_HPP

// Scale function W of the dual spectrally negative process:
//   int_0^inf e^{-qy} W(y) dy = 1 / Psi(q),  W = 0 on (-inf, 0).
// Closed forms where the mechanism admits them, fixed-Talbot inversion of
// 1/Psi otherwise (Euler summation as fallback), with a geometric cache.

#include <cstddef>
#include <optional>
#include <vector>

#include "nlcsbp/mechanism.hpp"
#include "nlcsbp/numerics.hpp"

namespace nlcsbp {

struct ScaleValidation {
    double max_laplace_residual = 0.0;  // max_q |Psi(q) * L[W](q) - 1|
    int monotonicity_violations = 0;
    double c1 = 0.0;  // fitted sandwich constants of W(x) * x * Psi(1/x)
    double c2 = 0.0;
    bool ratio_finite = false;  // c2/c1 finite on the grid
};

class ScaleFunction {
  public:
    enum class Method { PureDrift, BrownianDrift, Stable, NumericInversion };

    struct Options {
        double tol = 1e-9;
        std::optional<Method> force;
        double cache_x_min = 1e-6;
        double cache_x_max = 5e4;
        std::size_t cache_points = 2048;
        int talbot_nodes = 48;
    };

    static ScaleFunction build(const BranchingMechanism& mech, Options opts);
    static ScaleFunction build(const BranchingMechanism& mech) {
        return build(mech, Options{});
    }

    /// W(x); zero for x < 0.
    double operator()(double x) const;

    /// W(inf) = 1/gamma, +inf in the critical case.
    double limit() const { return w_inf_; }

    /// Delta(z) = W(inf) - W(z). Defined only for gamma > 0.
    double delta(double z) const;

    Method method() const { return method_; }
    const BranchingMechanism& mechanism() const { return mech_; }

    ScaleValidation validate(const std::vector<double>& q_grid,
                             const std::vector<double>& x_grid) const;

  private:
    explicit ScaleFunction(BranchingMechanism mech) : mech_(std::move(mech)) {}

    double closed_form(double x) const;
    double invert_at(double x) const;

    BranchingMechanism mech_;
    Method method_ = Method::PureDrift;
    double w_inf_ = 0.0;
    double tol_ = 1e-9;
    int talbot_nodes_ = 48;
    bool use_euler_ = false;

    // Stable closed form constants
    double stable_c_ = 0.0, stable_alpha_ = 0.0;

    // Numeric-inversion cache
    PositiveInterpolant cache_;
    bool cache_trusted_ = false;
    double cache_lo_ = 0.0, cache_hi_ = 0.0;
    double low_tail_exponent_ = 1.0;  // W(x) ~ W(x_lo) (x/x_lo)^p below grid
};

inline ScaleFunction build_scale(const BranchingMechanism& mech,
                                 std::optional<ScaleFunction::Method> method = {},
                                 double tol = 1e-9) {
    ScaleFunction::Options o;
    o.force = method;
    o.tol = tol;
    return ScaleFunction::build(mech, o);
}

inline double w_eval(const ScaleFunction& sf, double x) { return sf(x); }
inline double w_limit(const ScaleFunction& sf) { return sf.limit(); }
inline double delta(const ScaleFunction& sf, double z) { return sf.delta(z); }

inline ScaleValidation validate_scale(const ScaleFunction& sf,
                                      const std::vector<double>& q_grid,
                                      const std::vector<double>& x_grid) {
    return sf.validate(q_grid, x_grid);
}

}  // namespace nlcsbp

#endif
