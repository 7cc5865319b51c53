#ifndef NLCSBP_SIMULATE_HPP
#define NLCSBP_SIMULATE_HPP

// Monte Carlo engine: paths of the spectrally positive Levy process Z,
// the Lamperti-style time change X = Z(eta^{-1}) with eta = int 1/R(Z),
// first-passage sampling of T_b, start-from-infinity ladders, and
// speed-of-descent diagnostics.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlcsbp/hitting.hpp"
#include "nlcsbp/mechanism.hpp"
#include "nlcsbp/rates.hpp"
#include "nlcsbp/rng.hpp"
#include "nlcsbp/scale.hpp"

namespace nlcsbp {

struct PathConfig {
    double dt = 1e-3;          // base grid step (Levy time)
    double eps_jump = 1e-3;    // small-jump truncation for infinite activity
    double horizon = 1e12;     // Levy-time cap per path
    int barrier_refine = 8;    // step refinement factor near the barrier
    std::uint64_t seed = 1;
    std::uint64_t replica = 0;  // base replica index; path i uses replica+i
    std::size_t max_steps = 20'000'000;
    bool adaptive = true;  // distance-scaled steps away from the barrier
    std::vector<double> laplace_lambdas = {0.5, 1.0, 2.0};
};

struct LevyPath {
    std::vector<double> times;
    std::vector<double> values;
    // Exact jump list for compound-Poisson mechanisms; aggregated families
    // (stable, truncated tails) leave it empty.
    std::vector<std::pair<double, double>> jumps;
    // (estimated first-passage time below b, b) when a barrier was given.
    std::optional<std::pair<double, double>> passage;
};

struct CsbpPath {
    std::vector<double> t;    // uniform grid in changed time
    std::vector<double> x;    // X on that grid
    std::vector<double> eta;  // clock on the Levy grid
    std::vector<double> running_inf;
    std::vector<std::pair<double, double>> jumps;  // mapped (eta(s), size)
    std::optional<double> lifetime;                // eta at passage of 0
};

struct McSummary {
    std::size_t n_reps = 0;
    double x0 = 0.0;
    double mean = 0.0;
    double variance = 0.0;
    double std_error = 0.0;
    double variance_se = 0.0;
    struct LaplacePoint {
        double lambda, estimate, se;
    };
    std::vector<LaplacePoint> laplace;
    // Coupled step-halving diagnostic: mean change of the accumulated
    // functional when each path's trapezoid is coarsened to step pairs.
    double richardson_shift = 0.0;
    double richardson_se = 0.0;
    std::size_t horizon_exceeded = 0;
    std::vector<double> samples;  // per-replica values (capped checks use them)
};

struct LadderReport {
    std::vector<McSummary> rungs;
    bool converged = false;      // consecutive means within max(2 SE, 1% rel)
    std::size_t converged_index = 0;
    double surrogate_mean = 0.0;  // mean at the converged rung
};

struct SpeedReport {
    bool critical = false;  // ratio is Xinf_t/m^{-1}(t); otherwise X_t/phi^{-1}(t)
    std::vector<double> t_grid;
    std::vector<double> target;  // phi^{-1}(t) or m^{-1}(t)
    std::vector<double> median_ratio, q05_ratio, q95_ratio;
    std::vector<double> median_inf_over_x;       // Xinf_t / X_t across paths
    std::vector<double> sup_ratio_q95;           // sup_{s<=t} X_s/Xinf_s
    double frac_inf_close = 0.0;  // share of paths with min Xinf_t/X_t >= 0.9
    std::size_t n_paths = 0;
    std::size_t truncated_paths = 0;  // ended before the window was covered
    std::string note;
};

/// Z on a fixed dt-grid up to cfg.horizon, exact increments per family.
LevyPath sample_levy_path(const BranchingMechanism& mech, double x0,
                          const PathConfig& cfg);

/// Time change of a sampled path: eta by trapezoid of 1/R(Z), X on a
/// uniform t-grid by piecewise-linear inversion of eta.
CsbpPath time_change_path(const LevyPath& levy, const RateFunction& rate);

/// First-passage functional: T_b = int_0^{tau_b} ds/R(Z_s) over n_reps
/// replicas started at x0, with empirical Laplace at cfg.laplace_lambdas.
McSummary sample_hit(const BranchingMechanism& mech, const RateFunction& rate,
                     double x0, double b, std::size_t n_reps,
                     const PathConfig& cfg);

/// sample_hit across an increasing x0 ladder; declares the start-from-
/// infinity surrogate converged when consecutive means agree.
LadderReport from_infinity_ladder(const BranchingMechanism& mech,
                                  const RateFunction& rate, double b,
                                  const std::vector<double>& x0_list,
                                  std::size_t n_reps, const PathConfig& cfg);

/// E_x[exp(-int_0^{tau_b} omega(Z_s) ds)] by trapezoid accumulation.
McSummary occupation_mc(const BranchingMechanism& mech, const Omega& omega,
                        double x, double b, std::size_t n_reps,
                        const PathConfig& cfg);

/// Descent-speed diagnostics over a log-grid of small changed times
/// [t_lo, t_hi]: ratios against the deterministic flow scale (subcritical:
/// phi^{-1}(t)) or the critical scale m^{-1}(t), plus upward-fluctuation
/// statistics. Monte Carlo in-probability evidence, not a proof.
SpeedReport speed_report(const BranchingMechanism& mech,
                         const RateFunction& rate, const ScaleFunction& sf,
                         double x0, double b_stop, std::size_t n_paths,
                         const PathConfig& cfg, double t_lo = 1e-3,
                         double t_hi = 1e-2, std::size_t n_t = 9);

}  // namespace nlcsbp

#endif
