#include "nlcsbp/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlcsbp/errors.hpp"
#include "nlcsbp/numerics.hpp"

namespace nlcsbp {
namespace {

// One-sided alpha-stable variate S_alpha(1, beta=1, 0), alpha in (1,2),
// by the Chambers-Mallows-Stuck transform.
double one_sided_stable(CounterRng& rng, double alpha) {
    const double half_pi = 0.5 * std::numbers::pi;
    double u = (rng.uniform() - 0.5) * std::numbers::pi;  // (-pi/2, pi/2)
    double e = rng.exponential();
    double t = std::tan(half_pi * alpha);
    double b = std::atan(t) / alpha;
    double s0 = std::pow(1.0 + t * t, 0.5 / alpha);
    double num = std::sin(alpha * (u + b));
    double den = std::pow(std::cos(u), 1.0 / alpha);
    double tail = std::pow(std::cos(u - alpha * (u + b)) / e, (1.0 - alpha) / alpha);
    return s0 * (num / den) * tail;
}

// Per-step increment law of Z. All compensation sits in `drift`, so
// E[dZ] = drift*dt exactly for every family.
struct IncrementModel {
    double drift = 0.0;     // per unit time
    double var_rate = 0.0;  // Gaussian variance per unit time
    // Stable block: dZ = (stab_c * dt * cos_fac)^(1/alpha) * S_alpha(1,1).
    double stab_c = 0.0;
    double stab_alpha = 0.0;
    double cos_fac = 0.0;  // |cos(pi alpha / 2)|
    // Big-jump block, Poisson(jump_rate * dt) events.
    enum class JumpKind { None, Exponential, ParetoTail, TemperedTail };
    JumpKind jump_kind = JumpKind::None;
    double jump_rate = 0.0;
    double jump_mean = 0.0;   // Exponential mean
    double jump_eps = 0.0;    // tail cutoff for Pareto/Tempered
    double jump_alpha = 0.0;
    double jump_beta = 0.0;
    double jump_drift_rate = 0.0;  // jump_rate * E[jump], for step-size caps

    double sample_jump(CounterRng& rng) const {
        switch (jump_kind) {
            case JumpKind::Exponential:
                return jump_mean * rng.exponential();
            case JumpKind::ParetoTail:
                return jump_eps * std::pow(rng.uniform(), -1.0 / jump_alpha);
            case JumpKind::TemperedTail: {
                // Proposal: pure power tail; thin with e^{-beta z}.
                double j = jump_eps * std::pow(rng.uniform(), -1.0 / jump_alpha);
                return rng.uniform() < std::exp(-jump_beta * j) ? j : 0.0;
            }
            default:
                return 0.0;
        }
    }

    double sample(CounterRng& rng, double dt) const {
        double dz = drift * dt;
        if (var_rate > 0.0) dz += std::sqrt(var_rate * dt) * rng.normal();
        if (stab_c > 0.0)
            dz += std::pow(stab_c * dt * cos_fac, 1.0 / stab_alpha) *
                  one_sided_stable(rng, stab_alpha);
        if (jump_rate > 0.0) {
            std::uint64_t n = rng.poisson(jump_rate * dt);
            for (std::uint64_t i = 0; i < n; ++i) dz += sample_jump(rng);
        }
        return dz;
    }

    /// Scale of the continuous (downward-capable) fluctuation over dt.
    double diffusive_scale(double dt) const {
        double s = std::sqrt(var_rate * dt);
        if (stab_c > 0.0) s += std::pow(stab_c * dt * cos_fac, 1.0 / stab_alpha);
        return s;
    }

    bool deterministic() const {
        return var_rate == 0.0 && stab_c == 0.0 && jump_rate == 0.0;
    }
};

IncrementModel make_model(const BranchingMechanism& mech, double eps) {
    IncrementModel m;
    m.drift = -mech.gamma();
    m.var_rate = mech.sigma2();
    if (const auto& sc = mech.stable_shortcut()) {
        if (sc->alpha == 2.0) {
            m.var_rate = 2.0 * sc->c;  // Psi = c l^2 = (sigma^2/2) l^2
        } else {
            m.stab_c = sc->c;
            m.stab_alpha = sc->alpha;
            m.cos_fac = std::fabs(std::cos(0.5 * std::numbers::pi * sc->alpha));
        }
        return m;
    }
    using F = LevyMeasureSpec::Family;
    const auto& ms = mech.measure();
    switch (ms.family) {
        case F::None:
            break;
        case F::CompoundPoissonExp:
            m.jump_kind = IncrementModel::JumpKind::Exponential;
            m.jump_rate = ms.rate;
            m.jump_mean = ms.mean_jump;
            m.jump_drift_rate = ms.rate * ms.mean_jump;
            m.drift -= m.jump_drift_rate;  // full compensation in Eq. form
            break;
        case F::StableTail: {
            const double a = ms.alpha, c = ms.c_pi;
            m.jump_kind = IncrementModel::JumpKind::ParetoTail;
            m.jump_eps = eps;
            m.jump_alpha = a;
            m.jump_rate = c * std::pow(eps, -a) / a;
            m.jump_drift_rate = c * std::pow(eps, 1.0 - a) / (a - 1.0);
            m.drift -= m.jump_drift_rate;
            m.var_rate += c * std::pow(eps, 2.0 - a) / (2.0 - a);
            break;
        }
        case F::TemperedStable: {
            const double a = ms.alpha, c = ms.c_pi, beta = ms.beta;
            m.jump_kind = IncrementModel::JumpKind::TemperedTail;
            m.jump_eps = eps;
            m.jump_alpha = a;
            m.jump_beta = beta;
            m.jump_rate = c * std::pow(eps, -a) / a;  // proposal rate
            m.jump_drift_rate =
                c * integrate_upper_tail(
                        [&](double z) { return std::exp(-beta * z) * std::pow(z, -a); },
                        eps, 1e-10, eps)
                        .value;
            m.drift -= m.jump_drift_rate;
            m.var_rate += c * integrate(
                                  [&](double z) {
                                      return std::exp(-beta * z) * std::pow(z, 1.0 - a);
                                  },
                                  0.0, eps, 1e-10);
            break;
        }
    }
    return m;
}

// Step-size controller: keep the per-step move a small fraction of the
// distance to the barrier so relative trapezoid error is uniform along
// the descent. The fraction shrinks like sqrt(dt), so halving dt tightens
// the bias everywhere, matching the Richardson diagnostic.
struct StepControl {
    double base;   // cfg.dt
    double frac;   // target move / distance
    int refine;
    bool adaptive;

    StepControl(const PathConfig& cfg)
        : base(cfg.dt),
          frac(std::clamp(2.0 * std::sqrt(cfg.dt), 1e-4, 0.25)),
          refine(std::max(1, cfg.barrier_refine)),
          adaptive(cfg.adaptive) {}

    double pick(const IncrementModel& m, double dist) const {
        if (!adaptive) return base;
        double dt = base * 1e7;
        double target = frac * dist;
        if (m.drift != 0.0) dt = std::min(dt, target / std::fabs(m.drift));
        if (m.jump_drift_rate > 0.0)
            dt = std::min(dt, target / m.jump_drift_rate);
        if (m.var_rate > 0.0) dt = std::min(dt, target * target / m.var_rate);
        if (m.stab_c > 0.0)
            dt = std::min(dt, std::pow(target, m.stab_alpha) / (m.stab_c * m.cos_fac));
        dt = std::max(dt, base);
        // Finer steps once the diffusive scale reaches the barrier zone.
        if (dist < 2.0 * m.diffusive_scale(dt)) dt = base / refine;
        return dt;
    }
};

struct BarrierRun {
    double value = 0.0;   // accumulated int g(Z_s) ds up to the crossing
    double coarse = 0.0;  // same integral, trapezoid over pairs of steps
    bool crossed = false;
    double levy_time = 0.0;
};

/// Run one path from x0 down through b, accumulating int g(Z) ds by
/// trapezoid with linear interpolation of the crossing time. A coarsened
/// trapezoid over step pairs of the same trajectory is kept alongside, so
/// the step-halving (Richardson) shift can be read off without extra
/// Monte Carlo noise. `extra_point` adds a second proximity zone (e.g. a
/// discontinuity of g) where steps are also kept short.
template <typename G>
BarrierRun run_to_barrier(const IncrementModel& model, const StepControl& ctl,
                          CounterRng& rng, double x0, double b, G&& g,
                          const PathConfig& cfg, double extra_point = -1.0) {
    BarrierRun out;
    double z = x0;
    double gz = g(z);
    double pending_dt = 0.0, g_even = gz;
    bool odd = false;
    std::size_t steps = 0;
    while (true) {
        double dist = z - b;
        if (extra_point > 0.0)
            dist = std::min(dist, std::max(std::fabs(z - extra_point), 1.0));
        double dt = ctl.pick(model, dist);
        dt = std::min(dt, cfg.horizon - out.levy_time);
        double znew = z + model.sample(rng, dt);
        if (znew < b) {
            double f = (z - b) / (z - znew);
            double last = f * dt * 0.5 * (gz + g(b));
            out.value += last;
            out.coarse += pending_dt * 0.5 * (g_even + gz) + last;
            out.levy_time += f * dt;
            out.crossed = true;
            return out;
        }
        double gn = g(znew);
        out.value += dt * 0.5 * (gz + gn);
        out.levy_time += dt;
        pending_dt += dt;
        if (odd) {
            out.coarse += pending_dt * 0.5 * (g_even + gn);
            pending_dt = 0.0;
            g_even = gn;
        }
        odd = !odd;
        z = znew;
        gz = gn;
        if (++steps >= cfg.max_steps || out.levy_time >= cfg.horizon) return out;
    }
}

void finalize_summary(McSummary& s, const std::vector<double>& lambdas) {
    const auto& v = s.samples;
    const double n = static_cast<double>(v.size());
    if (v.empty()) return;
    double mean = 0.0;
    for (double t : v) mean += t;
    mean /= n;
    double m2 = 0.0, m4 = 0.0;
    for (double t : v) {
        double d = t - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m4 /= n;
    s.mean = mean;
    s.variance = n > 1 ? m2 * n / (n - 1.0) : 0.0;
    s.std_error = std::sqrt(s.variance / n);
    s.variance_se = std::sqrt(std::max(0.0, m4 - m2 * m2) / n);
    s.laplace.clear();
    for (double lam : lambdas) {
        double le = 0.0, le2 = 0.0;
        for (double t : v) {
            double e = std::exp(-lam * t);
            le += e;
            le2 += e * e;
        }
        le /= n;
        le2 /= n;
        double se = std::sqrt(std::max(0.0, le2 - le * le) / n);
        s.laplace.push_back({lam, le, se});
    }
}

}  // namespace

LevyPath sample_levy_path(const BranchingMechanism& mech, double x0,
                          const PathConfig& cfg) {
    if (!(cfg.dt > 0.0) || !(cfg.horizon > 0.0))
        throw ConfigError("sample_levy_path needs dt > 0 and horizon > 0");
    const double n_steps_d = cfg.horizon / cfg.dt;
    if (n_steps_d > 5e7) throw ConfigError("horizon/dt exceeds the step budget");
    const std::size_t n = static_cast<std::size_t>(std::llround(n_steps_d));
    IncrementModel model = make_model(mech, cfg.eps_jump);
    CounterRng rng(cfg.seed, cfg.replica);

    LevyPath p;
    p.times.reserve(n + 1);
    p.values.reserve(n + 1);
    p.times.push_back(0.0);
    p.values.push_back(x0);

    if (model.jump_kind == IncrementModel::JumpKind::Exponential) {
        // Exact jump times by exponential clocks, superposed on the
        // drift/diffusion grid.
        double next_jump = rng.exponential() / model.jump_rate;
        double z = x0;
        for (std::size_t k = 1; k <= n; ++k) {
            double t0 = (k - 1) * cfg.dt, t1 = k * cfg.dt;
            double dz = model.drift * cfg.dt;
            if (model.var_rate > 0.0)
                dz += std::sqrt(model.var_rate * cfg.dt) * rng.normal();
            while (next_jump <= t1) {
                double j = model.jump_mean * rng.exponential();
                p.jumps.emplace_back(next_jump, j);
                dz += j;
                next_jump += rng.exponential() / model.jump_rate;
            }
            (void)t0;
            z += dz;
            p.times.push_back(t1);
            p.values.push_back(z);
        }
    } else {
        double z = x0;
        for (std::size_t k = 1; k <= n; ++k) {
            z += model.sample(rng, cfg.dt);
            p.times.push_back(k * cfg.dt);
            p.values.push_back(z);
        }
    }
    return p;
}

CsbpPath time_change_path(const LevyPath& levy, const RateFunction& rate) {
    const std::size_t n = levy.values.size();
    CsbpPath out;
    if (n == 0) return out;
    out.eta.resize(n);
    out.eta[0] = 0.0;
    std::size_t last = n - 1;  // last index with Z > 0 so far
    auto inv_r = [&](double z) { return std::exp(-rate.log_eval(z)); };
    double prev = inv_r(levy.values[0]);
    for (std::size_t k = 1; k < n; ++k) {
        if (levy.values[k] <= 0.0) {
            // Lifetime: eta at the interpolated zero crossing.
            double z0 = levy.values[k - 1], z1 = levy.values[k];
            double f = z0 / (z0 - z1);
            double dt = levy.times[k] - levy.times[k - 1];
            out.lifetime = out.eta[k - 1] + f * dt * 0.5 * (prev + inv_r(1e-12));
            last = k - 1;
            out.eta.resize(k);
            break;
        }
        double cur = inv_r(levy.values[k]);
        double dt = levy.times[k] - levy.times[k - 1];
        out.eta[k] = out.eta[k - 1] + dt * 0.5 * (prev + cur);
        prev = cur;
        last = k;
    }
    const double eta_end = out.eta.back();
    const std::size_t m = last + 1;
    out.t.resize(m);
    out.x.resize(m);
    out.running_inf.resize(m);
    double run_min = kInf;
    std::size_t k = 0;
    for (std::size_t j = 0; j < m; ++j) {
        double tj = m > 1 ? eta_end * static_cast<double>(j) / (m - 1) : 0.0;
        while (k + 1 < out.eta.size() && out.eta[k + 1] < tj) {
            run_min = std::min(run_min, levy.values[k + 1]);
            ++k;
        }
        double x;
        if (k + 1 < out.eta.size() && out.eta[k + 1] > out.eta[k]) {
            double f = (tj - out.eta[k]) / (out.eta[k + 1] - out.eta[k]);
            f = std::clamp(f, 0.0, 1.0);
            x = levy.values[k] + f * (levy.values[k + 1] - levy.values[k]);
        } else {
            x = levy.values[k];
        }
        out.t[j] = tj;
        out.x[j] = x;
        run_min = std::min(run_min, x);
        out.running_inf[j] = run_min;
    }
    // Jump correspondence: same sizes, times mapped through eta.
    for (const auto& [s, j] : levy.jumps) {
        auto it = std::upper_bound(levy.times.begin(),
                                   levy.times.begin() + out.eta.size(), s);
        std::size_t idx = it == levy.times.begin()
                              ? 0
                              : static_cast<std::size_t>(it - levy.times.begin()) - 1;
        if (idx + 1 >= out.eta.size()) continue;
        double f = (s - levy.times[idx]) / (levy.times[idx + 1] - levy.times[idx]);
        out.jumps.emplace_back(out.eta[idx] + f * (out.eta[idx + 1] - out.eta[idx]), j);
    }
    return out;
}

McSummary sample_hit(const BranchingMechanism& mech, const RateFunction& rate,
                     double x0, double b, std::size_t n_reps,
                     const PathConfig& cfg) {
    if (!(x0 > b && b > 0.0))
        throw ValidationError("sample_hit requires x0 > b > 0");
    IncrementModel model = make_model(mech, cfg.eps_jump);
    StepControl ctl(cfg);
    McSummary s;
    s.x0 = x0;
    s.n_reps = n_reps;
    s.samples.reserve(n_reps);
    auto g = [&](double z) { return std::exp(-rate.log_eval(std::max(z, b))); };
    double dsum = 0.0, dsum2 = 0.0;
    for (std::size_t i = 0; i < n_reps; ++i) {
        CounterRng rng(cfg.seed, cfg.replica + i);
        BarrierRun r = run_to_barrier(model, ctl, rng, x0, b, g, cfg);
        if (!r.crossed) {
            ++s.horizon_exceeded;
            continue;
        }
        s.samples.push_back(r.value);
        double d = r.coarse - r.value;
        dsum += d;
        dsum2 += d * d;
    }
    finalize_summary(s, cfg.laplace_lambdas);
    if (!s.samples.empty()) {
        double n = static_cast<double>(s.samples.size());
        s.richardson_shift = dsum / n;
        s.richardson_se =
            std::sqrt(std::max(0.0, dsum2 / n - s.richardson_shift * s.richardson_shift) / n);
    }
    return s;
}

LadderReport from_infinity_ladder(const BranchingMechanism& mech,
                                  const RateFunction& rate, double b,
                                  const std::vector<double>& x0_list,
                                  std::size_t n_reps, const PathConfig& cfg) {
    LadderReport rep;
    PathConfig c = cfg;
    for (std::size_t i = 0; i < x0_list.size(); ++i) {
        c.replica = cfg.replica + i * n_reps;
        rep.rungs.push_back(sample_hit(mech, rate, x0_list[i], b, n_reps, c));
    }
    for (std::size_t i = 1; i < rep.rungs.size(); ++i) {
        const auto& a = rep.rungs[i - 1];
        const auto& d = rep.rungs[i];
        double gap = std::fabs(d.mean - a.mean);
        double tol = std::max(2.0 * std::hypot(a.std_error, d.std_error),
                              0.01 * std::fabs(d.mean));
        if (gap < tol) {
            rep.converged = true;
            rep.converged_index = i;
            rep.surrogate_mean = d.mean;
            break;
        }
    }
    return rep;
}

McSummary occupation_mc(const BranchingMechanism& mech, const Omega& omega,
                        double x, double b, std::size_t n_reps,
                        const PathConfig& cfg) {
    if (!(x > b && b > 0.0))
        throw ValidationError("occupation_mc requires x > b > 0");
    IncrementModel model = make_model(mech, cfg.eps_jump);
    StepControl ctl(cfg);
    // Keep steps short near an indicator edge so the trapezoid sees it.
    double feature = omega.kind == Omega::Kind::Indicator ? omega.a : -1.0;
    McSummary s;
    s.x0 = x;
    s.n_reps = n_reps;
    s.samples.reserve(n_reps);
    auto g = [&](double z) { return omega(std::max(z, 1e-12)); };
    for (std::size_t i = 0; i < n_reps; ++i) {
        CounterRng rng(cfg.seed, cfg.replica + i);
        BarrierRun r = run_to_barrier(model, ctl, rng, x, b, g, cfg, feature);
        if (!r.crossed) {
            ++s.horizon_exceeded;
            continue;
        }
        s.samples.push_back(std::exp(-r.value));
    }
    finalize_summary(s, {});
    return s;
}

SpeedReport speed_report(const BranchingMechanism& mech,
                         const RateFunction& rate, const ScaleFunction& sf,
                         double x0, double b_stop, std::size_t n_paths,
                         const PathConfig& cfg, double t_lo, double t_hi,
                         std::size_t n_t) {
    SpeedReport rep;
    rep.critical = mech.classify() == MechanismClass::Critical;
    rep.n_paths = n_paths;
    rep.note = "Monte Carlo in-probability evidence for asymptotic statements";
    rep.t_grid = geometric_grid(t_lo, t_hi, n_t);
    rep.target.resize(n_t);
    if (rep.critical) {
        for (std::size_t j = 0; j < n_t; ++j)
            rep.target[j] = m_inverse(sf, rate, rep.t_grid[j]);
    } else {
        PhiFunction pf(rate, mech.gamma());
        for (std::size_t j = 0; j < n_t; ++j)
            rep.target[j] = pf.inverse(rep.t_grid[j]);
    }

    IncrementModel model = make_model(mech, cfg.eps_jump);
    StepControl ctl(cfg);
    auto inv_r = [&](double z) { return std::exp(-rate.log_eval(z)); };

    std::vector<std::vector<double>> ratio(n_t), inf_over_x(n_t), sup_ratio(n_t);
    std::size_t close_count = 0;
    for (std::size_t i = 0; i < n_paths; ++i) {
        CounterRng rng(cfg.seed, cfg.replica + i);
        double z = x0, eta = 0.0, minz = x0, supr = 1.0;
        double gz = inv_r(z);
        std::size_t j = 0, steps = 0;
        bool path_close = true;
        while (j < n_t) {
            double dt = ctl.pick(model, std::max(z - b_stop, b_stop * 0.01));
            double znew = z + model.sample(rng, dt);
            if (znew <= b_stop || ++steps >= cfg.max_steps) {
                ++rep.truncated_paths;
                break;
            }
            double gn = inv_r(znew);
            double eta_new = eta + dt * 0.5 * (gz + gn);
            while (j < n_t && rep.t_grid[j] <= eta_new) {
                // State at clock time t_j, taken at the step end. The
                // headline ratio is X_t/phi^{-1}(t) (subcritical) or
                // Xinf_t/m^{-1}(t) (critical).
                double run_inf = std::min(minz, znew);
                ratio[j].push_back((rep.critical ? run_inf : znew) / rep.target[j]);
                inf_over_x[j].push_back(run_inf / znew);
                sup_ratio[j].push_back(std::max(supr, znew / run_inf));
                if (run_inf / znew < 0.9) path_close = false;
                ++j;
            }
            z = znew;
            gz = gn;
            eta = eta_new;
            minz = std::min(minz, z);
            supr = std::max(supr, z / minz);
        }
        if (j == n_t && path_close) ++close_count;
    }
    std::size_t complete = 0;
    auto quantile = [](std::vector<double>& v, double q) {
        if (v.empty()) return 0.0;
        std::size_t k = static_cast<std::size_t>(q * (v.size() - 1));
        std::nth_element(v.begin(), v.begin() + k, v.end());
        return v[k];
    };
    rep.median_ratio.resize(n_t);
    rep.q05_ratio.resize(n_t);
    rep.q95_ratio.resize(n_t);
    rep.median_inf_over_x.resize(n_t);
    rep.sup_ratio_q95.resize(n_t);
    for (std::size_t j = 0; j < n_t; ++j) {
        if (!ratio[j].empty()) complete = std::max(complete, ratio[j].size());
        rep.median_ratio[j] = quantile(ratio[j], 0.5);
        rep.q05_ratio[j] = quantile(ratio[j], 0.05);
        rep.q95_ratio[j] = quantile(ratio[j], 0.95);
        rep.median_inf_over_x[j] = quantile(inf_over_x[j], 0.5);
        rep.sup_ratio_q95[j] = quantile(sup_ratio[j], 0.95);
    }
    rep.frac_inf_close =
        complete > 0 ? static_cast<double>(close_count) / static_cast<double>(n_paths)
                     : 0.0;
    return rep;
}

}  // namespace nlcsbp
