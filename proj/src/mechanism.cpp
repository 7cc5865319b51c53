#include "nlcsbp/mechanism.hpp"

#include <cmath>

namespace nlcsbp {

std::optional<double> cramer_root(const BranchingMechanism& mech) {
    if (mech.classify() != MechanismClass::Subcritical)
        throw DomainError("cramer_root requires a subcritical mechanism");
    const double lower = mech.domain_lower();
    if (lower >= 0.0) return std::nullopt;  // no extension below 0

    // Psi(-nu) starts negative (Psi'(0+) = gamma > 0) and, by convexity,
    // crosses 0 at most once more before the domain edge.
    const auto g = [&](double nu) { return mech.psi(-nu); };
    const double nu_max = std::isinf(lower) ? kInf : -lower;

    double hi = std::isinf(nu_max) ? 1.0 : 0.5 * nu_max;
    double hi_cap = std::isinf(nu_max) ? 1e12 : nu_max;
    int guard = 0;
    while (g(hi) < 0.0 && guard++ < 200) {
        const double next = std::isinf(nu_max) ? hi * 2.0 : 0.5 * (hi + hi_cap);
        if (next == hi || next >= hi_cap * (1.0 - 1e-14)) break;
        hi = next;
    }
    if (!(g(hi) > 0.0)) return std::nullopt;

    double lo = hi * 1e-12;
    guard = 0;
    while (g(lo) > 0.0 && guard++ < 200) lo *= 0.5;
    if (g(lo) > 0.0) return std::nullopt;
    return bisect(g, lo, hi, 1e-12, 200);
}

double phi_big(const BranchingMechanism& mech, double q) {
    if (!(q > 0.0)) throw DomainError("phi_big requires q > 0");
    if (mech.gamma() < 0.0)
        throw DomainError("phi_big requires gamma >= 0");
    const auto g = [&](double l) { return mech.psi(l) - q; };
    double hi = 1.0;
    int guard = 0;
    while (g(hi) < 0.0 && guard++ < 400) hi *= 2.0;
    if (g(hi) < 0.0) throw ConvergenceError("phi_big failed to bracket");
    double lo = 1e-15;
    return bisect(g, lo, hi, 1e-12 * std::max(1.0, hi), 200);
}

IntegrabilityReport measure_integrability_check(const LevyMeasureSpec& spec) {
    IntegrabilityReport r;
    using F = LevyMeasureSpec::Family;
    switch (spec.family) {
        case F::None:
        case F::CompoundPoissonExp:
            // finite total mass, exponential tails: everything integrable
            break;
        case F::StableTail:
        case F::TemperedStable:
            // density ~ z^{-1-alpha} near 0 with alpha in (1,2):
            // z^2 * z^{-1-alpha} = z^{1-alpha} integrable at 0, and the tail
            // is either power alpha > 1 or tempered; but u * z^{-1-alpha}
            // = z^{-alpha} diverges at 0.
            r.z_wedge_z2_finite = true;
            r.small_jump_mean_finite = false;
            break;
    }
    return r;
}

}  // namespace nlcsbp
