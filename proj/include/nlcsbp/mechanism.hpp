#ifndef NLCSBP_MECHANISM_HPP
#define NLCSBP_MECHANISM_HPP

// Branching mechanisms: the log-Laplace exponent of a spectrally positive
// Levy process, Psi(l) = gamma*l + (sigma2/2)*l^2 + integral term, with the
// jump integral in closed form per measure family. Note the convention:
// `sigma2` stores sigma^2 and the quadratic term carries the /2.

#include <cmath>
#include <complex>
#include <optional>

#include "nlcsbp/errors.hpp"
#include "nlcsbp/numerics.hpp"

namespace nlcsbp {

struct LevyMeasureSpec {
    enum class Family { None, StableTail, CompoundPoissonExp, TemperedStable };

    Family family = Family::None;
    double alpha = 0.0;      // StableTail / TemperedStable, in (1,2)
    double c_pi = 0.0;       // density c_pi * z^(-1-alpha)
    double rate = 0.0;       // CompoundPoissonExp jump intensity
    double mean_jump = 0.0;  // CompoundPoissonExp exponential jump mean
    double beta = 0.0;       // TemperedStable tempering

    static LevyMeasureSpec none() { return {}; }

    static LevyMeasureSpec stable_tail(double alpha, double c_pi) {
        if (!(alpha > 1.0 && alpha < 2.0))
            throw ValidationError("StableTail requires alpha in (1,2)");
        if (!(c_pi > 0.0)) throw ValidationError("StableTail requires c_pi > 0");
        LevyMeasureSpec s;
        s.family = Family::StableTail;
        s.alpha = alpha;
        s.c_pi = c_pi;
        return s;
    }

    static LevyMeasureSpec compound_poisson_exp(double rate, double mean_jump) {
        if (!(rate > 0.0 && mean_jump > 0.0))
            throw ValidationError("CompoundPoissonExp requires positive rate and mean");
        LevyMeasureSpec s;
        s.family = Family::CompoundPoissonExp;
        s.rate = rate;
        s.mean_jump = mean_jump;
        return s;
    }

    static LevyMeasureSpec tempered_stable(double alpha, double c_pi, double beta) {
        if (!(alpha > 1.0 && alpha < 2.0))
            throw ValidationError("TemperedStable requires alpha in (1,2)");
        if (!(c_pi > 0.0 && beta > 0.0))
            throw ValidationError("TemperedStable requires c_pi, beta > 0");
        LevyMeasureSpec s;
        s.family = Family::TemperedStable;
        s.alpha = alpha;
        s.c_pi = c_pi;
        s.beta = beta;
        return s;
    }
};

struct IntegrabilityReport {
    bool z_wedge_z2_finite = true;  // int (z ^ z^2) pi(dz) < inf
    bool small_jump_mean_finite = true;  // int_0^1 u pi(du) < inf
};

enum class MechanismClass { Supercritical, Critical, Subcritical };

struct StableShortcut {
    double c;      // Psi(l) = c * l^alpha exactly
    double alpha;  // in (1,2]
};

class BranchingMechanism {
  public:
    BranchingMechanism(double gamma, double sigma2,
                       LevyMeasureSpec measure = LevyMeasureSpec::none())
        : gamma_(gamma), sigma2_(sigma2), measure_(measure) {
        if (sigma2 < 0.0) throw ValidationError("sigma2 must be nonnegative");
    }

    static BranchingMechanism stable(double c, double alpha) {
        if (!(c > 0.0)) throw ValidationError("stable shortcut requires c > 0");
        if (!(alpha > 1.0 && alpha <= 2.0))
            throw ValidationError("stable shortcut requires alpha in (1,2]");
        BranchingMechanism m(0.0, alpha == 2.0 ? 2.0 * c : 0.0);
        m.shortcut_ = StableShortcut{c, alpha};
        return m;
    }

    double gamma() const { return gamma_; }
    double sigma2() const { return sigma2_; }
    const LevyMeasureSpec& measure() const { return measure_; }
    const std::optional<StableShortcut>& stable_shortcut() const { return shortcut_; }

    /// Psi(lambda); extends to complex arguments for Laplace inversion.
    template <typename Scalar>
    Scalar psi(Scalar lambda) const {
        if (shortcut_)
            return shortcut_->c * pow_(lambda, shortcut_->alpha);
        Scalar v = gamma_ * lambda + 0.5 * sigma2_ * lambda * lambda;
        using F = LevyMeasureSpec::Family;
        switch (measure_.family) {
            case F::None:
                break;
            case F::StableTail:
                // int (e^{-lz}-1+lz) c z^{-1-a} dz = c Gamma(-a) l^a, a in (1,2)
                v += measure_.c_pi * std::tgamma(-measure_.alpha) *
                     pow_(lambda, measure_.alpha);
                break;
            case F::CompoundPoissonExp: {
                const double m = measure_.mean_jump;
                v += measure_.rate * lambda * lambda * m * m / (1.0 + lambda * m);
                break;
            }
            case F::TemperedStable: {
                const double a = measure_.alpha, b = measure_.beta;
                const double g = std::tgamma(-a);
                v += measure_.c_pi * g *
                     (pow_(Scalar(b) + lambda, a) - std::pow(b, a) -
                      a * std::pow(b, a - 1.0) * lambda);
                break;
            }
        }
        return v;
    }

    /// Left edge of the domain of the analytic extension of Psi (exclusive).
    /// -inf when Psi extends to the whole real line.
    double domain_lower() const {
        if (shortcut_ && shortcut_->alpha < 2.0) return 0.0;
        using F = LevyMeasureSpec::Family;
        switch (measure_.family) {
            case F::None:
                return -kInf;
            case F::StableTail:
                return 0.0;
            case F::CompoundPoissonExp:
                return -1.0 / measure_.mean_jump;
            case F::TemperedStable:
                return -measure_.beta;
        }
        return 0.0;
    }

    MechanismClass classify() const {
        if (gamma_ < 0.0) return MechanismClass::Supercritical;
        if (gamma_ > 0.0) return MechanismClass::Subcritical;
        return MechanismClass::Critical;
    }

    /// Index alpha_eff of Psi near 0: Psi(l) ~ c_eff * l^alpha_eff.
    double small_lambda_index() const {
        if (gamma_ != 0.0) return 1.0;
        if (shortcut_) return shortcut_->alpha;
        if (sigma2_ > 0.0) return 2.0;
        if (measure_.family == LevyMeasureSpec::Family::StableTail)
            return measure_.alpha;
        return 2.0;  // CompoundPoissonExp / TemperedStable have finite variance
    }

    double small_lambda_coefficient() const {
        if (gamma_ != 0.0) return gamma_;
        if (shortcut_) return shortcut_->c;
        using F = LevyMeasureSpec::Family;
        double c2 = 0.5 * sigma2_;
        switch (measure_.family) {
            case F::None:
                break;
            case F::StableTail:
                return measure_.c_pi * std::tgamma(-measure_.alpha);
            case F::CompoundPoissonExp:
                c2 += measure_.rate * measure_.mean_jump * measure_.mean_jump;
                break;
            case F::TemperedStable: {
                const double a = measure_.alpha, b = measure_.beta;
                c2 += 0.5 * measure_.c_pi * std::tgamma(-a) * a * (a - 1.0) *
                      std::pow(b, a - 2.0);
                break;
            }
        }
        return c2;
    }

  private:
    template <typename Scalar>
    static Scalar pow_(Scalar base, double e) {
        if constexpr (std::is_same_v<Scalar, double>)
            return std::pow(base, e);
        else
            return std::pow(base, Scalar(e));
    }

    double gamma_;
    double sigma2_;
    LevyMeasureSpec measure_;
    std::optional<StableShortcut> shortcut_;
};

inline double psi_eval(const BranchingMechanism& mech, double lambda) {
    if (lambda < 0.0) {
        if (lambda <= mech.domain_lower())
            throw DomainError("Psi has no analytic extension at this argument");
    }
    return mech.psi(lambda);
}

inline MechanismClass classify(const BranchingMechanism& mech) {
    return mech.classify();
}

/// Root nu > 0 of Psi(-nu) = 0 (Cramer condition), when the analytic
/// extension reaches it. Absent for purely heavy-tailed measures.
std::optional<double> cramer_root(const BranchingMechanism& mech);

/// Unique lambda > 0 with Psi(lambda) = q, for gamma >= 0 and q > 0.
double phi_big(const BranchingMechanism& mech, double q);

IntegrabilityReport measure_integrability_check(const LevyMeasureSpec& spec);

}  // namespace nlcsbp

#endif
