#ifndef NLCSBP_RATES_HPP
#define NLCSBP_RATES_HPP

// Branching-rate functions R, the descent-speed functional
//   phi(b) = (1/gamma) * int_b^inf dx / R(x),
// its inverse, the deterministic flow x_t = phi^{-1}(phi(x0) + t), the
// valley functional V(z, rho) = sup_{x>=z} (R(x)/R(x+rho z) - 1)_+, and
// numerical checkers for the asymptotic hypotheses H1..H4.

#include <memory>
#include <string>
#include <vector>

#include "nlcsbp/mechanism.hpp"
#include "nlcsbp/numerics.hpp"
#include "nlcsbp/scale.hpp"

namespace nlcsbp {

struct RateFunction {
    enum class Family { Power, PowerLog, ExpRate, OscillatingValley, Tabulated };

    Family family = Family::Power;
    double theta = 1.0;  // regular-variation index (Power/PowerLog/Osc/Tabulated)
    double k = 1.0;      // Power scale
    double p = 0.0;      // PowerLog exponent of ln(e+x)
    double theta2 = 0.0; // ExpRate exponent
    std::shared_ptr<RateFunction> g;  // ExpRate prefactor (Power or PowerLog)
    double v = 0.0;      // OscillatingValley oscillation decay, in (0,1)
    double x0 = 1.0;     // OscillatingValley freeze point
    std::vector<double> grid, values;  // Tabulated
    PositiveInterpolant interp;

    static RateFunction power(double theta, double k = 1.0);
    static RateFunction power_log(double theta, double p);
    static RateFunction exp_rate(double theta2, RateFunction g);
    static RateFunction oscillating_valley(double theta, double v, double x0);
    static RateFunction tabulated(std::vector<double> grid,
                                  std::vector<double> values,
                                  double tail_exponent);

    double operator()(double x) const;
    double log_eval(double x) const;  // log R(x), safe where R(x) overflows

    bool monotone_nondecreasing() const;
    /// int^inf dx/R(x) < inf, decided analytically per family.
    bool tail_integrable() const;
    /// Regular-variation index; +inf for ExpRate.
    double tail_index() const;

    std::string describe() const;
};

inline double r_eval(const RateFunction& r, double x) { return r(x); }

/// V(z, rho) = sup_{x >= z} (R(x)/R(x + rho z) - 1)_+.
double valley_V(const RateFunction& rate, double z, double rho);

class PhiFunction {
  public:
    PhiFunction(RateFunction rate, double gamma);

    double operator()(double b) const;
    double log_phi(double b) const;
    double inverse(double t) const;
    /// Interval time (1/gamma) * int_a^b dx/R(x); avoids the cancellation
    /// in phi(a) - phi(b) for nearby arguments.
    double segment_time(double a, double b) const;
    /// Flow started from x0 (may be +inf), evaluated at time t >= 0.
    double flow(double x0, double t) const;

    const RateFunction& rate() const { return rate_; }
    double gamma() const { return gamma_; }

  private:
    RateFunction rate_;
    double gamma_;
};

inline double phi_eval(const PhiFunction& pf, double b) { return pf(b); }
inline double phi_inverse(const PhiFunction& pf, double t) { return pf.inverse(t); }
inline double flow(const PhiFunction& pf, double x0, double t) {
    return pf.flow(x0, t);
}

enum class Hypothesis { H1, H2, H3, H4 };
enum class Verdict { Holds, Fails, Inconclusive };

struct DiagnosticSeries {
    std::string name;
    std::vector<double> grid;
    std::vector<double> values;
};

struct HypothesisVerdict {
    Hypothesis hypothesis;
    Verdict verdict;
    std::string reason;
    std::vector<DiagnosticSeries> diagnostics;
};

HypothesisVerdict check_hypothesis(const PhiFunction& pf, Hypothesis which);
HypothesisVerdict check_H3(const RateFunction& rate);

struct H4Spec {
    enum class P { InvSqrt, CramerLogLog, UserTable };
    P p_form = P::InvSqrt;
    double nu = 1.0;                     // CramerLogLog: p(z) = 2 ln ln z / (nu z)
    std::vector<double> z_user, p_user;  // UserTable
    double c = 2.0;                      // the c > 1 in condition (ii)
    bool use_alt_iii = false;            // route (iii') instead of (iii)
    double vbar_C = 0.0;                 // Vbar(z) = C z^{-w}; C <= 0 means "fit"
    double vbar_w = 0.0;                 // must be > 0 (Vbar decreasing)
};

HypothesisVerdict check_H4(const PhiFunction& pf, const ScaleFunction& sf,
                           const H4Spec& spec);

}  // namespace nlcsbp

#endif
