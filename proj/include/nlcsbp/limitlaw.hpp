#ifndef NLCSBP_LIMITLAW_HPP
#define NLCSBP_LIMITLAW_HPP

// Limit laws of T_b / m(b) as b -> infinity: the critical power-rate law
// with Laplace transform [sum_n (s Gamma(theta)/Gamma(theta-alpha))^n a_n]^{-1}
// and the exponential-rate limit [1 + sum_n Psi(theta2)^n lambda^n /
// prod_j Psi(j theta2)]^{-1}.

#include <vector>

#include "nlcsbp/mechanism.hpp"

namespace nlcsbp {

class StableThetaLaw {
  public:
    StableThetaLaw(double alpha, double theta);

    /// a_0 = 1, a_n = prod_{i=1}^n Gamma(i theta - i alpha) /
    /// Gamma(i theta - (i-1) alpha), accumulated in log space.
    double coeff_a(int n) const;
    double laplace(double s) const;

    double alpha() const { return alpha_; }
    double theta() const { return theta_; }

  private:
    double alpha_, theta_;
    mutable std::vector<double> log_a_;  // log a_n cache
};

class ExpRateLimitLaw {
  public:
    ExpRateLimitLaw(BranchingMechanism mech, double theta2);

    double laplace(double lambda) const;

    double theta2() const { return theta2_; }

  private:
    BranchingMechanism mech_;
    double theta2_;
};

inline double coeff_a(const StableThetaLaw& law, int n) { return law.coeff_a(n); }
inline double laplace_S(const StableThetaLaw& law, double s) {
    return law.laplace(s);
}
inline double laplace_exp_limit(const ExpRateLimitLaw& law, double lambda) {
    return law.laplace(lambda);
}

}  // namespace nlcsbp

#endif
