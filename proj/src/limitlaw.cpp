#include "nlcsbp/limitlaw.hpp"

#include <cmath>

#include "nlcsbp/errors.hpp"

namespace nlcsbp {

StableThetaLaw::StableThetaLaw(double alpha, double theta)
    : alpha_(alpha), theta_(theta) {
    if (alpha <= 1.0 || alpha > 2.0) throw DomainError("alpha must be in (1,2]");
    if (theta <= alpha) throw DomainError("theta must exceed alpha");
    log_a_.push_back(0.0);
}

double StableThetaLaw::coeff_a(int n) const {
    if (n < 0) throw DomainError("coefficient index must be nonnegative");
    while (static_cast<int>(log_a_.size()) <= n) {
        int i = static_cast<int>(log_a_.size());
        log_a_.push_back(log_a_.back() + std::lgamma(i * (theta_ - alpha_)) -
                         std::lgamma(i * theta_ - (i - 1) * alpha_));
    }
    return std::exp(log_a_[n]);
}

double StableThetaLaw::laplace(double s) const {
    if (s < 0.0) throw DomainError("laplace argument must be nonnegative");
    if (s == 0.0) return 1.0;
    const double log_r = std::log(s) + std::lgamma(theta_) -
                         std::lgamma(theta_ - alpha_);
    double sum = 1.0;
    for (int n = 1; n <= 500; ++n) {
        coeff_a(n);
        double term = std::exp(n * log_r + log_a_[n]);
        sum += term;
        if (term < 1e-14 * sum) return 1.0 / sum;
    }
    throw ConvergenceError("limit-law series did not settle in 500 terms");
}

ExpRateLimitLaw::ExpRateLimitLaw(BranchingMechanism mech, double theta2)
    : mech_(std::move(mech)), theta2_(theta2) {
    if (theta2 <= 0.0) throw DomainError("theta2 must be positive");
    if (mech_.gamma() < 0.0) throw DomainError("requires gamma >= 0");
}

double ExpRateLimitLaw::laplace(double lambda) const {
    if (lambda < 0.0) throw DomainError("laplace argument must be nonnegative");
    if (lambda == 0.0) return 1.0;
    const double log_c = std::log(lambda) + std::log(mech_.psi(theta2_));
    double sum = 1.0, log_num = 0.0, log_den = 0.0;
    for (int n = 1; n <= 500; ++n) {
        log_num += log_c;
        log_den += std::log(mech_.psi(n * theta2_));
        double term = std::exp(log_num - log_den);
        sum += term;
        if (term < 1e-14 * sum) return 1.0 / sum;
    }
    throw ConvergenceError("limit-law series did not settle in 500 terms");
}

}  // namespace nlcsbp
