#include "nlcsbp/laplace_invert.hpp"

#include <cmath>
#include <vector>

namespace nlcsbp {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double talbot_invert(const LaplaceTransform& F, double t, int nodes) {
    using cd = std::complex<double>;
    const double r = 2.0 * nodes / (5.0 * t);
    double acc = 0.5 * std::exp(r * t) * std::real(F(cd(r, 0.0)));
    for (int k = 1; k < nodes; ++k) {
        const double theta = k * kPi / nodes;
        const double cot = std::cos(theta) / std::sin(theta);
        const cd s(r * theta * cot, r * theta);
        const double sigma = theta + (theta * cot - 1.0) * cot;
        acc += std::real(std::exp(s * t) * F(s) * cd(1.0, sigma));
    }
    return acc * r / nodes;
}

double euler_invert(const LaplaceTransform& F, double t, int terms,
                    int euler_order) {
    using cd = std::complex<double>;
    const double A = 18.4;  // ~1e-8 discretization error floor
    const int n_total = terms + euler_order;
    std::vector<double> partial;
    partial.reserve(n_total + 1);

    double running = 0.5 * std::real(F(cd(A / (2.0 * t), 0.0)));
    for (int k = 1; k <= n_total; ++k) {
        const cd s(A / (2.0 * t), k * kPi / t);
        const double term = ((k & 1) ? -1.0 : 1.0) * std::real(F(s));
        running += term;
        if (k >= terms) partial.push_back(running);
    }
    // Binomial (Euler) average of the last euler_order+1 partial sums.
    double avg = 0.0;
    double binom = 1.0;
    double total_weight = std::ldexp(1.0, euler_order);
    for (int j = 0; j <= euler_order; ++j) {
        avg += binom * partial[j];
        binom *= static_cast<double>(euler_order - j) / (j + 1);
    }
    return std::exp(A / 2.0) / t * (avg / total_weight);
}

}  // namespace nlcsbp
