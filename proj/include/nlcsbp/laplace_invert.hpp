#ifndef NLCSBP_LAPLACE_INVERT_HPP
#define NLCSBP_LAPLACE_INVERT_HPP

// Numerical inversion of Laplace transforms on the positive half line.
// Fixed-Talbot is the workhorse; Euler summation (Abate-Whitt) is the
// fallback when the Talbot residual check trips.

#include <complex>
#include <functional>

namespace nlcsbp {

using LaplaceTransform = std::function<std::complex<double>(std::complex<double>)>;

/// Fixed-Talbot inversion of F at t > 0 with M contour nodes.
double talbot_invert(const LaplaceTransform& F, double t, int nodes = 48);

/// Euler-summation inversion (Abate-Whitt) of F at t > 0.
double euler_invert(const LaplaceTransform& F, double t, int terms = 40,
                    int euler_order = 14);

}  // namespace nlcsbp

#endif
