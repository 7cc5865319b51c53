#ifndef NLCSBP_RNG_HPP
#define NLCSBP_RNG_HPP

// Counter-based random stream: every draw is a hash of
// (seed, replica, counter), so replicas are independent and reproducible
// regardless of scheduling.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace nlcsbp {

class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t replica) {
        key_ = mix(mix(seed) ^ (replica * 0x9e3779b97f4a7c15ULL + 1));
    }

    std::uint64_t next_u64() { return mix(key_ + (++counter_)); }

    /// Uniform on (0, 1), never exactly 0 or 1.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    double exponential() { return -std::log(uniform()); }

    std::uint64_t poisson(double mean) {
        // Inversion for small means, normal approximation above 64.
        if (mean <= 0.0) return 0;
        if (mean > 64.0) {
            double v = mean + std::sqrt(mean) * normal();
            return v <= 0.0 ? 0 : static_cast<std::uint64_t>(v + 0.5);
        }
        double l = std::exp(-mean), p = 1.0;
        std::uint64_t k = 0;
        do {
            ++k;
            p *= uniform();
        } while (p > l);
        return k - 1;
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace nlcsbp

#endif
