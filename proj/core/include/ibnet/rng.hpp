#ifndef IBNET_RNG_HPP
#define IBNET_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace ibnet {

// Seedable random source with hand-rolled draw primitives.
//
// std::mt19937_64 output is specified bit-for-bit by the standard, while the
// standard <random> distributions are not. All conversions from raw 64-bit
// words to doubles/integers are implemented here so that a given seed yields
// the same draw sequence on every platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform_unit();
    }

    // Uniform integer on [0, n), n > 0. Fixed-point multiply; the bias of
    // roughly n / 2^64 is far below anything observable here.
    std::uint64_t uniform_int(std::uint64_t n) {
        using u128 = unsigned __int128;
        return static_cast<std::uint64_t>((static_cast<u128>(next_u64()) * n) >> 64);
    }

    // Pareto draw with density proportional to x^(-exponent) on [x_min, inf),
    // exponent > 1. Inverse-CDF: CCDF(x) = (x / x_min)^(1 - exponent).
    double pareto(double exponent, double x_min) {
        double u = 1.0 - uniform_unit(); // (0, 1]
        return x_min * std::pow(u, -1.0 / (exponent - 1.0));
    }

    // Fisher-Yates shuffle using uniform_int.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_int(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::mt19937_64 gen_;
};

// splitmix64 step, used to derive well-separated per-unit seeds from a
// master seed and work-unit coordinates.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    return splitmix64(splitmix64(splitmix64(master) ^ a) ^ b);
}

} // namespace ibnet

#endif
