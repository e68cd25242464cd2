#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace sailfit {

// xorshift64* generator. The full stream is pinned by the recurrence
//
//   x ^= x >> 12;  x ^= x << 25;  x ^= x >> 27;  output = x * 0x2545F4914F6CDD1D
//
// so any language can reproduce it exactly. A zero seed is remapped to a
// fixed nonzero constant (xorshift state must never be zero).
//
// Derived draws, all defined in terms of next_u64():
//   next_double : (next_u64() >> 11) * 2^-53, uniform in [0,1)
//   uniform     : lo + (hi-lo)*next_double()
//   next_below  : next_u64() % n
//   normal      : Box-Muller, u1=1-next_double(), u2=next_double(),
//                 sqrt(-2 ln u1) * cos(2 pi u2)   (one draw pair per sample)
//   shuffle     : Fisher-Yates, i from n-1 down to 1, j = next_below(i+1)
class Rng {
public:
    explicit Rng(std::uint64_t seed)
        : state_(seed == 0 ? 0x9E3779B97F4A7C15ULL : seed) {}

    std::uint64_t next_u64() {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545F4914F6CDD1DULL;
    }

    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    std::uint64_t next_below(std::uint64_t n) {
        return next_u64() % n;
    }

    double normal(double mean, double stddev) {
        double u1 = 1.0 - next_double();
        double u2 = next_double();
        double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
        return mean + stddev * z;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t state_;
};

} // namespace sailfit
