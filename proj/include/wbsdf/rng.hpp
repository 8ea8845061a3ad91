#pragma once

#include <cmath>
#include <cstdint>

namespace wbsdf {

// Stateless 64-bit mix (splitmix64 finalizer). Used to derive independent,
// machine-invariant random streams from structured keys (seed, pixel, pass...)
// so that renders are bit-identical regardless of thread count.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Counter-based generator: next() hashes (key, counter) and advances the
// counter. Streams with distinct keys are independent; callers own the key.
class RngStream {
  public:
    RngStream() = default;
    explicit RngStream(std::uint64_t key) : key_(mix64(key)) {}

    static RngStream from(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0,
                          std::uint64_t d = 0, std::uint64_t e = 0) {
        std::uint64_t k = mix64(a);
        k = mix64(k ^ b);
        k = mix64(k ^ c);
        k = mix64(k ^ d);
        k = mix64(k ^ e);
        RngStream s;
        s.key_ = k;
        return s;
    }

    std::uint64_t next_u64() { return mix64(key_ ^ ++counter_); }

    // Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    // Standard normal via Box-Muller.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_double();
        double u2 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace wbsdf
