#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace hlg {

// Deterministic counter-based generator. All randomness in the project flows
// from one 64-bit seed through this generator; streams are derived by hashing
// a label into the key, so adding a consumer never perturbs another one.
//
// next() is SplitMix64 applied to key ^ counter; identical across platforms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : key_(seed) {}

    // Independent stream for a named sub-task.
    Rng derive(std::string_view label) const {
        std::uint64_t h = 0xcbf29ce484222325ull; // FNV-1a
        for (char c : label) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ull;
        }
        return Rng(mix(key_ ^ h));
    }
    Rng derive(std::uint64_t n) const { return Rng(mix(key_ + 0x9e3779b97f4a7c15ull * (n + 1))); }

    std::uint64_t next() { return mix(key_ ^ counter_++); }

    // uniform in [0,1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    int uniform_int(int lo, int hi) { // inclusive bounds
        return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    // Box-Muller; not std::normal_distribution, whose stream is
    // implementation-defined and would break byte-identical outputs.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace hlg
