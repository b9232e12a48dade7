#pragma once

#include <cstdint>

namespace sd {

/// splitmix64; deterministic across platforms, which the reproducibility
/// contract needs (std::uniform_int_distribution is not portable).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in {0, ..., n-1} by rejection, bias-free.
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % n;
    }

    /// Independent substream; walks seeded this way are mergeable in any
    /// order without changing their own draws.
    static Rng substream(std::uint64_t master, std::uint64_t index) {
        Rng mix(master ^ (0x6a09e667f3bcc909ULL + index * 0x9e3779b97f4a7c15ULL));
        mix.next();
        return Rng(mix.next());
    }

  private:
    std::uint64_t state_;
};

} // namespace sd
