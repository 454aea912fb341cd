#pragma once

#include <cstdint>
#include <random>

namespace qkd {

/// Seeded, replayable random stream.
///
/// All stochastic components draw from an explicitly owned stream so a
/// session is reproducible from its 64-bit seed. Uniform variates are built
/// from the top 53 bits of the engine output, which keeps the draw sequence
/// independent of the standard library's distribution implementations.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    std::uint8_t bit() { return static_cast<std::uint8_t>(engine_() >> 63); }

    /// Uniform integer on [0, bound).
    std::uint64_t below(std::uint64_t bound);

    /// Independent stream keyed by (seed, tag). Deriving does not advance
    /// this stream.
    RandomStream derive(std::uint64_t tag) const;

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace qkd
