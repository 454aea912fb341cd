#include "qkd/random.hpp"

namespace qkd {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

std::uint64_t RandomStream::below(std::uint64_t bound) {
    // Rejection on the top of the range removes modulo bias.
    const std::uint64_t limit = bound == 0 ? 0 : (~std::uint64_t{0} - bound + 1) % bound;
    for (;;) {
        const std::uint64_t x = engine_();
        if (x >= limit) return bound == 0 ? 0 : x % bound;
    }
}

RandomStream RandomStream::derive(std::uint64_t tag) const {
    return RandomStream(splitmix64(seed_ ^ splitmix64(tag + 0x5bd1e995ULL)));
}

}  // namespace qkd
