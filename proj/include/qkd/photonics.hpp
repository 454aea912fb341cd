#pragma once

#include <cstdint>
#include <string_view>

#include "qkd/random.hpp"

namespace qkd {

enum class PolarizationState : std::uint8_t { Horizontal, Vertical, RightCircular, LeftCircular };

/// Bob's two conclusive tests. TestForOne is the vertical analyzer and only
/// passes light prepared for a "1"; TestForZero is the left-circular analyzer
/// and only passes light prepared for a "0".
enum class AnalyzerSetting : std::uint8_t { TestForOne, TestForZero };

std::string_view to_string(PolarizationState s) noexcept;
std::string_view to_string(AnalyzerSetting a) noexcept;

/// Bit revealed by a click behind the given analyzer.
constexpr std::uint8_t revealed_bit(AnalyzerSetting a) noexcept {
    return a == AnalyzerSetting::TestForOne ? 1 : 0;
}

constexpr AnalyzerSetting other(AnalyzerSetting a) noexcept {
    return a == AnalyzerSetting::TestForOne ? AnalyzerSetting::TestForZero
                                            : AnalyzerSetting::TestForOne;
}

/// Single-photon probability that `prepared` passes `analyzer`, before any
/// device inefficiency. Orthogonal pairs give 0, non-orthogonal pairs 1/2.
double passage_probability(PolarizationState prepared, AnalyzerSetting analyzer) noexcept;

/// The receiver's 50/50 beamsplitter: each analyzer with probability 1/2.
inline AnalyzerSetting bob_choose_analyzer(RandomStream& rng) {
    return rng.bit() ? AnalyzerSetting::TestForOne : AnalyzerSetting::TestForZero;
}

/// Photon-number statistics of an attenuated laser pulse (Poisson).
class PhotonNumberDistribution {
public:
    /// Throws std::invalid_argument for a negative or non-finite mean.
    explicit PhotonNumberDistribution(double mean_photon_number);

    double mean() const noexcept { return mean_; }

    double pmf(std::uint64_t n) const;

    /// Smallest N with P(n > N) < tail. The masses 0..N then sum to 1
    /// within `tail`.
    std::uint64_t truncation_point(double tail = 1e-15) const;

    /// Inversion for small means, transformed rejection (PTRS) from 10 up.
    std::uint64_t sample(RandomStream& rng) const;

private:
    double mean_;
    double exp_neg_mean_;
};

/// P(n >= 2 | n >= 1) for a Poisson pulse. Throws for mean <= 0.
double multiphoton_fraction_given_detectable(double mean_photon_number);

/// Unconditional P(n >= 2).
double multiphoton_probability(double mean_photon_number);

}  // namespace qkd
