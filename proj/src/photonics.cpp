#include "qkd/photonics.hpp"

#include <cmath>
#include <stdexcept>

namespace qkd {

std::string_view to_string(PolarizationState s) noexcept {
    switch (s) {
        case PolarizationState::Horizontal: return "H";
        case PolarizationState::Vertical: return "V";
        case PolarizationState::RightCircular: return "R";
        case PolarizationState::LeftCircular: return "L";
    }
    return "?";
}

std::string_view to_string(AnalyzerSetting a) noexcept {
    return a == AnalyzerSetting::TestForOne ? "test_for_one" : "test_for_zero";
}

double passage_probability(PolarizationState prepared, AnalyzerSetting analyzer) noexcept {
    // The vertical analyzer blocks |h> and the left-circular analyzer blocks
    // |r>; each passes its non-orthogonal partner with probability 1/2. |v>
    // and |l> are never prepared by Alice but are kept total for completeness.
    switch (prepared) {
        case PolarizationState::Horizontal:
            return analyzer == AnalyzerSetting::TestForZero ? 0.5 : 0.0;
        case PolarizationState::RightCircular:
            return analyzer == AnalyzerSetting::TestForOne ? 0.5 : 0.0;
        case PolarizationState::Vertical:
            return analyzer == AnalyzerSetting::TestForOne ? 1.0 : 0.5;
        case PolarizationState::LeftCircular:
            return analyzer == AnalyzerSetting::TestForZero ? 1.0 : 0.5;
    }
    return 0.0;
}

PhotonNumberDistribution::PhotonNumberDistribution(double mean_photon_number)
    : mean_(mean_photon_number), exp_neg_mean_(std::exp(-mean_photon_number)) {
    if (!std::isfinite(mean_photon_number) || mean_photon_number < 0.0) {
        throw std::invalid_argument("mean photon number must be finite and >= 0");
    }
}

double PhotonNumberDistribution::pmf(std::uint64_t n) const {
    if (mean_ == 0.0) return n == 0 ? 1.0 : 0.0;
    const double k = static_cast<double>(n);
    return std::exp(k * std::log(mean_) - mean_ - std::lgamma(k + 1.0));
}

std::uint64_t PhotonNumberDistribution::truncation_point(double tail) const {
    if (mean_ == 0.0) return 0;
    // Walk the recursion p(n) = p(n-1) * mean / n. Past the mode the tail is
    // bounded by a geometric series with ratio mean / (n + 1).
    std::uint64_t n = 0;
    double p = pmf(0);
    double cdf = p;
    for (;;) {
        const double ratio = mean_ / static_cast<double>(n + 1);
        if (ratio < 1.0) {
            const double bound = p * ratio / (1.0 - ratio);
            if (bound < tail || 1.0 - cdf < tail * 0.5) return n;
        }
        ++n;
        p = (p > 0.0) ? p * mean_ / static_cast<double>(n) : pmf(n);
        cdf += p;
    }
}

std::uint64_t PhotonNumberDistribution::sample(RandomStream& rng) const {
    if (mean_ == 0.0) return 0;
    if (mean_ < 10.0) {
        double u = rng.uniform();
        std::uint64_t n = 0;
        double p = exp_neg_mean_;
        while (u > p) {
            u -= p;
            ++n;
            p *= mean_ / static_cast<double>(n);
            if (p == 0.0) break;  // u lands in the rounding residue
        }
        return n;
    }
    // Hörmann (1993), transformed rejection with squeeze.
    const double slam = std::sqrt(mean_);
    const double loglam = std::log(mean_);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = rng.uniform() - 0.5;
        const double v = rng.uniform();
        const double us = 0.5 - std::fabs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mean_ + 0.43);
        if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            -mean_ + k * loglam - std::lgamma(k + 1.0)) {
            return static_cast<std::uint64_t>(k);
        }
    }
}

double multiphoton_probability(double mean_photon_number) {
    if (!std::isfinite(mean_photon_number) || mean_photon_number < 0.0) {
        throw std::invalid_argument("mean photon number must be finite and >= 0");
    }
    // 1 - e^-m - m e^-m, written to keep precision for small m.
    const double m = mean_photon_number;
    return -std::expm1(-m) - m * std::exp(-m);
}

double multiphoton_fraction_given_detectable(double mean_photon_number) {
    if (!(mean_photon_number > 0.0) || !std::isfinite(mean_photon_number)) {
        throw std::invalid_argument("conditional multiphoton fraction needs mean > 0");
    }
    return multiphoton_probability(mean_photon_number) / -std::expm1(-mean_photon_number);
}

}  // namespace qkd
