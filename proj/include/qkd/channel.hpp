#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "qkd/photonics.hpp"
#include "qkd/random.hpp"

namespace qkd {

/// Scalar free-space channel between Alice's output and Bob's fibers.
struct ChannelModel {
    double coupling_efficiency = 0.14;
    /// Per-click probability that a signal click registers in the wrong arm.
    /// Absorbs wave-plate and Pockels-cell imperfections.
    double misalignment_flip_prob = 0.015;
    /// Total ambient rate, split evenly between the two detectors.
    double background_rate_hz = 1100.0;
};

struct DetectorModel {
    double efficiency = 0.65;
    /// Per detector.
    double dark_rate_hz = 80.0;
    double gate_window_s = 5e-9;
};

/// Throws std::invalid_argument naming the first offending field.
void validate(const ChannelModel& channel);
void validate(const DetectorModel& detector);

enum class ClickCause : std::uint8_t { Signal, Background, Dark };

struct DetectionOutcome {
    enum class Kind : std::uint8_t { NoClick, Conclusive, DualFire };

    Kind kind = Kind::NoClick;
    std::uint8_t bit = 0;               // valid for Conclusive
    ClickCause cause = ClickCause::Signal;  // valid for Conclusive

    static constexpr DetectionOutcome no_click() noexcept { return {}; }
    static constexpr DetectionOutcome dual_fire() noexcept { return {Kind::DualFire, 0, ClickCause::Signal}; }
    static constexpr DetectionOutcome conclusive(std::uint8_t bit, ClickCause cause) noexcept {
        return {Kind::Conclusive, bit, cause};
    }

    bool is_conclusive() const noexcept { return kind == Kind::Conclusive; }
    bool any_click() const noexcept { return kind != Kind::NoClick; }

    friend bool operator==(const DetectionOutcome&, const DetectionOutcome&) = default;
};

std::string_view to_string(DetectionOutcome::Kind k) noexcept;
std::string_view to_string(ClickCause c) noexcept;

/// Binomial thinning: each photon survives with the coupling efficiency.
std::uint64_t transmit(std::uint64_t photon_count, const ChannelModel& channel, RandomStream& rng);

/// Binomial thinning with an explicit survival probability.
std::uint64_t thin(std::uint64_t photon_count, double survival, RandomStream& rng);

/// Which detector (named by its analyzer) a single photon fires, if any,
/// once it has been routed to `analyzer`. Ignores noise.
std::optional<AnalyzerSetting> route_photon(PolarizationState state, AnalyzerSetting analyzer,
                                            const ChannelModel& channel,
                                            const DetectorModel& detector, RandomStream& rng);

/// Gated per-detector noise click probabilities.
struct NoiseProbabilities {
    double background = 0.0;
    double dark = 0.0;
};

NoiseProbabilities per_gate_noise(const ChannelModel& channel, const DetectorModel& detector) noexcept;

/// Two-detector B92 receiver for one gate. The 50/50 beamsplitter routes
/// each arriving photon to an analyzer independently; background and dark
/// clicks are added per detector; clicks in both detectors are a dual-fire.
DetectionOutcome detect_slot(std::uint64_t arriving_photons, PolarizationState alice_state,
                             const ChannelModel& channel, const DetectorModel& detector,
                             RandomStream& rng);

/// Noise clicks per second that survive gating.
double expected_noise_click_rate(double noise_rate_hz, double gate_window_s, double pulse_rate_hz);

/// Closed-form probability that both detectors fire in one gate for a
/// Poisson pulse of the given mean leaving Alice. The two arms are
/// independent thinned Poisson processes plus independent noise.
double dual_fire_probability(double mean_photon_number, const ChannelModel& channel,
                             const DetectorModel& detector);

struct MeanPhotonEstimate {
    /// Point estimate, or the one-sided 95% upper bound when `upper_bound_only`.
    double mean_photon_number = 0.0;
    bool upper_bound_only = false;
};

/// Inverts dual_fire_probability for an observed dual-fire count over
/// `gate_count` gates. Requires at least 10^4 gates. A zero count yields an
/// upper bound. Throws std::domain_error when the receiver cannot produce
/// dual-fires at all (perfect alignment and no noise).
MeanPhotonEstimate estimate_mean_photons_from_dualfire(std::uint64_t dual_fire_count,
                                                       std::uint64_t gate_count,
                                                       const ChannelModel& channel,
                                                       const DetectorModel& detector);

}  // namespace qkd
