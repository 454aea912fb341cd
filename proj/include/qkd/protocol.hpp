#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qkd/bits.hpp"
#include "qkd/channel.hpp"
#include "qkd/classical.hpp"
#include "qkd/photonics.hpp"
#include "qkd/random.hpp"

namespace qkd {

/// B92 intrinsic efficiency: half the analyzer choices can pass, and those
/// pass with probability 1/2.
inline constexpr double kB92ProtocolEfficiency = 0.25;

struct SessionConfig {
    std::uint64_t pulse_count = 1'000'000;
    double pulse_rate_hz = 20'000.0;
    double mean_photon_number = 0.1;
    ChannelModel channel;
    DetectorModel detector;
    std::uint64_t seed = 1;
    /// Every pulse carries exactly one photon (Fock-state idealization).
    bool force_single_photon = false;
    /// Keep the per-slot trace in the result (memory grows with pulse_count).
    bool keep_trace = false;
};

std::vector<std::string> validation_errors(const SessionConfig& config);

/// Throws ConfigError listing every problem.
void validate(const SessionConfig& config);

/// One transmitted pulse.
struct PulseRecord {
    std::uint64_t slot = 0;
    std::uint8_t bit = 0;
    PolarizationState state = PolarizationState::Horizontal;
    std::uint64_t photons = 0;
};

struct SlotTrace {
    PulseRecord pulse;
    std::uint64_t arriving_photons = 0;
    DetectionOutcome outcome;
};

struct SessionCounts {
    std::uint64_t pulses = 0;
    /// Slots with any click, conclusive or dual-fire.
    std::uint64_t detected_slots = 0;
    std::uint64_t conclusive = 0;
    std::uint64_t signal_clicks = 0;
    std::uint64_t bit_errors = 0;
};

struct SessionResult {
    BitVector alice_raw_key;
    BitVector bob_raw_key;
    std::vector<std::uint64_t> sifted_indices;
    double duration_s = 0.0;
    double sifted_rate_hz = 0.0;
    /// 0 when the raw key is empty.
    double ber = 0.0;
    std::uint64_t dual_fire_count = 0;
    /// Conclusive (sifted) clicks caused by ambient light or dark counts.
    std::uint64_t background_click_count = 0;
    std::uint64_t dark_click_count = 0;
    SessionCounts counts;
    std::vector<SlotTrace> trace;
};

PolarizationState alice_prepare(std::uint8_t bit);

/// Conclusive single-detector clicks, in slot order, plus the announcement
/// Bob publishes. Dual-fires and empty gates are left out.
std::pair<ClassicalMessage, std::vector<std::uint64_t>> sift(std::span<const DetectionOutcome> bob_outcomes);

/// Fraction of differing positions. Throws on length mismatch or empty input.
double measure_ber(std::span<const std::uint8_t> alice_raw, std::span<const std::uint8_t> bob_raw);

/// eta_B = coupling * detector * protocol.
double composite_efficiency(double coupling, double detector, double protocol = kB92ProtocolEfficiency);

/// Bob's probability of detecting at least one photon from a Poisson pulse:
/// 1 - exp(-n * eta_B).
double theoretical_detection_probability(double mean_photon_number, double coupling,
                                         double detector,
                                         double protocol = kB92ProtocolEfficiency);

/// The same probability as the Poisson-weighted sum over photon numbers of
/// 1 - (1 - eta_B)^n, truncated once the Poisson tail drops below 1e-15.
double detection_probability_series(double mean_photon_number, double coupling, double detector,
                                    double protocol = kB92ProtocolEfficiency);

double expected_bit_rate(double pulse_rate_hz, double detection_probability);

/// Alice's side of a session: random bits from her stream, Poisson pulses,
/// and the raw key once Bob's sift announcement arrives.
class Alice {
public:
    Alice(RandomStream stream, double mean_photon_number, bool force_single_photon);

    PulseRecord emit(std::uint64_t slot);
    void receive(const ClassicalMessage& message);

    const BitVector& raw_key() const noexcept { return raw_key_; }

private:
    RandomStream rng_;
    PhotonNumberDistribution photons_;
    bool single_photon_;
    BitVector sent_;
    BitVector raw_key_;
};

/// Bob's side: two-detector receiver per slot, then sifting.
class Bob {
public:
    Bob(ChannelModel channel, DetectorModel detector);

    DetectionOutcome measure(std::uint64_t arriving_photons, PolarizationState state, RandomStream& rng);

    /// Builds the raw key and returns the announcement for Alice.
    ClassicalMessage announce_sift();

    const std::vector<DetectionOutcome>& outcomes() const noexcept { return outcomes_; }
    const std::vector<std::uint64_t>& sifted_indices() const noexcept { return sifted_; }
    const BitVector& raw_key() const noexcept { return raw_key_; }

private:
    ChannelModel channel_;
    DetectorModel detector_;
    std::vector<DetectionOutcome> outcomes_;
    std::vector<std::uint64_t> sifted_;
    BitVector raw_key_;
};

/// What leaves an eavesdropper toward Bob's channel.
struct ForwardedPulse {
    std::uint64_t photons = 0;
    PolarizationState state = PolarizationState::Horizontal;
};

/// Hook placed between Alice's output and the channel.
class PulseInterceptor {
public:
    virtual ~PulseInterceptor() = default;
    virtual ForwardedPulse intercept(const PulseRecord& pulse) = 0;
};

/// Stream tags derived from the session seed.
inline constexpr std::uint64_t kAliceStreamTag = 1;
inline constexpr std::uint64_t kLinkStreamTag = 2;
inline constexpr std::uint64_t kEveStreamTag = 3;

/// Runs one seeded session. Bit-for-bit reproducible for a given config.
SessionResult run_session(const SessionConfig& config, PulseInterceptor* interceptor = nullptr);

}  // namespace qkd
