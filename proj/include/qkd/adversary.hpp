#pragma once

#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "qkd/protocol.hpp"

namespace qkd {

/// Eve's perfect efficiency: the protocol factor alone.
inline constexpr double kIdealEveEfficiency = kB92ProtocolEfficiency;

enum class ResendStrategy : std::uint8_t { SingleWhenIdentified, DimPulse, BrightPulse };

std::string_view to_string(ResendStrategy s) noexcept;

/// Intercept-resend: Eve measures every pulse with a receiver like Bob's and
/// resends the identified state on conclusive slots only.
struct OpaqueAttackConfig {
    ResendStrategy strategy = ResendStrategy::SingleWhenIdentified;
    /// Poisson mean of the resent pulse for DimPulse and BrightPulse.
    double resend_mean = 1.0;
    /// Composite efficiency including the protocol factor, so at most 0.25.
    double eve_efficiency = kIdealEveEfficiency;
};

/// Passive tap: a beamsplitter of reflectivity R sends photons to a
/// receiver identical to Bob's; the rest continue to Bob.
struct BeamsplitterAttackConfig {
    double reflectivity = 0.5;
    double eve_efficiency = kIdealEveEfficiency;

    double transmissivity() const noexcept { return 1.0 - reflectivity; }
};

using AttackConfig = std::variant<OpaqueAttackConfig, BeamsplitterAttackConfig>;

std::vector<std::string> validation_errors(const AttackConfig& attack);

struct AttackResult {
    SessionResult bob_session;
    std::vector<std::uint64_t> eve_conclusive_indices;
    /// Bob's sifted slots on which Eve also had a conclusive result.
    std::uint64_t shared_with_bob = 0;
    /// shared_with_bob / |Bob sifted|, 0 when Bob sifted nothing.
    double knowledge_fraction = 0.0;
};

/// Probability that Eve and Bob both detect a photon from the same pulse:
/// (1 - exp(-n eta_E R)) (1 - exp(-n eta_B T)).
double beamsplitter_joint_probability(double mean_photon_number, double eve_efficiency,
                                      double bob_efficiency, double reflectivity);

/// P_{B and E} / P_B. Throws std::domain_error when Bob cannot detect
/// anything (T = 0 or n = 0).
double eve_knowledge_fraction(double mean_photon_number, double eve_efficiency,
                              double bob_efficiency, double reflectivity);

/// The same ratio after cancelling Bob's factor: 1 - exp(-n eta_E R).
double eve_knowledge_fraction_reduced(double mean_photon_number, double eve_efficiency,
                                      double reflectivity);

/// Eve's ideal receiver at the given composite efficiency.
struct EveReceiver {
    ChannelModel channel;
    DetectorModel detector;
};
EveReceiver eve_receiver(double eve_efficiency);

/// Interceptors used by run_attacked_session, exposed for direct testing.
class OpaqueInterceptor final : public PulseInterceptor {
public:
    OpaqueInterceptor(OpaqueAttackConfig config, RandomStream stream);
    ForwardedPulse intercept(const PulseRecord& pulse) override;
    const std::vector<std::uint64_t>& conclusive_slots() const noexcept { return conclusive_; }

private:
    OpaqueAttackConfig config_;
    EveReceiver receiver_;
    PhotonNumberDistribution resend_;
    RandomStream rng_;
    std::vector<std::uint64_t> conclusive_;
};

class BeamsplitterInterceptor final : public PulseInterceptor {
public:
    BeamsplitterInterceptor(BeamsplitterAttackConfig config, RandomStream stream);
    ForwardedPulse intercept(const PulseRecord& pulse) override;
    const std::vector<std::uint64_t>& conclusive_slots() const noexcept { return conclusive_; }
    /// Photons Eve received on the most recent pulse.
    std::uint64_t last_tapped() const noexcept { return last_tapped_; }

private:
    BeamsplitterAttackConfig config_;
    EveReceiver receiver_;
    RandomStream rng_;
    std::vector<std::uint64_t> conclusive_;
    std::uint64_t last_tapped_ = 0;
};

/// Runs the session with Eve in place. Alice's stream is the one an
/// unattacked run with the same config would use, so results pair with a
/// baseline run_session(config).
AttackResult run_attacked_session(const SessionConfig& session, const AttackConfig& attack);

/// Observable attack signatures against a baseline, as z-scores under
/// Poisson counting errors. Positive values point toward an attack.
struct AttackSignature {
    double baseline_sifted_rate_hz = 0.0;
    double attacked_sifted_rate_hz = 0.0;
    double baseline_dual_fire_rate_hz = 0.0;
    double attacked_dual_fire_rate_hz = 0.0;
    double rate_drop_sigma = 0.0;
    double dual_fire_rise_sigma = 0.0;
};

AttackSignature compare_to_baseline(const SessionResult& baseline, const SessionResult& attacked);

}  // namespace qkd
