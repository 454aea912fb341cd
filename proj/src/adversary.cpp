#include "qkd/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qkd/errors.hpp"

namespace qkd {
namespace {

void check_ranges(double mean, double eve_eff, double bob_eff, double reflectivity) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) throw std::invalid_argument("mean photon number must be >= 0");
    for (double p : {eve_eff, bob_eff, reflectivity}) {
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("efficiencies and R must lie in [0, 1]");
    }
}

std::uint64_t count_shared(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    std::uint64_t n = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++n, ++i, ++j;
        }
    }
    return n;
}

double z_score(double count_a, double duration_a, double count_b, double duration_b) {
    // (rate_a - rate_b) over the Poisson error of the difference.
    const double var = count_a / (duration_a * duration_a) + count_b / (duration_b * duration_b);
    if (var <= 0.0) return 0.0;
    return (count_a / duration_a - count_b / duration_b) / std::sqrt(var);
}

}  // namespace

std::string_view to_string(ResendStrategy s) noexcept {
    switch (s) {
        case ResendStrategy::SingleWhenIdentified: return "single";
        case ResendStrategy::DimPulse: return "dim";
        case ResendStrategy::BrightPulse: return "bright";
    }
    return "?";
}

std::vector<std::string> validation_errors(const AttackConfig& attack) {
    std::vector<std::string> errors;
    auto check_eve = [&](double eta) {
        if (!(eta >= 0.0 && eta <= kIdealEveEfficiency)) {
            errors.emplace_back("attack.eve_efficiency: " + std::to_string(eta) + " outside [0, 0.25]");
        }
    };
    if (const auto* op = std::get_if<OpaqueAttackConfig>(&attack)) {
        check_eve(op->eve_efficiency);
        if (!(op->resend_mean >= 0.0) || !std::isfinite(op->resend_mean)) {
            errors.emplace_back("attack.resend_mean: must be finite and >= 0");
        }
        if (op->strategy == ResendStrategy::BrightPulse && !(op->resend_mean >= 10.0)) {
            errors.emplace_back("attack.resend_mean: a bright pulse needs a mean >= 10");
        }
    } else {
        const auto& bs = std::get<BeamsplitterAttackConfig>(attack);
        check_eve(bs.eve_efficiency);
        if (!(bs.reflectivity >= 0.0 && bs.reflectivity <= 1.0)) {
            errors.emplace_back("attack.reflectivity: " + std::to_string(bs.reflectivity) + " outside [0, 1]");
        }
    }
    return errors;
}

double beamsplitter_joint_probability(double mean_photon_number, double eve_efficiency,
                                      double bob_efficiency, double reflectivity) {
    check_ranges(mean_photon_number, eve_efficiency, bob_efficiency, reflectivity);
    const double t = 1.0 - reflectivity;
    return -std::expm1(-mean_photon_number * eve_efficiency * reflectivity) *
           -std::expm1(-mean_photon_number * bob_efficiency * t);
}

double eve_knowledge_fraction(double mean_photon_number, double eve_efficiency, double bob_efficiency,
                              double reflectivity) {
    check_ranges(mean_photon_number, eve_efficiency, bob_efficiency, reflectivity);
    const double p_bob = -std::expm1(-mean_photon_number * bob_efficiency * (1.0 - reflectivity));
    if (!(p_bob > 0.0)) throw std::domain_error("Bob detects nothing (T = 0, n = 0 or eta_B = 0)");
    return beamsplitter_joint_probability(mean_photon_number, eve_efficiency, bob_efficiency, reflectivity) /
           p_bob;
}

double eve_knowledge_fraction_reduced(double mean_photon_number, double eve_efficiency, double reflectivity) {
    check_ranges(mean_photon_number, eve_efficiency, 0.0, reflectivity);
    return -std::expm1(-mean_photon_number * eve_efficiency * reflectivity);
}

EveReceiver eve_receiver(double eve_efficiency) {
    EveReceiver r;
    r.channel = ChannelModel{1.0, 0.0, 0.0};
    r.detector = DetectorModel{eve_efficiency / kB92ProtocolEfficiency, 0.0, 1e-9};
    return r;
}

OpaqueInterceptor::OpaqueInterceptor(OpaqueAttackConfig config, RandomStream stream)
    : config_(config),
      receiver_(eve_receiver(config.eve_efficiency)),
      resend_(config.strategy == ResendStrategy::SingleWhenIdentified ? 1.0 : config.resend_mean),
      rng_(stream) {}

ForwardedPulse OpaqueInterceptor::intercept(const PulseRecord& pulse) {
    const auto seen = detect_slot(pulse.photons, pulse.state, receiver_.channel, receiver_.detector, rng_);
    if (!seen.is_conclusive()) return {0, pulse.state};
    conclusive_.push_back(pulse.slot);
    const PolarizationState resent = alice_prepare(seen.bit);
    if (config_.strategy == ResendStrategy::SingleWhenIdentified) return {1, resent};
    return {resend_.sample(rng_), resent};
}

BeamsplitterInterceptor::BeamsplitterInterceptor(BeamsplitterAttackConfig config, RandomStream stream)
    : config_(config), receiver_(eve_receiver(config.eve_efficiency)), rng_(stream) {}

ForwardedPulse BeamsplitterInterceptor::intercept(const PulseRecord& pulse) {
    last_tapped_ = thin(pulse.photons, config_.reflectivity, rng_);
    const auto seen = detect_slot(last_tapped_, pulse.state, receiver_.channel, receiver_.detector, rng_);
    if (seen.is_conclusive()) conclusive_.push_back(pulse.slot);
    return {pulse.photons - last_tapped_, pulse.state};
}

AttackResult run_attacked_session(const SessionConfig& session, const AttackConfig& attack) {
    validate(session);
    if (auto errors = validation_errors(attack); !errors.empty()) throw ConfigError(std::move(errors));

    const RandomStream eve_stream = RandomStream(session.seed).derive(kEveStreamTag);
    AttackResult result;
    if (const auto* op = std::get_if<OpaqueAttackConfig>(&attack)) {
        OpaqueInterceptor eve(*op, eve_stream);
        result.bob_session = run_session(session, &eve);
        result.eve_conclusive_indices = eve.conclusive_slots();
    } else {
        BeamsplitterInterceptor eve(std::get<BeamsplitterAttackConfig>(attack), eve_stream);
        result.bob_session = run_session(session, &eve);
        result.eve_conclusive_indices = eve.conclusive_slots();
    }
    const auto& bob_sifted = result.bob_session.sifted_indices;
    result.shared_with_bob = count_shared(result.eve_conclusive_indices, bob_sifted);
    result.knowledge_fraction =
        bob_sifted.empty() ? 0.0
                           : static_cast<double>(result.shared_with_bob) / static_cast<double>(bob_sifted.size());
    return result;
}

AttackSignature compare_to_baseline(const SessionResult& baseline, const SessionResult& attacked) {
    AttackSignature s;
    const double tb = baseline.duration_s;
    const double ta = attacked.duration_s;
    const double sifted_b = static_cast<double>(baseline.sifted_indices.size());
    const double sifted_a = static_cast<double>(attacked.sifted_indices.size());
    const double dual_b = static_cast<double>(baseline.dual_fire_count);
    const double dual_a = static_cast<double>(attacked.dual_fire_count);
    s.baseline_sifted_rate_hz = sifted_b / tb;
    s.attacked_sifted_rate_hz = sifted_a / ta;
    s.baseline_dual_fire_rate_hz = dual_b / tb;
    s.attacked_dual_fire_rate_hz = dual_a / ta;
    s.rate_drop_sigma = z_score(sifted_b, tb, sifted_a, ta);
    s.dual_fire_rise_sigma = z_score(dual_a, ta, dual_b, tb);
    return s;
}

}  // namespace qkd
