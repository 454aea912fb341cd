#include "qkd/protocol.hpp"

#include <cmath>
#include <stdexcept>

#include "qkd/errors.hpp"

namespace qkd {
namespace {

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

void check_unit(std::vector<std::string>& errors, const char* field, double v) {
    if (!in_unit(v)) errors.push_back(std::string(field) + ": " + std::to_string(v) + " outside [0, 1]");
}

void check_nonneg(std::vector<std::string>& errors, const char* field, double v) {
    if (!(v >= 0.0) || !std::isfinite(v)) errors.push_back(std::string(field) + ": must be finite and >= 0");
}

void check_efficiencies(double mean, double coupling, double detector, double protocol) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) throw std::invalid_argument("mean photon number must be >= 0");
    if (!in_unit(coupling) || !in_unit(detector) || !in_unit(protocol)) {
        throw std::invalid_argument("efficiencies must lie in [0, 1]");
    }
}

}  // namespace

std::vector<std::string> validation_errors(const SessionConfig& config) {
    std::vector<std::string> errors;
    if (config.pulse_count < 1) errors.emplace_back("pulse_count: must be >= 1");
    if (!(config.pulse_rate_hz > 0.0) || !std::isfinite(config.pulse_rate_hz)) {
        errors.emplace_back("pulse_rate_hz: must be > 0");
    }
    check_nonneg(errors, "mean_photon_number", config.mean_photon_number);
    check_unit(errors, "channel.coupling_efficiency", config.channel.coupling_efficiency);
    check_unit(errors, "channel.misalignment_flip_prob", config.channel.misalignment_flip_prob);
    check_nonneg(errors, "channel.background_rate_hz", config.channel.background_rate_hz);
    check_unit(errors, "detector.efficiency", config.detector.efficiency);
    check_nonneg(errors, "detector.dark_rate_hz", config.detector.dark_rate_hz);
    if (!(config.detector.gate_window_s > 0.0) || !std::isfinite(config.detector.gate_window_s)) {
        errors.emplace_back("detector.gate_window_s: must be > 0");
    }
    return errors;
}

void validate(const SessionConfig& config) {
    auto errors = validation_errors(config);
    if (!errors.empty()) throw ConfigError(std::move(errors));
}

PolarizationState alice_prepare(std::uint8_t bit) {
    if (bit > 1) throw std::invalid_argument("bit must be 0 or 1");
    return bit == 0 ? PolarizationState::Horizontal : PolarizationState::RightCircular;
}

std::pair<ClassicalMessage, std::vector<std::uint64_t>> sift(std::span<const DetectionOutcome> bob_outcomes) {
    std::vector<std::uint64_t> indices;
    for (std::size_t i = 0; i < bob_outcomes.size(); ++i) {
        if (bob_outcomes[i].is_conclusive()) indices.push_back(i);
    }
    return {SiftAnnounce{indices}, indices};
}

double measure_ber(std::span<const std::uint8_t> alice_raw, std::span<const std::uint8_t> bob_raw) {
    if (alice_raw.size() != bob_raw.size()) throw std::invalid_argument("raw keys differ in length");
    if (alice_raw.empty()) throw std::invalid_argument("raw keys are empty");
    return static_cast<double>(hamming_distance(alice_raw, bob_raw)) / static_cast<double>(alice_raw.size());
}

double composite_efficiency(double coupling, double detector, double protocol) {
    check_efficiencies(0.0, coupling, detector, protocol);
    return coupling * detector * protocol;
}

double theoretical_detection_probability(double mean_photon_number, double coupling, double detector,
                                         double protocol) {
    check_efficiencies(mean_photon_number, coupling, detector, protocol);
    return -std::expm1(-mean_photon_number * coupling * detector * protocol);
}

double detection_probability_series(double mean_photon_number, double coupling, double detector,
                                    double protocol) {
    check_efficiencies(mean_photon_number, coupling, detector, protocol);
    const double eta_b = coupling * detector * protocol;
    const PhotonNumberDistribution dist(mean_photon_number);
    const std::uint64_t last = dist.truncation_point(1e-15);
    const double log_miss = std::log1p(-eta_b);
    double sum = 0.0;
    for (std::uint64_t n = 1; n <= last; ++n) {
        // 1 - (1 - eta_B)^n
        const double hit = eta_b >= 1.0 ? 1.0 : -std::expm1(static_cast<double>(n) * log_miss);
        sum += dist.pmf(n) * hit;
    }
    return sum;
}

double expected_bit_rate(double pulse_rate_hz, double detection_probability) {
    if (!in_unit(detection_probability)) throw std::invalid_argument("detection probability must lie in [0, 1]");
    if (!(pulse_rate_hz >= 0.0)) throw std::invalid_argument("pulse rate must be >= 0");
    return pulse_rate_hz * detection_probability;
}

Alice::Alice(RandomStream stream, double mean_photon_number, bool force_single_photon)
    : rng_(stream), photons_(mean_photon_number), single_photon_(force_single_photon) {}

PulseRecord Alice::emit(std::uint64_t slot) {
    PulseRecord pulse;
    pulse.slot = slot;
    pulse.bit = rng_.bit();
    pulse.state = alice_prepare(pulse.bit);
    pulse.photons = single_photon_ ? 1 : photons_.sample(rng_);
    sent_.push_back(pulse.bit);
    return pulse;
}

void Alice::receive(const ClassicalMessage& message) {
    const auto* announce = std::get_if<SiftAnnounce>(&message);
    if (announce == nullptr) return;
    raw_key_.clear();
    raw_key_.reserve(announce->indices.size());
    for (auto i : announce->indices) {
        if (i >= sent_.size()) throw std::out_of_range("sift announcement names an unsent slot");
        raw_key_.push_back(sent_[i]);
    }
}

Bob::Bob(ChannelModel channel, DetectorModel detector) : channel_(channel), detector_(detector) {}

DetectionOutcome Bob::measure(std::uint64_t arriving_photons, PolarizationState state, RandomStream& rng) {
    const auto outcome = detect_slot(arriving_photons, state, channel_, detector_, rng);
    outcomes_.push_back(outcome);
    return outcome;
}

ClassicalMessage Bob::announce_sift() {
    auto [message, indices] = sift(outcomes_);
    sifted_ = std::move(indices);
    raw_key_.clear();
    raw_key_.reserve(sifted_.size());
    for (auto i : sifted_) raw_key_.push_back(outcomes_[i].bit);
    return message;
}

SessionResult run_session(const SessionConfig& config, PulseInterceptor* interceptor) {
    validate(config);

    const RandomStream base(config.seed);
    RandomStream link = base.derive(kLinkStreamTag);
    Alice alice(base.derive(kAliceStreamTag), config.mean_photon_number, config.force_single_photon);
    Bob bob(config.channel, config.detector);

    SessionResult result;
    if (config.keep_trace) result.trace.reserve(config.pulse_count);

    for (std::uint64_t slot = 0; slot < config.pulse_count; ++slot) {
        const PulseRecord pulse = alice.emit(slot);
        const ForwardedPulse forwarded =
            interceptor ? interceptor->intercept(pulse) : ForwardedPulse{pulse.photons, pulse.state};
        const std::uint64_t arriving = transmit(forwarded.photons, config.channel, link);
        const DetectionOutcome outcome = bob.measure(arriving, forwarded.state, link);
        if (config.keep_trace) result.trace.push_back({pulse, arriving, outcome});
    }

    ClassicalChannel public_channel;
    public_channel.send(bob.announce_sift());
    while (auto message = public_channel.receive()) alice.receive(*message);

    result.alice_raw_key = alice.raw_key();
    result.bob_raw_key = bob.raw_key();
    result.sifted_indices = bob.sifted_indices();

    auto& counts = result.counts;
    counts.pulses = config.pulse_count;
    for (const auto& o : bob.outcomes()) {
        if (o.any_click()) ++counts.detected_slots;
        if (o.kind == DetectionOutcome::Kind::DualFire) ++result.dual_fire_count;
        if (!o.is_conclusive()) continue;
        ++counts.conclusive;
        switch (o.cause) {
            case ClickCause::Signal: ++counts.signal_clicks; break;
            case ClickCause::Background: ++result.background_click_count; break;
            case ClickCause::Dark: ++result.dark_click_count; break;
        }
    }
    counts.bit_errors = hamming_distance(result.alice_raw_key, result.bob_raw_key);

    result.duration_s = static_cast<double>(config.pulse_count) / config.pulse_rate_hz;
    result.sifted_rate_hz = static_cast<double>(result.sifted_indices.size()) / result.duration_s;
    result.ber = result.alice_raw_key.empty() ? 0.0 : measure_ber(result.alice_raw_key, result.bob_raw_key);
    return result;
}

}  // namespace qkd
