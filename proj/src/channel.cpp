#include "qkd/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qkd {
namespace {

void require_probability(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
}

void require_rate(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be >= 0");
}

}  // namespace

void validate(const ChannelModel& channel) {
    require_probability(channel.coupling_efficiency, "coupling_efficiency");
    require_probability(channel.misalignment_flip_prob, "misalignment_flip_prob");
    require_rate(channel.background_rate_hz, "background_rate_hz");
}

void validate(const DetectorModel& detector) {
    require_probability(detector.efficiency, "detector efficiency");
    require_rate(detector.dark_rate_hz, "dark_rate_hz");
    if (!(detector.gate_window_s > 0.0) || !std::isfinite(detector.gate_window_s)) {
        throw std::invalid_argument("gate_window_s must be > 0");
    }
}

std::string_view to_string(DetectionOutcome::Kind k) noexcept {
    switch (k) {
        case DetectionOutcome::Kind::NoClick: return "no_click";
        case DetectionOutcome::Kind::Conclusive: return "conclusive";
        case DetectionOutcome::Kind::DualFire: return "dual_fire";
    }
    return "?";
}

std::string_view to_string(ClickCause c) noexcept {
    switch (c) {
        case ClickCause::Signal: return "signal";
        case ClickCause::Background: return "background";
        case ClickCause::Dark: return "dark";
    }
    return "?";
}

std::uint64_t thin(std::uint64_t photon_count, double survival, RandomStream& rng) {
    if (survival >= 1.0) return photon_count;
    if (survival <= 0.0) return 0;
    std::uint64_t kept = 0;
    for (std::uint64_t i = 0; i < photon_count; ++i) kept += rng.bernoulli(survival);
    return kept;
}

std::uint64_t transmit(std::uint64_t photon_count, const ChannelModel& channel, RandomStream& rng) {
    return thin(photon_count, channel.coupling_efficiency, rng);
}

std::optional<AnalyzerSetting> route_photon(PolarizationState state, AnalyzerSetting analyzer,
                                            const ChannelModel& channel,
                                            const DetectorModel& detector, RandomStream& rng) {
    const double p = passage_probability(state, analyzer) * detector.efficiency;
    if (!(p > 0.0) || !rng.bernoulli(p)) return std::nullopt;
    if (channel.misalignment_flip_prob > 0.0 && rng.bernoulli(channel.misalignment_flip_prob)) {
        return other(analyzer);
    }
    return analyzer;
}

NoiseProbabilities per_gate_noise(const ChannelModel& channel, const DetectorModel& detector) noexcept {
    return {std::min(1.0, 0.5 * channel.background_rate_hz * detector.gate_window_s),
            std::min(1.0, detector.dark_rate_hz * detector.gate_window_s)};
}

DetectionOutcome detect_slot(std::uint64_t arriving_photons, PolarizationState alice_state,
                             const ChannelModel& channel, const DetectorModel& detector,
                             RandomStream& rng) {
    // Index 0 is the TestForOne detector, 1 the TestForZero detector.
    bool signal[2] = {false, false};
    for (std::uint64_t i = 0; i < arriving_photons; ++i) {
        const auto arm = route_photon(alice_state, bob_choose_analyzer(rng), channel, detector, rng);
        if (arm) signal[*arm == AnalyzerSetting::TestForOne ? 0 : 1] = true;
    }

    const auto noise = per_gate_noise(channel, detector);
    bool background[2] = {false, false};
    bool dark[2] = {false, false};
    for (int d = 0; d < 2; ++d) {
        if (noise.background > 0.0) background[d] = rng.bernoulli(noise.background);
        if (noise.dark > 0.0) dark[d] = rng.bernoulli(noise.dark);
    }

    const bool fired[2] = {signal[0] || background[0] || dark[0], signal[1] || background[1] || dark[1]};
    if (fired[0] && fired[1]) return DetectionOutcome::dual_fire();
    if (!fired[0] && !fired[1]) return DetectionOutcome::no_click();

    const int d = fired[0] ? 0 : 1;
    const ClickCause cause = signal[d] ? ClickCause::Signal
                             : background[d] ? ClickCause::Background
                                             : ClickCause::Dark;
    return DetectionOutcome::conclusive(d == 0 ? 1 : 0, cause);
}

double expected_noise_click_rate(double noise_rate_hz, double gate_window_s, double pulse_rate_hz) {
    if (noise_rate_hz < 0.0 || gate_window_s < 0.0 || pulse_rate_hz < 0.0) {
        throw std::invalid_argument("noise rate, gate window and pulse rate must be >= 0");
    }
    return noise_rate_hz * gate_window_s * pulse_rate_hz;
}

double dual_fire_probability(double mean_photon_number, const ChannelModel& channel,
                             const DetectorModel& detector) {
    if (!(mean_photon_number >= 0.0)) throw std::invalid_argument("mean photon number must be >= 0");
    // A photon reaches a passing analyzer with probability 1/2 * 1/2.
    const double lambda =
        mean_photon_number * channel.coupling_efficiency * detector.efficiency * 0.25;
    const double f = channel.misalignment_flip_prob;
    const auto noise = per_gate_noise(channel, detector);
    const double quiet = (1.0 - noise.background) * (1.0 - noise.dark);
    const double right = 1.0 - std::exp(-lambda * (1.0 - f)) * quiet;
    const double wrong = 1.0 - std::exp(-lambda * f) * quiet;
    return right * wrong;
}

MeanPhotonEstimate estimate_mean_photons_from_dualfire(std::uint64_t dual_fire_count,
                                                       std::uint64_t gate_count,
                                                       const ChannelModel& channel,
                                                       const DetectorModel& detector) {
    if (gate_count < 10'000) throw std::invalid_argument("need at least 10^4 gates");
    if (dual_fire_count > gate_count) throw std::invalid_argument("more dual-fires than gates");

    const double floor = dual_fire_probability(0.0, channel, detector);
    const double ceiling = dual_fire_probability(1e12, channel, detector);
    if (!(ceiling > floor)) {
        throw std::domain_error("receiver cannot produce dual-fires; mean photon number unobservable");
    }

    const double n = static_cast<double>(gate_count);
    MeanPhotonEstimate est;
    double target = static_cast<double>(dual_fire_count) / n;
    if (dual_fire_count == 0) {
        est.upper_bound_only = true;
        target = -std::expm1(std::log(0.05) / n);  // 95% one-sided
    }
    if (target <= floor) return est;
    if (target >= ceiling) throw std::domain_error("dual-fire rate above what any mean can produce");

    double lo = 0.0;
    double hi = 1.0;
    while (dual_fire_probability(hi, channel, detector) < target) hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (dual_fire_probability(mid, channel, detector) < target ? lo : hi) = mid;
    }
    est.mean_photon_number = 0.5 * (lo + hi);
    return est;
}

}  // namespace qkd
