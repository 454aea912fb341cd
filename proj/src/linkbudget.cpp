#include "qkd/linkbudget.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "qkd/errors.hpp"

namespace qkd::link {
namespace {

constexpr double kPi = 3.14159265358979323846;

void unit(std::vector<std::string>& errors, const char* field, double v) {
    if (!(v >= 0.0 && v <= 1.0)) errors.push_back(std::string(field) + ": " + std::to_string(v) + " outside [0, 1]");
}

void positive(std::vector<std::string>& errors, const char* field, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) errors.push_back(std::string(field) + ": must be > 0");
}

void nonneg(std::vector<std::string>& errors, const char* field, double v) {
    if (!(v >= 0.0) || !std::isfinite(v)) errors.push_back(std::string(field) + ": must be >= 0");
}

std::string row(const char* label, double lo, double hi, const char* unit) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-34s %12.4g  %12.4g  %s\n", label, lo, hi, unit);
    return buf;
}

}  // namespace

std::string_view to_string(Direction d) noexcept { return d == Direction::Uplink ? "uplink" : "downlink"; }

std::vector<std::string> validation_errors(const SatelliteScenario& s) {
    std::vector<std::string> e;
    positive(e, "scenario.altitude_m", s.altitude_m);
    positive(e, "scenario.wavelength_m", s.wavelength_m);
    positive(e, "scenario.tx_aperture_m", s.tx_aperture_m);
    positive(e, "scenario.rx_aperture_m", s.rx_aperture_m);
    nonneg(e, "scenario.pulse_rate_hz", s.pulse_rate_hz);
    nonneg(e, "scenario.mean_photon_number", s.mean_photon_number);
    unit(e, "scenario.atmospheric_transmission", s.atmospheric_transmission);
    nonneg(e, "scenario.beam_wander_arcsec_lo", s.beam_wander_arcsec_lo);
    nonneg(e, "scenario.beam_wander_arcsec_hi", s.beam_wander_arcsec_hi);
    if (s.beam_wander_arcsec_lo > s.beam_wander_arcsec_hi) {
        e.emplace_back("scenario.beam_wander_arcsec_lo: must not exceed beam_wander_arcsec_hi");
    }
    unit(e, "scenario.detector_efficiency", s.detector_efficiency);
    unit(e, "scenario.protocol_efficiency", s.protocol_efficiency);
    unit(e, "scenario.filter_transmission", s.filter_transmission);
    unit(e, "scenario.fiber_coupling", s.fiber_coupling);
    if (!(s.tilt_correction_factor >= 1.0) || !std::isfinite(s.tilt_correction_factor)) {
        e.emplace_back("scenario.tilt_correction_factor: must be >= 1");
    }
    if (s.protocol_rate_multiplier != 1.0 && s.protocol_rate_multiplier != 2.0) {
        e.emplace_back("scenario.protocol_rate_multiplier: must be 1 (B92) or 2 (BB84)");
    }
    if (!(s.downlink_improvement >= 1.0) || !std::isfinite(s.downlink_improvement)) {
        e.emplace_back("scenario.downlink_improvement: must be >= 1");
    }
    return e;
}

std::vector<std::string> validation_errors(const BackgroundScenario& b) {
    std::vector<std::string> e;
    const std::string p = "backgrounds[" + b.name + "].";
    nonneg(e, (p + "radiance").c_str(), b.radiance);
    positive(e, (p + "fov_arcsec").c_str(), b.fov_arcsec);
    positive(e, (p + "filter_bandwidth_nm").c_str(), b.filter_bandwidth_nm);
    positive(e, (p + "gate_window_s").c_str(), b.gate_window_s);
    nonneg(e, (p + "detector_dark_rate_hz").c_str(), b.detector_dark_rate_hz);
    return e;
}

double diffraction_spot_diameter(double wavelength_m, double tx_aperture_m, double range_m) {
    if (!(wavelength_m > 0.0) || !(tx_aperture_m > 0.0) || !(range_m >= 0.0)) {
        throw std::invalid_argument("wavelength and aperture must be > 0, range >= 0");
    }
    return 2.0 * 1.22 * wavelength_m * range_m / tx_aperture_m;
}

double collection_efficiency(double beam_wander_arcsec, double range_m, double spot_diameter_m,
                             double rx_aperture_m) {
    if (!(beam_wander_arcsec >= 0.0) || !(range_m >= 0.0) || !(spot_diameter_m >= 0.0) || !(rx_aperture_m > 0.0)) {
        throw std::invalid_argument("collection efficiency inputs must be non-negative, aperture > 0");
    }
    const double footprint = spot_diameter_m + 2.0 * beam_wander_arcsec * kArcsecond * range_m;
    if (footprint <= rx_aperture_m) return 1.0;
    const double ratio = rx_aperture_m / footprint;
    return std::min(1.0, ratio * ratio);
}

RateChain key_rate_chain(const SatelliteScenario& s, double collection) {
    RateChain chain;
    chain.arrival_rate_hz = s.pulse_rate_hz * s.mean_photon_number * s.atmospheric_transmission * collection;
    chain.key_rate_hz = chain.arrival_rate_hz * s.detector_efficiency * s.protocol_efficiency *
                        s.filter_transmission * s.fiber_coupling * s.tilt_correction_factor *
                        s.protocol_rate_multiplier;
    return chain;
}

double optics_chain_efficiency(const SatelliteScenario& s) {
    return s.filter_transmission * s.fiber_coupling * s.detector_efficiency;
}

double background_count_rate(const BackgroundScenario& bg, double rx_aperture_m, double optics) {
    const double area = kPi * 0.25 * rx_aperture_m * rx_aperture_m;
    const double theta = bg.fov_arcsec * kArcsecond;
    const double solid_angle = kPi * theta * theta;
    const double bandwidth_um = bg.filter_bandwidth_nm * 1e-3;
    return bg.radiance * area * solid_angle * bandwidth_um * optics;
}

double ber_from_background(double background_rate_hz, double gate_window_s, double pulse_rate_hz,
                           double key_rate_hz) {
    if (!(key_rate_hz > 0.0)) throw std::invalid_argument("key rate must be > 0");
    const double gated = background_rate_hz * gate_window_s * pulse_rate_hz;
    return 0.5 * gated / key_rate_hz;
}

LinkBudgetReport downlink_adjustment(const LinkBudgetReport& report, double factor) {
    if (!(factor > 0.0)) throw std::invalid_argument("downlink factor must be > 0");
    LinkBudgetReport out = report;
    out.direction = Direction::Downlink;
    out.key_rate_hz_lo *= factor;
    out.key_rate_hz_hi *= factor;
    out.corrected_key_rate_hz_lo *= factor;
    out.corrected_key_rate_hz_hi *= factor;
    for (auto& bg : out.backgrounds) {
        bg.ber_lo /= factor;
        bg.ber_hi /= factor;
    }
    return out;
}

LinkBudgetReport evaluate(const SatelliteScenario& s, const std::vector<BackgroundScenario>& backgrounds) {
    auto errors = validation_errors(s);
    for (const auto& bg : backgrounds) {
        auto more = validation_errors(bg);
        errors.insert(errors.end(), more.begin(), more.end());
    }
    if (!errors.empty()) throw ConfigError(std::move(errors));

    LinkBudgetReport r;
    r.spot_diameter_m = diffraction_spot_diameter(s.wavelength_m, s.tx_aperture_m, s.altitude_m);
    // More wander spreads the beam further, so the high wander bound sets
    // the low end of every rate.
    r.collection_efficiency_lo = collection_efficiency(s.beam_wander_arcsec_hi, s.altitude_m, r.spot_diameter_m, s.rx_aperture_m);
    r.collection_efficiency_hi = collection_efficiency(s.beam_wander_arcsec_lo, s.altitude_m, r.spot_diameter_m, s.rx_aperture_m);

    SatelliteScenario untilted = s;
    untilted.tilt_correction_factor = 1.0;
    const auto lo = key_rate_chain(untilted, r.collection_efficiency_lo);
    const auto hi = key_rate_chain(untilted, r.collection_efficiency_hi);
    r.arrival_rate_hz_lo = lo.arrival_rate_hz;
    r.arrival_rate_hz_hi = hi.arrival_rate_hz;
    r.key_rate_hz_lo = lo.key_rate_hz;
    r.key_rate_hz_hi = hi.key_rate_hz;
    r.corrected_key_rate_hz_lo = key_rate_chain(s, r.collection_efficiency_lo).key_rate_hz;
    r.corrected_key_rate_hz_hi = key_rate_chain(s, r.collection_efficiency_hi).key_rate_hz;

    const double optics = optics_chain_efficiency(s);
    for (const auto& bg : backgrounds) {
        BackgroundReport b;
        b.name = bg.name;
        b.background_count_rate_hz = background_count_rate(bg, s.rx_aperture_m, optics);
        b.dark_count_rate_hz = bg.detector_dark_rate_hz;
        if (r.corrected_key_rate_hz_hi > 0.0) {
            b.ber_lo = ber_from_background(b.background_count_rate_hz, bg.gate_window_s, s.pulse_rate_hz,
                                           r.corrected_key_rate_hz_hi);
            b.ber_hi = ber_from_background(b.background_count_rate_hz, bg.gate_window_s, s.pulse_rate_hz,
                                           r.corrected_key_rate_hz_lo);
        }
        r.backgrounds.push_back(std::move(b));
    }
    if (s.direction == Direction::Downlink) r = downlink_adjustment(r, s.downlink_improvement);
    return r;
}

std::string format_table(const LinkBudgetReport& r) {
    std::string out = "link budget (" + std::string(to_string(r.direction)) + ")\n";
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-34s %12.4g  m\n", "diffraction spot diameter", r.spot_diameter_m);
    out += buf;
    std::snprintf(buf, sizeof buf, "%-34s %12s  %12s\n", "", "lo", "hi");
    out += buf;
    out += row("collection efficiency", r.collection_efficiency_lo, r.collection_efficiency_hi, "");
    out += row("arrival rate", r.arrival_rate_hz_lo, r.arrival_rate_hz_hi, "Hz");
    out += row("key rate", r.key_rate_hz_lo, r.key_rate_hz_hi, "Hz");
    out += row("key rate, tilt corrected", r.corrected_key_rate_hz_lo, r.corrected_key_rate_hz_hi, "Hz");
    for (const auto& bg : r.backgrounds) {
        std::snprintf(buf, sizeof buf, "%-34s %12.4g  %12s  Hz\n", ("background rate, " + bg.name).c_str(),
                      bg.background_count_rate_hz, "");
        out += buf;
        std::snprintf(buf, sizeof buf, "%-34s %12.4g  %12s  Hz\n", ("dark count rate, " + bg.name).c_str(),
                      bg.dark_count_rate_hz, "");
        out += buf;
        out += row(("BER, " + bg.name).c_str(), bg.ber_lo, bg.ber_hi, "");
    }
    return out;
}

}  // namespace qkd::link
