#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qkd::link {

inline constexpr double kArcsecond = 3.14159265358979323846 / (180.0 * 3600.0);

enum class Direction { Uplink, Downlink };

std::string_view to_string(Direction d) noexcept;

/// Ground <-> low-earth-orbit QKD link. Defaults are the 300-km, 772-nm
/// night uplink.
struct SatelliteScenario {
    double altitude_m = 300e3;
    double wavelength_m = 772e-9;
    double tx_aperture_m = 0.3;
    double rx_aperture_m = 0.3;
    double pulse_rate_hz = 10e6;
    double mean_photon_number = 1.0;
    double atmospheric_transmission = 0.8;
    /// Beam-wander half-angle range in arcseconds.
    double beam_wander_arcsec_lo = 2.5;
    double beam_wander_arcsec_hi = 10.0;
    double detector_efficiency = 0.65;
    double protocol_efficiency = 0.25;
    double filter_transmission = 0.7;
    double fiber_coupling = 0.4;
    double tilt_correction_factor = 100.0;
    /// 1 for B92, 2 for BB84.
    double protocol_rate_multiplier = 1.0;
    Direction direction = Direction::Uplink;
    /// Rate gain (and BER reduction) when the transmitter is in orbit.
    double downlink_improvement = 150.0;
};

struct BackgroundScenario {
    std::string name;
    /// photons s^-1 m^-2 sr^-1 um^-1
    double radiance = 4e16;
    /// Field-of-view half-angle in arcseconds.
    double fov_arcsec = 5.0;
    double filter_bandwidth_nm = 1.0;
    double gate_window_s = 1e-9;
    double detector_dark_rate_hz = 50.0;
};

std::vector<std::string> validation_errors(const SatelliteScenario& s);
std::vector<std::string> validation_errors(const BackgroundScenario& b);

struct BackgroundReport {
    std::string name;
    double background_count_rate_hz = 0.0;
    double dark_count_rate_hz = 0.0;
    /// ber_lo pairs with the highest corrected key rate.
    double ber_lo = 0.0;
    double ber_hi = 0.0;
};

struct LinkBudgetReport {
    Direction direction = Direction::Uplink;
    double spot_diameter_m = 0.0;
    double collection_efficiency_lo = 0.0;
    double collection_efficiency_hi = 0.0;
    double arrival_rate_hz_lo = 0.0;
    double arrival_rate_hz_hi = 0.0;
    /// Without tilt correction.
    double key_rate_hz_lo = 0.0;
    double key_rate_hz_hi = 0.0;
    /// With the scenario's tilt-correction factor.
    double corrected_key_rate_hz_lo = 0.0;
    double corrected_key_rate_hz_hi = 0.0;
    std::vector<BackgroundReport> backgrounds;
};

/// Full first-null (Airy) diameter 2 * 1.22 * lambda * L / D.
double diffraction_spot_diameter(double wavelength_m, double tx_aperture_m, double range_m);

/// Fraction of the beam caught by the receiver aperture. The beam footprint
/// is the diffraction spot widened by the wander excursion on both sides,
/// spot + 2 * theta * L, and the efficiency is the area ratio clamped to 1.
double collection_efficiency(double beam_wander_arcsec, double range_m, double spot_diameter_m,
                             double rx_aperture_m);

struct RateChain {
    double arrival_rate_hz = 0.0;
    double key_rate_hz = 0.0;
};

/// arrival = pulse rate * n * atmosphere * collection; key = arrival *
/// detector * protocol * filter * fiber * tilt * protocol multiplier.
RateChain key_rate_chain(const SatelliteScenario& scenario, double collection_efficiency);

/// Filter * fiber * detector, applied to background as to signal.
double optics_chain_efficiency(const SatelliteScenario& scenario);

/// radiance * aperture area * pi * theta^2 * bandwidth(um) * optics.
double background_count_rate(const BackgroundScenario& bg, double rx_aperture_m, double optics_chain_efficiency);

/// Background clicks in the gates carry a random bit, so half are errors.
double ber_from_background(double background_rate_hz, double gate_window_s, double pulse_rate_hz,
                           double key_rate_hz);

/// Key rates times `factor`, BERs divided by it.
LinkBudgetReport downlink_adjustment(const LinkBudgetReport& report, double factor = 150.0);

/// Runs the whole chain. Downlink scenarios get downlink_adjustment with the
/// scenario's improvement factor. Throws qkd::ConfigError on invalid input.
LinkBudgetReport evaluate(const SatelliteScenario& scenario, const std::vector<BackgroundScenario>& backgrounds);

/// Aligned plain-text rendering.
std::string format_table(const LinkBudgetReport& report);

}  // namespace qkd::link
