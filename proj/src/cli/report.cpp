#include "qkd/cli/report.hpp"

#include <cmath>

namespace qkd::cli {
namespace {

Json header(std::string_view command) {
    return Json{{"version", std::string(kVersion)}, {"command", std::string(command)}};
}

Json session_body(const SessionConfig& config, const SessionResult& r) {
    const double p_b = theoretical_detection_probability(config.mean_photon_number, config.channel.coupling_efficiency,
                                                         config.detector.efficiency);
    const double rate = config.pulse_rate_hz;
    const double gate = config.detector.gate_window_s;
    return Json{
        {"sifted_rate_hz", r.sifted_rate_hz},
        {"ber", r.ber},
        {"dual_fire_count", r.dual_fire_count},
        {"duration_s", r.duration_s},
        {"counts",
         {{"pulses", r.counts.pulses},
          {"detected_slots", r.counts.detected_slots},
          {"sifted", r.sifted_indices.size()},
          {"signal", r.counts.signal_clicks},
          {"background", r.background_click_count},
          {"dark", r.dark_click_count},
          {"dual_fire", r.dual_fire_count},
          {"bit_errors", r.counts.bit_errors}}},
        {"theory",
         {{"composite_efficiency", composite_efficiency(config.channel.coupling_efficiency, config.detector.efficiency)},
          {"detection_probability", p_b},
          {"expected_bit_rate_hz", expected_bit_rate(rate, p_b)},
          {"background_click_rate_hz", expected_noise_click_rate(config.channel.background_rate_hz, gate, rate)},
          {"dark_click_rate_hz_per_detector", expected_noise_click_rate(config.detector.dark_rate_hz, gate, rate)},
          {"dual_fire_probability", dual_fire_probability(config.mean_photon_number, config.channel, config.detector)}}},
    };
}

}  // namespace

Json session_report(const SessionConfig& config, const SessionResult& result) {
    Json j = header("session");
    j["config"] = to_json(config);
    j.update(session_body(config, result));
    return j;
}

Json attack_report(const AttackDocument& doc, const AttackResult& attacked, const SessionResult& baseline) {
    Json j = header("attack");
    Json config = to_json(doc.session);
    config["attack"] = to_json(doc.attack);
    j["config"] = config;
    j.update(session_body(doc.session, attacked.bob_session));

    const auto sig = compare_to_baseline(baseline, attacked.bob_session);
    Json section = to_json(doc.attack);
    section["eve_conclusive_count"] = attacked.eve_conclusive_indices.size();
    section["shared_with_bob"] = attacked.shared_with_bob;
    section["knowledge_fraction"] = attacked.knowledge_fraction;
    if (const auto* bs = std::get_if<BeamsplitterAttackConfig>(&doc.attack)) {
        const double eta_b = composite_efficiency(doc.session.channel.coupling_efficiency, doc.session.detector.efficiency);
        const double n = doc.session.mean_photon_number;
        section["joint_probability"] = beamsplitter_joint_probability(n, bs->eve_efficiency, eta_b, bs->reflectivity);
        section["knowledge_fraction_closed_form"] =
            (n > 0.0 && bs->reflectivity < 1.0 && eta_b > 0.0)
                ? Json(eve_knowledge_fraction(n, bs->eve_efficiency, eta_b, bs->reflectivity))
                : Json(nullptr);
    }
    section["baseline"] = {{"sifted_rate_hz", sig.baseline_sifted_rate_hz},
                           {"dual_fire_count", baseline.dual_fire_count},
                           {"ber", baseline.ber}};
    section["deltas"] = {{"sifted_rate_hz", sig.attacked_sifted_rate_hz - sig.baseline_sifted_rate_hz},
                         {"dual_fire_rate_hz", sig.attacked_dual_fire_rate_hz - sig.baseline_dual_fire_rate_hz},
                         {"rate_drop_sigma", sig.rate_drop_sigma},
                         {"dual_fire_rise_sigma", sig.dual_fire_rise_sigma}};
    j["attack"] = section;
    return j;
}

Json reconcile_report(const ParityBlockConfig& config, std::size_t key_length, const ReconciliationResult& r,
                      std::size_t initial_disagreements) {
    Json j = header("reconcile");
    j["config"] = to_json(config);
    j["key_length"] = key_length;
    j["initial_disagreements"] = initial_disagreements;
    j["corrections"] = r.corrections;
    j["converged"] = r.converged;
    j["failed_checks"] = r.failed_checks;
    j["residual_error_estimate"] = r.residual_error_estimate;
    j["disclosed_bit_equivalents"] = r.disclosed_bit_equivalents;
    j["disclosure"] = {{"grid_parities", r.grid_parities},
                       {"bisection_parities", r.bisection_parities},
                       {"check_parities", r.check_parities}};
    j["corrected_key_length"] = r.corrected_key.size();
    return j;
}

Json linkbudget_report(const LinkBudgetDocument& doc, const link::LinkBudgetReport& r) {
    Json j = header("linkbudget");
    j["config"] = to_json(doc);
    j["direction"] = std::string(link::to_string(r.direction));
    j["spot_diameter_m"] = r.spot_diameter_m;
    j["collection_efficiency_lo"] = r.collection_efficiency_lo;
    j["collection_efficiency_hi"] = r.collection_efficiency_hi;
    j["arrival_rate_hz_lo"] = r.arrival_rate_hz_lo;
    j["arrival_rate_hz_hi"] = r.arrival_rate_hz_hi;
    j["key_rate_hz_lo"] = r.key_rate_hz_lo;
    j["key_rate_hz_hi"] = r.key_rate_hz_hi;
    j["corrected_key_rate_hz_lo"] = r.corrected_key_rate_hz_lo;
    j["corrected_key_rate_hz_hi"] = r.corrected_key_rate_hz_hi;
    Json bgs = Json::array();
    for (const auto& b : r.backgrounds) {
        bgs.push_back({{"name", b.name},
                       {"background_count_rate_hz", b.background_count_rate_hz},
                       {"dark_count_rate_hz", b.dark_count_rate_hz},
                       {"ber_lo", b.ber_lo},
                       {"ber_hi", b.ber_hi}});
    }
    j["backgrounds"] = bgs;
    return j;
}

std::string trace_csv(const SessionResult& result) {
    std::string out = "slot,alice_bit,state,photons,arriving,outcome,bob_bit,cause\n";
    for (const auto& t : result.trace) {
        out += std::to_string(t.pulse.slot) + ',' + std::to_string(t.pulse.bit) + ',' +
               std::string(to_string(t.pulse.state)) + ',' + std::to_string(t.pulse.photons) + ',' +
               std::to_string(t.arriving_photons) + ',' + std::string(to_string(t.outcome.kind)) + ',';
        if (t.outcome.is_conclusive()) {
            out += std::to_string(t.outcome.bit) + ',' + std::string(to_string(t.outcome.cause));
        } else {
            out += ',';
        }
        out += '\n';
    }
    return out;
}

std::string render(const Json& report) { return report.dump(2) + "\n"; }

}  // namespace qkd::cli
