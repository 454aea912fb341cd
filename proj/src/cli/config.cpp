#include "qkd/cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "qkd/errors.hpp"

namespace qkd::cli {
namespace {

/// Typed reads from one JSON object with error aggregation and an
/// unknown-field check at the end.
class FieldReader {
public:
    FieldReader(const Json& object, std::string path, std::vector<std::string>& errors)
        : object_(object), path_(std::move(path)), errors_(errors) {
        if (!object_.is_object()) {
            fail("", "expected a JSON object");
            valid_ = false;
        }
    }

    void number(const char* key, double& out) {
        if (const Json* v = get(key)) {
            if (v->is_number()) {
                out = v->get<double>();
            } else {
                fail(key, "expected a number");
            }
        }
    }

    void count(const char* key, std::uint64_t& out) {
        if (const Json* v = get(key)) {
            if (v->is_number_unsigned()) {
                out = v->get<std::uint64_t>();
            } else if (v->is_number_integer()) {
                fail(key, "must be >= 0, got " + v->dump());
            } else {
                fail(key, "expected a non-negative integer");
            }
        }
    }

    void boolean(const char* key, bool& out) {
        if (const Json* v = get(key)) {
            if (v->is_boolean()) {
                out = v->get<bool>();
            } else {
                fail(key, "expected true or false");
            }
        }
    }

    void text(const char* key, std::string& out) {
        if (const Json* v = get(key)) {
            if (v->is_string()) {
                out = v->get<std::string>();
            } else {
                fail(key, "expected a string");
            }
        }
    }

    /// Nested object or array, marked as consumed.
    const Json* child(const char* key) { return get(key); }

    void fail(const std::string& key, const std::string& message) {
        errors_.push_back(qualified(key) + ": " + message);
    }

    std::string qualified(const std::string& key) const {
        if (path_.empty()) return key.empty() ? "<document>" : key;
        return key.empty() ? path_ : path_ + "." + key;
    }

    /// Rejects every key that was never read.
    void finish() {
        if (!valid_) return;
        for (const auto& [key, _] : object_.items()) {
            if (!seen_.contains(key)) fail(key, "unknown field");
        }
    }

private:
    const Json* get(const char* key) {
        if (!valid_) return nullptr;
        seen_.insert(key);
        const auto it = object_.find(key);
        return it == object_.end() ? nullptr : &*it;
    }

    const Json& object_;
    std::string path_;
    std::vector<std::string>& errors_;
    std::set<std::string> seen_;
    bool valid_ = true;
};

void read_session_fields(FieldReader& r, SessionConfig& c, std::vector<std::string>& errors) {
    r.count("pulse_count", c.pulse_count);
    r.number("pulse_rate_hz", c.pulse_rate_hz);
    r.number("mean_photon_number", c.mean_photon_number);
    r.count("seed", c.seed);
    r.boolean("force_single_photon", c.force_single_photon);
    if (const Json* ch = r.child("channel")) {
        FieldReader cr(*ch, "channel", errors);
        cr.number("coupling_efficiency", c.channel.coupling_efficiency);
        cr.number("misalignment_flip_prob", c.channel.misalignment_flip_prob);
        cr.number("background_rate_hz", c.channel.background_rate_hz);
        cr.finish();
    }
    if (const Json* det = r.child("detector")) {
        FieldReader dr(*det, "detector", errors);
        dr.number("efficiency", c.detector.efficiency);
        dr.number("dark_rate_hz", c.detector.dark_rate_hz);
        dr.number("gate_window_s", c.detector.gate_window_s);
        dr.finish();
    }
}

void append(std::vector<std::string>& to, std::vector<std::string> from) {
    to.insert(to.end(), std::make_move_iterator(from.begin()), std::make_move_iterator(from.end()));
}

}  // namespace

Json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError({path.string() + ": cannot open file"});
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return Json::parse(buffer.str());
    } catch (const Json::parse_error& e) {
        throw ConfigError({path.string() + ": " + e.what()});
    }
}

SessionConfig validate_session_config(const Json& document) {
    std::vector<std::string> errors;
    SessionConfig config;
    FieldReader r(document, "", errors);
    read_session_fields(r, config, errors);
    r.finish();
    append(errors, validation_errors(config));
    if (!errors.empty()) throw ConfigError(std::move(errors));
    return config;
}

AttackDocument validate_attack_config(const Json& document) {
    std::vector<std::string> errors;
    AttackDocument doc;
    FieldReader r(document, "", errors);
    read_session_fields(r, doc.session, errors);
    const Json* attack = r.child("attack");
    r.finish();
    if (attack == nullptr) {
        errors.emplace_back("attack: missing attack section");
    } else {
        FieldReader ar(*attack, "attack", errors);
        std::string type = "opaque";
        ar.text("type", type);
        if (type == "opaque") {
            OpaqueAttackConfig op;
            std::string strategy = "single";
            ar.text("strategy", strategy);
            ar.number("resend_mean", op.resend_mean);
            ar.number("eve_efficiency", op.eve_efficiency);
            if (strategy == "single") {
                op.strategy = ResendStrategy::SingleWhenIdentified;
            } else if (strategy == "dim") {
                op.strategy = ResendStrategy::DimPulse;
            } else if (strategy == "bright") {
                op.strategy = ResendStrategy::BrightPulse;
                if (!attack->contains("resend_mean")) op.resend_mean = 1000.0;
            } else {
                ar.fail("strategy", "expected single, dim or bright, got \"" + strategy + "\"");
            }
            doc.attack = op;
        } else if (type == "beamsplitter") {
            BeamsplitterAttackConfig bs;
            ar.number("reflectivity", bs.reflectivity);
            ar.number("eve_efficiency", bs.eve_efficiency);
            doc.attack = bs;
        } else {
            ar.fail("type", "expected opaque or beamsplitter, got \"" + type + "\"");
        }
        ar.finish();
    }
    append(errors, validation_errors(doc.session));
    append(errors, validation_errors(doc.attack));
    if (!errors.empty()) throw ConfigError(std::move(errors));
    return doc;
}

ParityBlockConfig validate_parity_config(const Json& document) {
    std::vector<std::string> errors;
    ParityBlockConfig c;
    FieldReader r(document, "", errors);
    r.count("rows", c.rows);
    r.count("cols", c.cols);
    r.count("passes", c.passes);
    r.count("shuffle_seed", c.shuffle_seed);
    r.count("final_checks", c.final_checks);
    r.finish();
    if (errors.empty()) {
        if (c.rows < 1) errors.emplace_back("rows: must be >= 1");
        if (c.cols < 1) errors.emplace_back("cols: must be >= 1");
        if (c.passes < 1) errors.emplace_back("passes: must be >= 1");
        if (c.final_checks > 1000) errors.emplace_back("final_checks: must be <= 1000");
    }
    if (!errors.empty()) throw ConfigError(std::move(errors));
    return c;
}

LinkBudgetDocument validate_linkbudget_config(const Json& document) {
    std::vector<std::string> errors;
    LinkBudgetDocument doc;
    FieldReader r(document, "", errors);
    if (const Json* sc = r.child("scenario")) {
        auto& s = doc.scenario;
        FieldReader sr(*sc, "scenario", errors);
        sr.number("altitude_m", s.altitude_m);
        sr.number("wavelength_m", s.wavelength_m);
        sr.number("tx_aperture_m", s.tx_aperture_m);
        sr.number("rx_aperture_m", s.rx_aperture_m);
        sr.number("pulse_rate_hz", s.pulse_rate_hz);
        sr.number("mean_photon_number", s.mean_photon_number);
        sr.number("atmospheric_transmission", s.atmospheric_transmission);
        sr.number("beam_wander_arcsec_lo", s.beam_wander_arcsec_lo);
        sr.number("beam_wander_arcsec_hi", s.beam_wander_arcsec_hi);
        sr.number("detector_efficiency", s.detector_efficiency);
        sr.number("protocol_efficiency", s.protocol_efficiency);
        sr.number("filter_transmission", s.filter_transmission);
        sr.number("fiber_coupling", s.fiber_coupling);
        sr.number("tilt_correction_factor", s.tilt_correction_factor);
        sr.number("protocol_rate_multiplier", s.protocol_rate_multiplier);
        sr.number("downlink_improvement", s.downlink_improvement);
        std::string direction = "uplink";
        sr.text("direction", direction);
        if (direction == "uplink") {
            s.direction = link::Direction::Uplink;
        } else if (direction == "downlink") {
            s.direction = link::Direction::Downlink;
        } else {
            sr.fail("direction", "expected uplink or downlink");
        }
        sr.finish();
    }
    if (const Json* bgs = r.child("backgrounds")) {
        if (!bgs->is_array()) {
            r.fail("backgrounds", "expected an array");
        } else {
            for (std::size_t i = 0; i < bgs->size(); ++i) {
                link::BackgroundScenario b;
                b.name = "background_" + std::to_string(i);
                FieldReader br((*bgs)[i], "backgrounds[" + std::to_string(i) + "]", errors);
                br.text("name", b.name);
                br.number("radiance", b.radiance);
                br.number("fov_arcsec", b.fov_arcsec);
                br.number("filter_bandwidth_nm", b.filter_bandwidth_nm);
                br.number("gate_window_s", b.gate_window_s);
                br.number("detector_dark_rate_hz", b.detector_dark_rate_hz);
                br.finish();
                doc.backgrounds.push_back(std::move(b));
            }
        }
    }
    r.finish();
    if (errors.empty()) {
        append(errors, link::validation_errors(doc.scenario));
        for (const auto& b : doc.backgrounds) append(errors, link::validation_errors(b));
    }
    if (!errors.empty()) throw ConfigError(std::move(errors));
    return doc;
}

Json to_json(const SessionConfig& c) {
    return Json{
        {"pulse_count", c.pulse_count},
        {"pulse_rate_hz", c.pulse_rate_hz},
        {"mean_photon_number", c.mean_photon_number},
        {"seed", c.seed},
        {"force_single_photon", c.force_single_photon},
        {"channel",
         {{"coupling_efficiency", c.channel.coupling_efficiency},
          {"misalignment_flip_prob", c.channel.misalignment_flip_prob},
          {"background_rate_hz", c.channel.background_rate_hz}}},
        {"detector",
         {{"efficiency", c.detector.efficiency},
          {"dark_rate_hz", c.detector.dark_rate_hz},
          {"gate_window_s", c.detector.gate_window_s}}},
    };
}

Json to_json(const AttackConfig& attack) {
    if (const auto* op = std::get_if<OpaqueAttackConfig>(&attack)) {
        Json j{{"type", "opaque"}, {"strategy", std::string(to_string(op->strategy))}, {"eve_efficiency", op->eve_efficiency}};
        if (op->strategy != ResendStrategy::SingleWhenIdentified) j["resend_mean"] = op->resend_mean;
        return j;
    }
    const auto& bs = std::get<BeamsplitterAttackConfig>(attack);
    return Json{{"type", "beamsplitter"}, {"reflectivity", bs.reflectivity}, {"eve_efficiency", bs.eve_efficiency}};
}

Json to_json(const ParityBlockConfig& c) {
    return Json{{"rows", c.rows},
                {"cols", c.cols},
                {"passes", c.passes},
                {"shuffle_seed", c.shuffle_seed},
                {"final_checks", c.final_checks}};
}

Json to_json(const LinkBudgetDocument& d) {
    const auto& s = d.scenario;
    Json scenario{
        {"altitude_m", s.altitude_m},
        {"wavelength_m", s.wavelength_m},
        {"tx_aperture_m", s.tx_aperture_m},
        {"rx_aperture_m", s.rx_aperture_m},
        {"pulse_rate_hz", s.pulse_rate_hz},
        {"mean_photon_number", s.mean_photon_number},
        {"atmospheric_transmission", s.atmospheric_transmission},
        {"beam_wander_arcsec_lo", s.beam_wander_arcsec_lo},
        {"beam_wander_arcsec_hi", s.beam_wander_arcsec_hi},
        {"detector_efficiency", s.detector_efficiency},
        {"protocol_efficiency", s.protocol_efficiency},
        {"filter_transmission", s.filter_transmission},
        {"fiber_coupling", s.fiber_coupling},
        {"tilt_correction_factor", s.tilt_correction_factor},
        {"protocol_rate_multiplier", s.protocol_rate_multiplier},
        {"direction", std::string(link::to_string(s.direction))},
        {"downlink_improvement", s.downlink_improvement},
    };
    Json backgrounds = Json::array();
    for (const auto& b : d.backgrounds) {
        backgrounds.push_back({{"name", b.name},
                               {"radiance", b.radiance},
                               {"fov_arcsec", b.fov_arcsec},
                               {"filter_bandwidth_nm", b.filter_bandwidth_nm},
                               {"gate_window_s", b.gate_window_s},
                               {"detector_dark_rate_hz", b.detector_dark_rate_hz}});
    }
    return Json{{"scenario", scenario}, {"backgrounds", backgrounds}};
}

}  // namespace qkd::cli
