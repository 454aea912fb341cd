#pragma once

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "qkd/adversary.hpp"
#include "qkd/linkbudget.hpp"
#include "qkd/protocol.hpp"
#include "qkd/reconciliation.hpp"

namespace qkd::cli {

using Json = nlohmann::json;

/// Reads and parses a JSON file. Throws ConfigError carrying the parser's
/// line/column diagnostic, or the I/O failure.
Json load_json_file(const std::filesystem::path& path);

/// Field-by-field validation of a session document. Unknown fields are
/// rejected, omitted fields take the 950-m defaults, and every problem is
/// reported at once through ConfigError.
SessionConfig validate_session_config(const Json& document);

struct AttackDocument {
    SessionConfig session;
    AttackConfig attack;
};

/// A session document plus an "attack" object.
AttackDocument validate_attack_config(const Json& document);

ParityBlockConfig validate_parity_config(const Json& document);

struct LinkBudgetDocument {
    link::SatelliteScenario scenario;
    std::vector<link::BackgroundScenario> backgrounds;
};

LinkBudgetDocument validate_linkbudget_config(const Json& document);

Json to_json(const SessionConfig& config);
Json to_json(const AttackConfig& attack);
Json to_json(const ParityBlockConfig& config);
Json to_json(const LinkBudgetDocument& document);

}  // namespace qkd::cli
