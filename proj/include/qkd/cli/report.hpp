#pragma once

#include <string>
#include <string_view>

#include "qkd/cli/config.hpp"

namespace qkd::cli {

inline constexpr std::string_view kVersion = "qkdsim 0.1.0";

Json session_report(const SessionConfig& config, const SessionResult& result);

/// Session report of the attacked run with an "attack" section holding Eve's
/// statistics and the deltas against the unattacked baseline.
Json attack_report(const AttackDocument& doc, const AttackResult& attacked, const SessionResult& baseline);

Json reconcile_report(const ParityBlockConfig& config, std::size_t key_length, const ReconciliationResult& result,
                      std::size_t initial_disagreements);

Json linkbudget_report(const LinkBudgetDocument& doc, const link::LinkBudgetReport& report);

/// Per-slot trace, one CSV row per pulse. Needs a result run with keep_trace.
std::string trace_csv(const SessionResult& result);

/// Canonical text of a JSON report: two-space indent and a final newline.
std::string render(const Json& report);

}  // namespace qkd::cli
