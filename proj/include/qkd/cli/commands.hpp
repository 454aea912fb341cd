#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace qkd::cli {

enum class Command { Session, Attack, Reconcile, LinkBudget, Otp };
enum class Format { Json, Csv, Text };

/// One parsed invocation.
struct RunManifest {
    Command command = Command::Session;
    std::string config_path;
    /// Empty means standard output.
    std::string output_path;
    /// Wins over the seed in the config file when present.
    std::optional<std::uint64_t> seed_override;
    Format format = Format::Json;
    unsigned jobs = 1;
    /// Number of consecutive seeds to run (session and attack).
    unsigned sweep = 1;
    /// session: write <prefix>.alice.bits and <prefix>.bob.bits.
    std::string keys_prefix;
    // reconcile
    std::string alice_path;
    std::string bob_path;
    std::string key_out_path;
    // otp
    std::string key_path;
    std::string input_path;
    std::string state_path;
    std::optional<std::size_t> offset;
    bool decrypt = false;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitRuntime = 2;

/// Runs a manifest. Reports go to manifest.output_path (written through a
/// temporary file and a rename) or to `out`. Exceptions propagate.
int execute(const RunManifest& manifest, std::ostream& out, std::ostream& err);

/// Parses argv, executes, and maps failures to exit codes: 1 for argument,
/// configuration and validation errors, 2 for runtime failures such as
/// reconciliation that does not converge or an exhausted pad.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

/// Writes `content` to a temporary sibling of `path`, then renames it over
/// `path`.
void write_atomically(const std::string& path, const std::string& content);

}  // namespace qkd::cli
