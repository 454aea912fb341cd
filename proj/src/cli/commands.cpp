#include "qkd/cli/commands.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <unistd.h>

#include "qkd/cli/report.hpp"
#include "qkd/errors.hpp"
#include "qkd/vernam.hpp"

namespace qkd::cli {
namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError({path + ": cannot open file"});
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

BitVector read_bits(const std::string& path) {
    try {
        return parse_bits(read_file(path));
    } catch (const std::invalid_argument& e) {
        if (dynamic_cast<const ConfigError*>(&e) != nullptr) throw;
        throw ConfigError({path + ": " + e.what()});
    }
}

void emit(const RunManifest& m, const std::string& text, std::ostream& out) {
    if (m.output_path.empty()) {
        out << text;
    } else {
        write_atomically(m.output_path, text);
    }
}

Json load_or_empty(const std::string& path) { return path.empty() ? Json::object() : load_json_file(path); }

/// Runs `job(i)` for i in [0, count) on up to `jobs` threads; results keep
/// index order so the merged output does not depend on scheduling.
std::vector<Json> fan_out(unsigned count, unsigned jobs, const std::function<Json(unsigned)>& job) {
    std::vector<Json> results(count);
    std::vector<std::exception_ptr> failures(count);
    std::atomic<unsigned> next{0};
    auto worker = [&] {
        for (unsigned i = next++; i < count; i = next++) {
            try {
                results[i] = job(i);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < std::min(jobs, count); ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }
    return results;
}

Json merge_runs(std::string_view command, std::vector<Json> runs) {
    if (runs.size() == 1) return std::move(runs.front());
    return Json{{"version", std::string(kVersion)}, {"command", std::string(command)}, {"runs", std::move(runs)}};
}

int run_session_command(const RunManifest& m, std::ostream& out) {
    SessionConfig config = validate_session_config(load_or_empty(m.config_path));
    if (m.seed_override) config.seed = *m.seed_override;

    if (m.format == Format::Csv) {
        if (m.sweep != 1) throw ConfigError({"--format csv: traces are written for a single seed only"});
        config.keep_trace = true;
        emit(m, trace_csv(run_session(config)), out);
        return kExitOk;
    }
    if (m.format == Format::Text) throw ConfigError({"--format: session reports are json or csv"});

    const auto runs = fan_out(m.sweep, m.jobs, [&](unsigned i) {
        SessionConfig c = config;
        c.seed = config.seed + i;
        const auto result = run_session(c);
        if (!m.keys_prefix.empty()) {
            const std::string suffix = m.sweep == 1 ? "" : "." + std::to_string(c.seed);
            write_atomically(m.keys_prefix + suffix + ".alice.bits", format_bits(result.alice_raw_key) + "\n");
            write_atomically(m.keys_prefix + suffix + ".bob.bits", format_bits(result.bob_raw_key) + "\n");
        }
        return session_report(c, result);
    });
    emit(m, render(merge_runs("session", runs)), out);
    return kExitOk;
}

int run_attack_command(const RunManifest& m, std::ostream& out) {
    if (m.config_path.empty()) throw ConfigError({"--config: the attack command needs a config with an attack section"});
    if (m.format != Format::Json) throw ConfigError({"--format: attack reports are json only"});
    AttackDocument doc = validate_attack_config(load_json_file(m.config_path));
    if (m.seed_override) doc.session.seed = *m.seed_override;

    const auto runs = fan_out(m.sweep, m.jobs, [&](unsigned i) {
        AttackDocument d = doc;
        d.session.seed = doc.session.seed + i;
        const auto baseline = run_session(d.session);
        const auto attacked = run_attacked_session(d.session, d.attack);
        return attack_report(d, attacked, baseline);
    });
    emit(m, render(merge_runs("attack", runs)), out);
    return kExitOk;
}

int run_reconcile_command(const RunManifest& m, std::ostream& out, std::ostream& err) {
    if (m.alice_path.empty() || m.bob_path.empty()) throw ConfigError({"--alice and --bob are required"});
    if (m.format != Format::Json) throw ConfigError({"--format: reconcile reports are json only"});
    ParityBlockConfig config = validate_parity_config(load_or_empty(m.config_path));
    if (m.seed_override) config.shuffle_seed = *m.seed_override;

    const BitVector alice = read_bits(m.alice_path);
    const BitVector bob = read_bits(m.bob_path);
    if (alice.size() != bob.size()) {
        throw ConfigError({"key lengths differ: alice " + std::to_string(alice.size()) + ", bob " +
                           std::to_string(bob.size())});
    }
    if (alice.size() < config.rows * config.cols) {
        throw ConfigError({"key of " + std::to_string(alice.size()) + " bits is shorter than one " +
                           std::to_string(config.rows) + "x" + std::to_string(config.cols) + " block"});
    }
    const std::size_t initial = hamming_distance(alice, bob);
    const auto result = reconcile_2d(alice, bob, config);
    if (!m.key_out_path.empty()) write_atomically(m.key_out_path, format_bits(result.corrected_key) + "\n");
    emit(m, render(reconcile_report(config, alice.size(), result, initial)), out);
    if (!result.converged) {
        err << "error: reconciliation did not converge (" << result.failed_checks << " of "
            << config.final_checks << " final parity checks failed)\n";
        return kExitRuntime;
    }
    return kExitOk;
}

int run_linkbudget_command(const RunManifest& m, std::ostream& out) {
    if (m.config_path.empty()) throw ConfigError({"--config: the linkbudget command needs a scenario file"});
    if (m.format == Format::Csv) throw ConfigError({"--format: link budgets are json or text"});
    const auto doc = validate_linkbudget_config(load_json_file(m.config_path));
    const auto report = link::evaluate(doc.scenario, doc.backgrounds);
    emit(m, m.format == Format::Text ? link::format_table(report) : render(linkbudget_report(doc, report)), out);
    return kExitOk;
}

int run_otp_command(const RunManifest& m, std::ostream& out) {
    if (m.key_path.empty() || m.input_path.empty()) throw ConfigError({"--key and --in are required"});
    std::size_t cursor = 0;
    if (!m.state_path.empty() && fs::exists(m.state_path)) {
        const Json state = load_json_file(m.state_path);
        if (!state.contains("cursor") || !state["cursor"].is_number_unsigned()) {
            throw ConfigError({m.state_path + ": cursor: expected a non-negative integer"});
        }
        cursor = state["cursor"].get<std::size_t>();
    }
    OneTimePad pad(read_bits(m.key_path), cursor);
    const BitVector input = read_bits(m.input_path);
    const std::size_t offset = m.offset.value_or(pad.cursor());

    const BitVector output = m.decrypt ? pad.decrypt(Ciphertext{offset, input}) : pad.encrypt_at(input, offset).bits;
    if (!m.state_path.empty()) write_atomically(m.state_path, render(Json{{"cursor", pad.cursor()}}));
    emit(m, format_bits(output) + "\n", out);
    return kExitOk;
}

}  // namespace

void write_atomically(const std::string& path, const std::string& content) {
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error(path + ": cannot write");
        f << content;
        f.flush();
        if (!f) throw std::runtime_error(path + ": write failed");
    }
    fs::rename(tmp, target);
}

int execute(const RunManifest& m, std::ostream& out, std::ostream& err) {
    if (m.jobs == 0) throw ConfigError({"--jobs: must be >= 1"});
    if (m.sweep == 0) throw ConfigError({"--sweep: must be >= 1"});
    switch (m.command) {
        case Command::Session: return run_session_command(m, out);
        case Command::Attack: return run_attack_command(m, out);
        case Command::Reconcile: return run_reconcile_command(m, out, err);
        case Command::LinkBudget: return run_linkbudget_command(m, out);
        case Command::Otp: return run_otp_command(m, out);
    }
    return kExitConfig;
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"B92 free-space QKD simulator and satellite link budget", "qkdsim"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    RunManifest m;
    std::uint64_t seed = 0;
    std::string format = "json";
    const std::map<std::string, Format> formats{{"json", Format::Json}, {"csv", Format::Csv}, {"text", Format::Text}};

    auto common = [&](CLI::App* sub, bool with_config_required) {
        auto* cfg = sub->add_option("--config", m.config_path, "JSON config file");
        if (with_config_required) cfg->required();
        sub->add_option("--out", m.output_path, "report path (default: stdout)");
        sub->add_option("--seed", seed, "seed override");
        sub->add_option("--format", format, "json, csv or text")
            ->check(CLI::IsMember({"json", "csv", "text"}));
    };

    auto* session = app.add_subcommand("session", "simulate a B92 session");
    common(session, false);
    session->add_option("--jobs", m.jobs, "parallel workers for --sweep");
    session->add_option("--sweep", m.sweep, "number of consecutive seeds to run");
    session->add_option("--keys-out", m.keys_prefix, "write <prefix>.alice.bits and <prefix>.bob.bits");

    auto* attack = app.add_subcommand("attack", "simulate an eavesdropping attack against a baseline");
    common(attack, true);
    attack->add_option("--jobs", m.jobs, "parallel workers for --sweep");
    attack->add_option("--sweep", m.sweep, "number of consecutive seeds to run");

    auto* reconcile = app.add_subcommand("reconcile", "two-dimensional parity reconciliation of two bit files");
    common(reconcile, false);
    reconcile->add_option("--alice", m.alice_path, "Alice's raw key ('0'/'1' text)")->required();
    reconcile->add_option("--bob", m.bob_path, "Bob's raw key ('0'/'1' text)")->required();
    reconcile->add_option("--key-out", m.key_out_path, "write Bob's corrected key here");

    auto* linkbudget = app.add_subcommand("linkbudget", "ground-to-satellite link budget");
    common(linkbudget, true);

    auto* otp = app.add_subcommand("otp", "one-time-pad encryption of a bit file");
    otp->add_option("--key", m.key_path, "pad bits")->required();
    otp->add_option("--in", m.input_path, "message or ciphertext bits")->required();
    otp->add_option("--out", m.output_path, "output path (default: stdout)");
    otp->add_option("--offset", m.offset, "pad offset (default: the cursor)");
    otp->add_option("--state", m.state_path, "JSON file holding the pad cursor across runs");
    otp->add_flag("--decrypt", m.decrypt, "decrypt instead of encrypt");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (session->parsed()) m.command = Command::Session;
    if (attack->parsed()) m.command = Command::Attack;
    if (reconcile->parsed()) m.command = Command::Reconcile;
    if (linkbudget->parsed()) m.command = Command::LinkBudget;
    if (otp->parsed()) m.command = Command::Otp;
    for (auto* sub : {session, attack, reconcile, linkbudget}) {
        if (sub->parsed() && sub->count("--seed") > 0) m.seed_override = seed;
    }
    m.format = formats.at(format);

    try {
        return execute(m, out, err);
    } catch (const ConfigError& e) {
        for (const auto& line : e.errors()) err << "error: " << line << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const KeyReuseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

}  // namespace qkd::cli
