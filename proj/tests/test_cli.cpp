#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qkd/cli/commands.hpp"
#include "qkd/cli/config.hpp"

namespace fs = std::filesystem;

namespace {
struct Scratch {
    fs::path dir;
    Scratch() {
        dir = fs::temp_directory_path() / ("qkdsim_cli_" + std::to_string(std::rand()));
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

int run(const std::string& args) {
    const std::string cmd = std::string(QKDSIM_PATH) + " " + args;
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string config(const std::string& name) { return std::string(QKD_CONFIG_DIR) + "/" + name; }
std::string data(const std::string& name) { return std::string(QKD_TEST_DATA) + "/" + name; }
}  // namespace

TEST_CASE("session reports are byte-identical across repeats") {
    Scratch s;
    const std::string args = "session --config " + config("default_950m.json") + " --seed 42 --out ";
    REQUIRE(run(args + s / "a.json") == 0);
    REQUIRE(run(args + s / "b.json") == 0);
    CHECK(slurp(s / "a.json") == slurp(s / "b.json"));
    const auto report = qkd::cli::Json::parse(slurp(s / "a.json"));
    CHECK(report["config"]["seed"] == 42);
    CHECK(report["version"].get<std::string>().find("qkdsim") == 0);
    CHECK(report.contains("counts"));
}

TEST_CASE("seed sweeps merge in seed order regardless of job count") {
    Scratch s;
    const std::string base = "session --config " + config("default_950m.json") + " --seed 5 --sweep 3 ";
    REQUIRE(run(base + "--jobs 1 --out " + s / "serial.json") == 0);
    REQUIRE(run(base + "--jobs 3 --out " + s / "parallel.json") == 0);
    CHECK(slurp(s / "serial.json") == slurp(s / "parallel.json"));
    const auto runs = qkd::cli::Json::parse(slurp(s / "serial.json"))["runs"];
    REQUIRE(runs.size() == 3);
    CHECK(runs[2]["config"]["seed"] == 7);
}

TEST_CASE("linkbudget preset gives the low key rate near 36 Hz") {
    Scratch s;
    REQUIRE(run("linkbudget --config " + config("night_uplink.json") + " --out " + s / "lb.json") == 0);
    const auto report = qkd::cli::Json::parse(slurp(s / "lb.json"));
    const double lo = report["key_rate_hz_lo"];
    CHECK(lo >= 35.0 / 1.5);
    CHECK(lo <= 35.0 * 1.5);
    CHECK(std::abs(lo / 36.0 - 1.0) < 0.1);
}

TEST_CASE("reconcile on the raw-key sample") {
    Scratch s;
    REQUIRE(run("reconcile --alice " + data("raw_key_sample_alice.bits") + " --bob " + data("raw_key_sample_bob.bits") +
                " --out " + s / "rec.json --key-out " + s / "key.bits") == 0);
    const auto report = qkd::cli::Json::parse(slurp(s / "rec.json"));
    CHECK(report["converged"] == true);
    CHECK(report["corrections"] == 2);
    CHECK(fs::exists(s / "key.bits"));
}

TEST_CASE("exit codes") {
    Scratch s;
    std::ofstream(s / "bad.json") << "{ \"channel\": { \"coupling_efficiency\": 1.4 } }";
    std::ofstream(s / "broken.json") << "{ \"pulse_count\": ";
    CHECK(run("session --config " + s / "bad.json" + " 2>/dev/null") == 1);
    CHECK(run("session --config " + s / "broken.json" + " 2>/dev/null") == 1);
    CHECK(run("nonsense 2>/dev/null") == 1);
    CHECK(run("session --config " + s / "missing.json" + " 2>/dev/null") == 1);
    CHECK_FALSE(fs::exists(s / "never.json"));

    std::ofstream(s / "noisy_a.bits") << std::string(64, '0');
    std::ofstream(s / "noisy_b.bits") << std::string(32, '1') + std::string(32, '0');
    std::ofstream(s / "one_pass.json") << R"({"passes": 1})";
    CHECK(run("reconcile --config " + s / "one_pass.json" + " --alice " + s / "noisy_a.bits" + " --bob " +
              s / "noisy_b.bits" + " --out " + s / "r.json 2>/dev/null") == 2);
    CHECK(fs::exists(s / "r.json"));
}

TEST_CASE("otp encrypts, tracks the cursor and refuses reuse") {
    Scratch s;
    std::ofstream(s / "key.bits") << "1011001110001111";
    std::ofstream(s / "msg.bits") << "11110000";
    const std::string state = " --state " + s / "pad.json";
    REQUIRE(run("otp --key " + s / "key.bits" + " --in " + s / "msg.bits" + " --out " + s / "c1.bits" + state) == 0);
    CHECK(slurp(s / "c1.bits") == "01000011\n");
    CHECK(qkd::cli::Json::parse(slurp(s / "pad.json"))["cursor"] == 8);
    CHECK(run("otp --key " + s / "key.bits" + " --in " + s / "msg.bits" + " --offset 0 --out " + s / "c2.bits" +
              state + " 2>/dev/null") == 2);
    REQUIRE(run("otp --key " + s / "key.bits" + " --in " + s / "c1.bits" + " --decrypt --offset 0 --out " +
                s / "m.bits") == 0);
    CHECK(slurp(s / "m.bits") == "11110000\n");
    CHECK(run("otp --key " + s / "key.bits" + " --in " + s / "msg.bits" + " --offset 12 2>/dev/null >/dev/null") ==
          2);
}

TEST_CASE("csv trace has one row per pulse") {
    Scratch s;
    std::ofstream(s / "small.json") << R"({"pulse_count": 500})";
    REQUIRE(run("session --config " + s / "small.json" + " --format csv --out " + s / "t.csv") == 0);
    const auto text = slurp(s / "t.csv");
    CHECK(std::count(text.begin(), text.end(), '\n') == 501);
    CHECK(text.rfind("slot,alice_bit,state", 0) == 0);
}

TEST_CASE("in-process execute writes to the given stream") {
    qkd::cli::RunManifest m;
    m.command = qkd::cli::Command::LinkBudget;
    m.config_path = config("day_uplink.json");
    m.format = qkd::cli::Format::Text;
    std::ostringstream out, err;
    CHECK(qkd::cli::execute(m, out, err) == 0);
    CHECK(out.str().find("BER, day") != std::string::npos);
}
