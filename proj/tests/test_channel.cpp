#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qkd/channel.hpp"
#include "qkd/protocol.hpp"

using namespace qkd;
using PS = PolarizationState;
using AS = AnalyzerSetting;

namespace {
const ChannelModel kLossless{1.0, 0.0, 0.0};
const DetectorModel kPerfect{1.0, 0.0, 5e-9};
}  // namespace

TEST_CASE("transmit trivial cases") {
    RandomStream r(1);
    CHECK(transmit(12345, ChannelModel{1.0, 0.0, 0.0}, r) == 12345);
    CHECK(transmit(12345, ChannelModel{0.0, 0.0, 0.0}, r) == 0);
    CHECK(transmit(0, ChannelModel{}, r) == 0);
}

TEST_CASE("transmit of 10^6 photons at 0.14 stays within 4 sigma") {
    RandomStream r(2);
    const double n = 1e6;
    const auto survivors = static_cast<double>(transmit(1000000, ChannelModel{0.14, 0.0, 0.0}, r));
    CHECK(std::abs(survivors - 0.14 * n) < 4.0 * std::sqrt(n * 0.14 * 0.86));
}

TEST_CASE("thinning composes") {
    RandomStream r(3);
    const int trials = 100000;
    std::vector<double> twice(11, 0.0), once(11, 0.0);
    for (int i = 0; i < trials; ++i) {
        twice[thin(thin(10, 0.5, r), 0.4, r)] += 1.0;
        once[thin(10, 0.2, r)] += 1.0;
    }
    const auto [chi, dof] = oracle::chi_square_two_sample(twice, once);
    CHECK(chi < oracle::chi_square_critical(dof, 0.01));
}

TEST_CASE("detect_slot: no photons and no noise never clicks") {
    RandomStream r(4);
    for (int i = 0; i < 10000; ++i) REQUIRE(detect_slot(0, PS::Horizontal, kLossless, kPerfect, r) ==
                                            DetectionOutcome::no_click());
}

TEST_CASE("single horizontal photon on the zero test is conclusive half the time") {
    RandomStream r(5);
    const int n = 100000;
    int zeros = 0;
    for (int i = 0; i < n; ++i) {
        const auto arm = route_photon(PS::Horizontal, AS::TestForZero, kLossless, kPerfect, r);
        if (arm) {
            REQUIRE(*arm == AS::TestForZero);
            ++zeros;
        }
    }
    CHECK(std::abs(zeros / double(n) - 0.5) < 4.0 * oracle::binomial_sigma(0.5, n));
}

TEST_CASE("a single photon through the whole receiver decodes Alice's bit a quarter of the time") {
    RandomStream r(6);
    const int n = 100000;
    int conclusive = 0;
    for (int i = 0; i < n; ++i) {
        const std::uint8_t bit = static_cast<std::uint8_t>(i & 1);
        const auto o = detect_slot(1, alice_prepare(bit), kLossless, kPerfect, r);
        REQUIRE(o.kind != DetectionOutcome::Kind::DualFire);
        if (o.is_conclusive()) {
            REQUIRE(o.bit == bit);
            REQUIRE(o.cause == ClickCause::Signal);
            ++conclusive;
        }
    }
    CHECK(std::abs(conclusive / double(n) - 0.25) < 4.0 * oracle::binomial_sigma(0.25, n));
}

TEST_CASE("no noise and no misalignment never decodes a wrong bit, even for bright pulses") {
    RandomStream r(7);
    for (int i = 0; i < 20000; ++i) {
        const std::uint8_t bit = static_cast<std::uint8_t>(r.bit());
        const auto o = detect_slot(r.below(30), alice_prepare(bit), kLossless, DetectorModel{0.65, 0.0, 5e-9}, r);
        REQUIRE(o.kind != DetectionOutcome::Kind::DualFire);
        if (o.is_conclusive()) REQUIRE(o.bit == bit);
    }
}

TEST_CASE("noise clicks carry a random bit") {
    SessionConfig c;
    c.mean_photon_number = 0.0;
    c.pulse_count = 1000000;
    c.channel = ChannelModel{0.14, 0.0, 1e6};
    c.detector = DetectorModel{0.65, 0.0, 5e-9};
    c.seed = 8;
    const auto s = run_session(c);
    const double n = static_cast<double>(s.alice_raw_key.size());
    REQUIRE(n > 1000);
    CHECK(s.background_click_count == s.alice_raw_key.size());
    CHECK(std::abs(s.ber - 0.5) < 4.0 * oracle::binomial_sigma(0.5, n));
}

TEST_CASE("noise click rates") {
    CHECK(expected_noise_click_rate(1100.0, 5e-9, 20000.0) == doctest::Approx(0.11).epsilon(1e-12));
    CHECK(1.0 / expected_noise_click_rate(1100.0, 5e-9, 20000.0) == doctest::Approx(9.09).epsilon(1e-3));
    CHECK(expected_noise_click_rate(80.0, 5e-9, 20000.0) == doctest::Approx(0.008).epsilon(1e-12));
    CHECK(1.0 / expected_noise_click_rate(80.0, 5e-9, 20000.0) == doctest::Approx(125.0).epsilon(1e-9));
    CHECK(expected_noise_click_rate(1100.0, 0.0, 20000.0) == 0.0);
}

TEST_CASE("per-gate noise splits the ambient rate across the two detectors") {
    const auto p = per_gate_noise(ChannelModel{0.14, 0.0, 1100.0}, DetectorModel{0.65, 80.0, 5e-9});
    CHECK(p.background == doctest::Approx(550.0 * 5e-9));
    CHECK(p.dark == doctest::Approx(80.0 * 5e-9));
}

namespace {
// Each arm fires independently: the intended arm sees Poisson(lambda (1 - f))
// signal photons, the other Poisson(lambda f), plus per-arm noise.
double dual_fire_oracle(double mean, double eta, double eta_d, double f, double q_bg, double q_dark) {
    const double lambda = mean * eta * eta_d * 0.5 * 0.5;
    const double quiet = (1.0 - q_bg) * (1.0 - q_dark);
    const double right = 1.0 - std::exp(-lambda * (1.0 - f)) * quiet;
    const double wrong = 1.0 - std::exp(-lambda * f) * quiet;
    return right * wrong;
}
}  // namespace

TEST_CASE("dual-fire closed form against simulation at a bright mean") {
    const ChannelModel ch{0.5, 0.05, 2e5};
    const DetectorModel det{0.65, 1e4, 5e-9};
    const double mean = 20.0;
    const auto noise = per_gate_noise(ch, det);
    const double expected = dual_fire_oracle(mean, 0.5, 0.65, 0.05, noise.background, noise.dark);
    CHECK(dual_fire_probability(mean, ch, det) == doctest::Approx(expected).epsilon(1e-12));

    PhotonNumberDistribution d(mean);
    RandomStream r(9);
    const int n = 200000;
    int dual = 0;
    for (int i = 0; i < n; ++i) {
        const auto bit = static_cast<std::uint8_t>(r.bit());
        const auto arriving = transmit(d.sample(r), ch, r);
        dual += detect_slot(arriving, alice_prepare(bit), ch, det, r).kind == DetectionOutcome::Kind::DualFire;
    }
    CHECK(std::abs(dual / double(n) - expected) < 3.0 * oracle::binomial_sigma(expected, n));
}

TEST_CASE("dual-fire probability increases with the mean on [0, 100]") {
    const ChannelModel ch{0.14, 0.015, 1100.0};
    const DetectorModel det{};
    double last = dual_fire_probability(0.0, ch, det);
    for (double m = 0.5; m <= 100.0; m += 0.5) {
        const double p = dual_fire_probability(m, ch, det);
        REQUIRE(p > last);
        last = p;
    }
}

TEST_CASE("mean photon number recovered from simulated dual-fires") {
    const ChannelModel ch{1.0, 0.05, 0.0};
    const DetectorModel det{1.0, 0.0, 5e-9};
    const double truth = 2.0;
    PhotonNumberDistribution d(truth);
    RandomStream r(10);
    const std::uint64_t gates = 1000000;
    std::uint64_t dual = 0;
    for (std::uint64_t i = 0; i < gates; ++i) {
        const auto bit = static_cast<std::uint8_t>(r.bit());
        dual += detect_slot(transmit(d.sample(r), ch, r), alice_prepare(bit), ch, det, r).kind ==
                DetectionOutcome::Kind::DualFire;
    }
    const auto est = estimate_mean_photons_from_dualfire(dual, gates, ch, det);
    CHECK_FALSE(est.upper_bound_only);
    CHECK(std::abs(est.mean_photon_number / truth - 1.0) < 0.10);
}

TEST_CASE("no dual-fires gives an upper bound") {
    const ChannelModel ch{1.0, 0.05, 0.0};
    const DetectorModel det{1.0, 0.0, 5e-9};
    const auto est = estimate_mean_photons_from_dualfire(0, 100000, ch, det);
    CHECK(est.upper_bound_only);
    CHECK(est.mean_photon_number > 0.0);
    // The bound's predicted rate is the 95% one-sided limit for zero events.
    const double p = dual_fire_probability(est.mean_photon_number, ch, det);
    CHECK(std::pow(1.0 - p, 100000.0) == doctest::Approx(0.05).epsilon(1e-3));
}

TEST_CASE("the estimator needs enough gates and some cross-arm path") {
    CHECK_THROWS(estimate_mean_photons_from_dualfire(5, 999, ChannelModel{1.0, 0.05, 0.0}, DetectorModel{}));
    CHECK_THROWS_AS(estimate_mean_photons_from_dualfire(5, 100000, ChannelModel{1.0, 0.0, 0.0},
                                                        DetectorModel{1.0, 0.0, 5e-9}),
                    std::domain_error);
}

TEST_CASE("model validation") {
    CHECK_THROWS(validate(ChannelModel{1.4, 0.0, 0.0}));
    CHECK_THROWS(validate(ChannelModel{0.14, -0.1, 0.0}));
    CHECK_THROWS(validate(ChannelModel{0.14, 0.0, -5.0}));
    CHECK_THROWS(validate(DetectorModel{1.1, 0.0, 5e-9}));
    CHECK_THROWS(validate(DetectorModel{0.65, 0.0, 0.0}));
    CHECK_NOTHROW(validate(ChannelModel{}));
    CHECK_NOTHROW(validate(DetectorModel{}));
}
