#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qkd/photonics.hpp"

using namespace qkd;
using PS = PolarizationState;
using AS = AnalyzerSetting;

TEST_CASE("observation probabilities for the B92 pair") {
    CHECK(passage_probability(PS::Horizontal, AS::TestForOne) == 0.0);
    CHECK(passage_probability(PS::Horizontal, AS::TestForZero) == 0.5);
    CHECK(passage_probability(PS::RightCircular, AS::TestForOne) == 0.5);
    CHECK(passage_probability(PS::RightCircular, AS::TestForZero) == 0.0);
}

TEST_CASE("each analyzer blocks its orthogonal state") {
    CHECK(passage_probability(PS::Vertical, AS::TestForOne) == 1.0);
    CHECK(passage_probability(PS::LeftCircular, AS::TestForZero) == 1.0);
    CHECK(passage_probability(PS::Vertical, AS::TestForZero) == 0.5);
    CHECK(passage_probability(PS::LeftCircular, AS::TestForOne) == 0.5);
    CHECK(revealed_bit(AS::TestForOne) == 1);
    CHECK(revealed_bit(AS::TestForZero) == 0);
}

TEST_CASE("Poisson sampler: zero mean always gives zero") {
    PhotonNumberDistribution d(0.0);
    RandomStream r(1);
    for (int i = 0; i < 10000; ++i) REQUIRE(d.sample(r) == 0);
}

TEST_CASE("Poisson sampler rejects bad means") {
    CHECK_THROWS(PhotonNumberDistribution(-0.1));
    CHECK_THROWS(PhotonNumberDistribution(std::nan("")));
    CHECK_THROWS(PhotonNumberDistribution(INFINITY));
}

TEST_CASE("Poisson sampler at mean 0.1: mean and P(n>=1)") {
    PhotonNumberDistribution d(0.1);
    RandomStream r(2024);
    const int n = 1000000;
    double sum = 0.0, nonzero = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto k = d.sample(r);
        sum += static_cast<double>(k);
        nonzero += k > 0 ? 1.0 : 0.0;
    }
    CHECK(std::abs(sum / n - 0.1) < 3.0 * std::sqrt(0.1 / n));
    const double p1 = 1.0 - std::exp(-0.1);
    CHECK(p1 == doctest::Approx(0.09516).epsilon(1e-4));
    CHECK(std::abs(nonzero / n - p1) < 3.0 * oracle::binomial_sigma(p1, n));
}

TEST_CASE("Poisson histogram matches the pmf bin-wise within 4 sigma") {
    for (double mean : {0.1, 2.0, 7.5, 25.0, 1000.0}) {
        CAPTURE(mean);
        PhotonNumberDistribution d(mean);
        RandomStream r(99);
        const int n = 1000000;
        const std::size_t kmax = static_cast<std::size_t>(mean + 12.0 * std::sqrt(mean) + 20.0);
        std::vector<double> hist(kmax + 1, 0.0);
        for (int i = 0; i < n; ++i) {
            const auto k = d.sample(r);
            REQUIRE(k <= kmax);
            hist[k] += 1.0;
        }
        // The recurrence underflows for large means, so go through logs there.
        for (std::size_t k = 0; k <= kmax; ++k) {
            const double p = std::exp(-mean + k * std::log(mean) - std::lgamma(k + 1.0));
            const auto [lo, hi] = oracle::binomial_band(n, p, 4.0);
            CAPTURE(k);
            REQUIRE(hist[k] >= std::floor(lo));
            REQUIRE(hist[k] <= std::ceil(hi));
        }
    }
}

TEST_CASE("pmf agrees with the recurrence and sums to one") {
    PhotonNumberDistribution d(0.1);
    const auto table = oracle::poisson_pmf_table(0.1, 30);
    double sum = 0.0;
    for (std::size_t k = 0; k <= d.truncation_point(); ++k) sum += d.pmf(k);
    CHECK(std::abs(sum - 1.0) < 1e-12);
    for (std::size_t k = 0; k < 15; ++k) CHECK(d.pmf(k) == doctest::Approx(table[k]).epsilon(1e-12));
    PhotonNumberDistribution big(40.0);
    sum = 0.0;
    for (std::size_t k = 0; k <= big.truncation_point(); ++k) sum += big.pmf(k);
    CHECK(std::abs(sum - 1.0) < 1e-12);
}

TEST_CASE("multiphoton fractions at mean 0.1") {
    const double m = 0.1;
    const double oracle_cond = (1.0 - std::exp(-m) - m * std::exp(-m)) / (1.0 - std::exp(-m));
    CHECK(multiphoton_fraction_given_detectable(m) == doctest::Approx(oracle_cond).epsilon(1e-12));
    CHECK(multiphoton_fraction_given_detectable(m) == doctest::Approx(0.0492).epsilon(1e-3));
    CHECK(multiphoton_fraction_given_detectable(m) < 0.06);
    CHECK(multiphoton_probability(m) == doctest::Approx(0.00468).epsilon(1e-3));
    CHECK(multiphoton_probability(m) < 0.005);
}

TEST_CASE("multiphoton fraction small-mean limit, range and monotonicity") {
    for (double m : {1e-6, 1e-4, 1e-3, 0.005, 0.01}) {
        CHECK(std::abs(multiphoton_fraction_given_detectable(m) / (m / 2.0) - 1.0) < 0.01);
    }
    double last = 0.0;
    for (double m = 0.01; m < 30.0; m *= 1.3) {
        const double f = multiphoton_fraction_given_detectable(m);
        CHECK(f > last);
        CHECK(f < 1.0);
        last = f;
    }
    CHECK_THROWS(multiphoton_fraction_given_detectable(0.0));
    CHECK_THROWS(multiphoton_fraction_given_detectable(-1.0));
}

TEST_CASE("analyzer choice is fair and replayable") {
    RandomStream r(5);
    const int n = 1000000;
    int ones = 0;
    for (int i = 0; i < n; ++i) ones += bob_choose_analyzer(r) == AS::TestForOne;
    CHECK(std::abs(ones / double(n) - 0.5) < 0.002);

    RandomStream a(17), b(17);
    for (int i = 0; i < 1000; ++i) REQUIRE(bob_choose_analyzer(a) == bob_choose_analyzer(b));
}

TEST_CASE("analyzer choices from alternating seeds are independent") {
    const double crit = oracle::chi_square_critical(1, 0.01);
    for (std::uint64_t k = 0; k < 5; ++k) {
        RandomStream even(2 * k), odd(2 * k + 1);
        double t[4] = {0, 0, 0, 0};
        for (int i = 0; i < 100000; ++i) {
            const int x = bob_choose_analyzer(even) == AS::TestForOne;
            const int y = bob_choose_analyzer(odd) == AS::TestForOne;
            t[2 * x + y] += 1.0;
        }
        CHECK(oracle::chi_square_2x2(t[0], t[1], t[2], t[3]) < crit);
    }
}
