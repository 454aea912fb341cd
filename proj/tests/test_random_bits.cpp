#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "qkd/bits.hpp"
#include "qkd/random.hpp"

using namespace qkd;

TEST_CASE("random stream replays for a fixed seed") {
    RandomStream a(42), b(42);
    for (int i = 0; i < 1000; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("derived streams differ from each other and from the parent") {
    RandomStream base(7);
    auto x = base.derive(1);
    auto y = base.derive(2);
    std::set<std::uint64_t> firsts{base.derive(1).next(), y.next(), RandomStream(7).next()};
    CHECK(firsts.size() == 3);
    CHECK(x.next() == base.derive(1).next());
}

TEST_CASE("uniform lies in [0, 1) and below() respects its bound") {
    RandomStream r(3);
    for (int i = 0; i < 100000; ++i) {
        const double u = r.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        REQUIRE(r.below(7) < 7);
    }
}

TEST_CASE("below() is uniform over a small range") {
    RandomStream r(11);
    std::vector<double> counts(6, 0.0);
    const int n = 600000;
    for (int i = 0; i < n; ++i) counts[r.below(6)] += 1.0;
    double chi = 0.0;
    for (double c : counts) chi += (c - n / 6.0) * (c - n / 6.0) / (n / 6.0);
    CHECK(chi < oracle::chi_square_critical(5, 0.01));
}

TEST_CASE("bit strings parse and format") {
    const auto bits = parse_bits("01 1\n0\r\n1");
    CHECK(bits == BitVector{0, 1, 1, 0, 1});
    CHECK(format_bits(bits) == "01101");
    CHECK_THROWS_AS(parse_bits("01x"), std::invalid_argument);
    CHECK(parse_bits("").empty());
}

TEST_CASE("hamming distance") {
    CHECK(hamming_distance(BitVector{0, 1, 1}, BitVector{1, 1, 0}) == 2);
    CHECK_THROWS_AS(hamming_distance(BitVector{0}, BitVector{0, 1}), std::invalid_argument);
}
