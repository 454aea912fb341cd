// Reference computations for the tests. These are written from the defining
// formulas and do not call into the library.
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

namespace oracle {

// Poisson pmf by the recurrence p(k) = p(k-1) * m / k.
inline std::vector<double> poisson_pmf_table(double mean, std::size_t kmax) {
    std::vector<double> p(kmax + 1);
    p[0] = std::exp(-mean);
    for (std::size_t k = 1; k <= kmax; ++k) p[k] = p[k - 1] * mean / static_cast<double>(k);
    return p;
}

// Sum over n >= 1 of Poisson(n; m) * (1 - (1 - eta)^n), truncated once the
// remaining tail mass drops below 1e-18.
inline double detection_series(double mean, double eta) {
    double term = std::exp(-mean);
    double cdf = term;
    double sum = 0.0;
    for (int n = 1; n < 100000; ++n) {
        term *= mean / n;
        cdf += term;
        sum += term * (1.0 - std::pow(1.0 - eta, n));
        if (1.0 - cdf < 1e-18 && n > mean) break;
    }
    return sum;
}

// Acceptance band for a binomial count holding the same two-sided tail mass
// as +/- `sigmas` standard deviations of a normal. Exact in sparse bins where
// the normal approximation breaks down.
inline std::pair<double, double> binomial_band(double trials, double p, double sigmas) {
    const double tail = boost::math::cdf(boost::math::complement(boost::math::normal(), sigmas));
    boost::math::binomial dist(trials, p);
    return {boost::math::quantile(dist, tail), boost::math::quantile(boost::math::complement(dist, tail))};
}

inline double binomial_sigma(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

inline double chi_square_critical(double dof, double alpha) {
    boost::math::chi_squared dist(dof);
    return boost::math::quantile(boost::math::complement(dist, alpha));
}

// Pearson statistic for a 2x2 contingency table.
inline double chi_square_2x2(double a, double b, double c, double d) {
    const double n = a + b + c + d;
    const double obs[4] = {a, b, c, d};
    const double rows[2] = {a + b, c + d};
    const double cols[2] = {a + c, b + d};
    double chi = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const double e = rows[i] * cols[j] / n;
            chi += (obs[2 * i + j] - e) * (obs[2 * i + j] - e) / e;
        }
    }
    return chi;
}

// Two-sample chi-square over histograms of equal total, bins with fewer than
// 10 combined counts merged into their neighbour.
inline std::pair<double, int> chi_square_two_sample(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> ma, mb;
    double acc_a = 0.0, acc_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc_a += a[i];
        acc_b += b[i];
        if (acc_a + acc_b >= 10.0) {
            ma.push_back(acc_a);
            mb.push_back(acc_b);
            acc_a = acc_b = 0.0;
        }
    }
    if (!ma.empty()) {
        ma.back() += acc_a;
        mb.back() += acc_b;
    }
    double chi = 0.0;
    for (std::size_t i = 0; i < ma.size(); ++i) chi += (ma[i] - mb[i]) * (ma[i] - mb[i]) / (ma[i] + mb[i]);
    return {chi, static_cast<int>(ma.size()) - 1};
}

inline std::vector<std::uint8_t> bits_of(const std::string& s) {
    std::vector<std::uint8_t> v;
    for (char c : s) {
        if (c == '0' || c == '1') v.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return v;
}

// The raw-key sample: four 50-bit rows for Alice and Bob.
inline const char* kRawKeySampleAlice =
    "00000101011101101001000000000001100101010011100010"
    "01110111011110111000010010001111100000000101101111"
    "10010010100010000011000001011100001111111111000000"
    "10101011011111100111111011110101001101001011101111";
inline const char* kRawKeySampleBob =
    "00000101011101101001000000000001100101010011100010"
    "01110111011110111000010010001111100000000101101111"
    "10010010100010000011000001011100001111111101000000"
    "10101011011111100011111011110101001101001011101111";

}  // namespace oracle
