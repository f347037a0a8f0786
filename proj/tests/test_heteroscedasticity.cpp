#include <doctest.h>

#include <cmath>
#include <random>

#include "jmrel/dataset.hpp"
#include "jmrel/errors.hpp"
#include "jmrel/heteroscedasticity.hpp"
#include "support/oracles.hpp"

using namespace jmrel;
using doctest::Approx;

TEST_CASE("residual vectors") {
    CHECK_THROWS(ResidualVector({}));
    CHECK_THROWS(ResidualVector({1.0, NAN}));
    const auto p = JmParams::make(5, 0.1);
    std::vector<double> exact;
    for (std::size_t i = 1; i <= 4; ++i) exact.push_back(mtbf(p, i));
    const auto perfect = residuals(FailureDataset("e", exact), p);
    for (double r : perfect.values()) CHECK(std::abs(r) < 1e-12);

    const auto one = residuals(FailureDataset("one", {2}), JmParams::make(1, 1));
    CHECK(one[0] == Approx(1.0));

    const auto ntds = residuals(prefix(builtin_dataset("ntds"), 26), JmParams::make(32.0564, 0.006209));
    CHECK(ntds[0] == Approx(9 - 1 / (0.006209 * 32.0564)).epsilon(1e-12));
    CHECK(ntds[0] == Approx(3.976).epsilon(1e-3));

    CHECK_THROWS_AS(residuals(FailureDataset("bad", {1, 1, 1}), JmParams::make(2, 1)), DomainError);
}

TEST_CASE("equal residual magnitudes are homoscedastic") {
    const ResidualVector r(std::vector<double>(20, 2.5));
    const auto gq = goldfeld_quandt(r);
    CHECK(gq.applicable);
    CHECK(gq.statistic == Approx(1.0));
    CHECK_FALSE(gq.heteroscedastic);
}

TEST_CASE("short segments are inapplicable") {
    const auto gq = goldfeld_quandt(ResidualVector({1, 2, 3, 4, 5}));
    CHECK_FALSE(gq.applicable);
    CHECK_FALSE(gq.heteroscedastic);
}

TEST_CASE("two-level residuals with a two-point middle band") {
    std::vector<double> r{1, 1, 1, 1, 1, 1, 7, -5, 3, 3, 3, 3, 3, 3};
    GqOptions opts;
    opts.omit_fraction = 2.0 / 14.0;
    const auto gq = goldfeld_quandt(ResidualVector(r), opts);
    CHECK(gq.applicable);
    CHECK(gq.omitted == 2);
    CHECK(gq.d1 == 4);
    CHECK(gq.d2 == 4);
    CHECK(gq.statistic == Approx(9.0));
    CHECK(gq.critical_value == Approx(oracle::f_quantile(0.95, 4, 4)).epsilon(1e-9));
    CHECK(gq.heteroscedastic);
}

TEST_CASE("parity adjustment shrinks the middle band first") {
    // N = 15, round(3.75) = 4, N - 4 odd so d becomes 3.
    const auto gq = goldfeld_quandt(ResidualVector(std::vector<double>(15, 1.0)));
    CHECK(gq.omitted == 3);
    CHECK(gq.group_size == 6);
    CHECK(gq.d1 == 4);
}

TEST_CASE("F distribution quantiles") {
    for (int d : {1, 2, 5, 30}) CHECK(f_quantile(0.5, d, d) == Approx(1.0).epsilon(1e-10));
    CHECK(f_quantile(0.95, 10, 10) == Approx(2.9782).epsilon(1e-4));
    CHECK(f_quantile(0.95, 4, 4) == Approx(6.3882).epsilon(1e-4));
    CHECK_THROWS_AS(f_quantile(0.0, 3, 3), DomainError);
    CHECK_THROWS_AS(f_quantile(1.0, 3, 3), DomainError);
    CHECK_THROWS_AS(f_quantile(0.5, 0, 3), DomainError);
}

TEST_CASE("F quantile agrees with the integration oracle") {
    for (double d1 : {1.0, 4.0, 30.0}) {
        for (double d2 : {2.0, 10.0}) {
            for (double p : {0.05, 0.5, 0.95}) {
                const double q = f_quantile(p, d1, d2);
                CHECK(std::abs(q - oracle::f_quantile(p, d1, d2)) <= 1e-6 * std::max(1.0, q));
            }
        }
    }
}

TEST_CASE("property: reciprocal symmetry and monotone quantiles") {
    for (double d1 : {1.0, 3.0, 12.0}) {
        for (double d2 : {1.0, 7.0, 25.0}) {
            for (double x = 0.05; x < 40.0; x *= 1.7) {
                CHECK(std::abs(f_cdf(x, d1, d2) + f_cdf(1.0 / x, d2, d1) - 1.0) <= 1e-9);
            }
            double previous = 0.0;
            for (double p = 0.02; p < 0.99; p += 0.04) {
                const double q = f_quantile(p, d1, d2);
                CHECK(q > previous);
                previous = q;
            }
        }
    }
}

TEST_CASE("property: lambda is scale invariant") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> z(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> r(30);
        for (auto& v : r) v = z(rng) * (1.0 + trial * 0.1);
        const double base = goldfeld_quandt(ResidualVector(r)).statistic;
        for (double c : {-3.0, 1e-4, 250.0}) {
            std::vector<double> s = r;
            for (auto& v : s) v *= c;
            CHECK(goldfeld_quandt(ResidualVector(s)).statistic == Approx(base).epsilon(1e-12));
        }
    }
}
