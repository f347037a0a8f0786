#include <doctest.h>

#include <cmath>
#include <random>

#include "jmrel/dataset.hpp"
#include "jmrel/errors.hpp"
#include "jmrel/weights.hpp"

using namespace jmrel;
using doctest::Approx;

namespace {

std::vector<double> values(const WeightVector& w) { return {w.values().begin(), w.values().end()}; }

WeightVector scheme(int index, const FailureDataset& d, double beta = 0.5) {
    return empirical_weights({WeightKind::empirical, index, beta}, d);
}

void check_close(const WeightVector& a, const std::vector<double>& b) {
    REQUIRE(a.size() == b.size());
    for (std::size_t j = 0; j < b.size(); ++j) CHECK(a[j] == Approx(b[j]).epsilon(1e-14));
}

}  // namespace

TEST_CASE("weight vectors reject nonpositive and non-finite entries") {
    CHECK_THROWS_AS(WeightVector({1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(WeightVector({1.0, -2.0}), DomainError);
    CHECK_THROWS_AS(WeightVector({1.0, INFINITY}), DomainError);
    CHECK(values(WeightVector::unit(3)) == std::vector<double>{1, 1, 1});
}

TEST_CASE("empirical catalog entries") {
    const FailureDataset three("t", {4, 5, 6});
    check_close(scheme(5, three), {1, 2, 3});
    check_close(scheme(7, prefix(builtin_dataset("ntds"), 3)), {9, 21, 32});
    // i^-beta is WNLS-3, i^beta is WNLS-4.
    const FailureDataset four("f", {1, 1, 1, 1});
    check_close(scheme(4, four), {1, std::sqrt(2.0), std::sqrt(3.0), 2});
    check_close(scheme(3, four), {1, 1 / std::sqrt(2.0), 1 / std::sqrt(3.0), 0.5});
    check_close(scheme(1, three), {4, 4.5, 5});
    check_close(scheme(6, three), {1, 0.5, 1.0 / 3.0});
}

TEST_CASE("scheme validation") {
    CHECK_THROWS(WeightScheme{WeightKind::empirical, 0}.validate());
    CHECK_THROWS(WeightScheme{WeightKind::empirical, 9}.validate());
    CHECK_THROWS(WeightScheme{WeightKind::empirical, 3, -1.0}.validate());
    CHECK_NOTHROW(WeightScheme{WeightKind::empirical, 8}.validate());
}

TEST_CASE("optimal weights") {
    check_close(optimal_weights(JmParams::make(3, 1), 2), {9, 4});
    const std::size_t k = 6;
    // Last index of the segment: Φ(N0 − k + 1) = 2 · 1.5.
    const auto w = optimal_weights(JmParams::make(k + 0.5, 2), k);
    CHECK(w[k - 1] == Approx(9.0));
    const auto p = JmParams::make(12.3, 0.07);
    const auto ow = optimal_weights(p, 10);
    for (std::size_t i = 1; i <= 10; ++i) {
        CHECK(ow[i - 1] == Approx(1.0 / interval_moments(p, i).variance).epsilon(1e-13));
        if (i > 1) CHECK(ow[i - 1] < ow[i - 2]);
    }
    CHECK_THROWS_AS(optimal_weights(JmParams::make(10, 1), 10), DomainError);
}

TEST_CASE("inverse residual weights") {
    check_close(inverse_residual_weights(ResidualVector({1, 2})), {1, 0.25});
    check_close(inverse_residual_weights(ResidualVector({-3, 3})), {1.0 / 9, 1.0 / 9});
    const auto w = inverse_residual_weights(ResidualVector({0.0, 2.0}), 1e-4);
    CHECK(w[0] == Approx(1e4));
    const ResidualVector zeros({0.0, 0.0});
    CHECK(default_residual_floor(zeros) == 1e-300);
    CHECK(std::isfinite(inverse_residual_weights(zeros)[0]));
    const ResidualVector mixed({0.0, 2.0, -4.0});
    CHECK(default_residual_floor(mixed) == Approx(1e-12 * 4.0));
}

TEST_CASE("squared weights") {
    check_close(squared(WeightVector({1, 2, 3})), {1, 4, 9});
    CHECK(squared(WeightVector::unit(4)) == WeightVector::unit(4));
    const FailureDataset five("f", {1, 2, 3, 4, 5});
    check_close(squared(scheme(4, five)), values(scheme(5, five)));
    check_close(squared(scheme(4, five)), values(scheme(4, five, 1.0)));
    const auto sq = empirical_weights({WeightKind::squared_empirical, 7}, five);
    check_close(sq, values(squared(scheme(7, five))));
}

TEST_CASE("property: catalog cross-identities and positivity") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> x(0.01, 1000.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> xs(1 + trial % 40);
        for (auto& v : xs) v = x(rng);
        const FailureDataset d("r", xs);
        for (int s = 1; s <= 8; ++s) {
            const auto ws = scheme(s, d);
            for (double w : ws.values()) CHECK((w > 0 && std::isfinite(w)));
        }
        for (auto [a, b] : {std::pair{1, 2}, std::pair{7, 8}, std::pair{5, 6}, std::pair{3, 4}}) {
            const auto wa = scheme(a, d);
            const auto wb = scheme(b, d);
            for (std::size_t j = 0; j < d.size(); ++j) CHECK(wa[j] * wb[j] == Approx(1.0).epsilon(1e-13));
        }
    }
}
