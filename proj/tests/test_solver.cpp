#include <doctest.h>

#include <cmath>

#include "jmrel/dataset.hpp"
#include "jmrel/errors.hpp"
#include "jmrel/estimators.hpp"
#include "jmrel/solver.hpp"

using namespace jmrel;
using doctest::Approx;

namespace {

double dx(double) { return 1.0; }

}  // namespace

TEST_CASE("mode names round-trip") {
    CHECK(parse_solve_mode("reasonable") == SolveMode::reasonable);
    CHECK(parse_solve_mode("asymptotic") == SolveMode::asymptotic);
    CHECK_FALSE(parse_solve_mode("other").has_value());
    CHECK(to_string(RootKind::failed) == "failed");
}

TEST_CASE("config validation") {
    RootConfig cfg;
    CHECK_NOTHROW(cfg.validate(10));
    cfg.scan_points = 1;
    CHECK_THROWS_AS(cfg.validate(10), std::invalid_argument);
    cfg = {};
    cfg.step_tolerance = 0.0;
    CHECK_THROWS_AS(cfg.validate(10), std::invalid_argument);
    cfg = {};
    cfg.n0_cap = 5.0;
    CHECK_THROWS_AS(cfg.validate(10), std::invalid_argument);
}

TEST_CASE("linear function has its root found and bracketed") {
    const double c = 17.25;
    const auto r = find_root([c](double x) { return x - c; }, dx, 10, {}, SolveMode::reasonable);
    CHECK(r.kind == RootKind::reasonable);
    CHECK(std::abs(r.n0 - c) <= 1e-12);
    REQUIRE(r.bracket);
    CHECK(r.bracket->lo <= r.n0);
    CHECK(r.n0 <= r.bracket->hi);
}

TEST_CASE("smallest of several roots wins") {
    const auto f = [](double x) { return (x - 12.0) * (x - 40.0); };
    const auto df = [](double x) { return 2.0 * x - 52.0; };
    const auto r = find_root(f, df, 10, {}, SolveMode::reasonable);
    CHECK(r.kind == RootKind::reasonable);
    CHECK(r.n0 == Approx(12.0).epsilon(1e-12));
}

TEST_CASE("MLE on the 26-interval NTDS segment") {
    const auto d = prefix(builtin_dataset("ntds"), 26);
    const auto f = [&](double n) { return f_mle(d, n); };
    const auto df = [&](double n) { return df_mle(d, n); };
    const auto r = find_root(f, df, 26, {}, SolveMode::reasonable);
    CHECK(r.kind == RootKind::reasonable);
    CHECK(std::abs(r.n0 - 31.2159) < 1e-3);
    CHECK(std::abs(f(r.n0)) < 1e-10);
    REQUIRE(r.bracket);
    const RootConfig cfg;
    const double ulp = std::nextafter(r.n0, 1e300) - r.n0;
    CHECK(r.bracket->width() <= std::max(cfg.step_tolerance * std::max(1.0, r.n0) * 10.0, 4.0 * ulp));
    CHECK(f(r.bracket->lo) * f(r.bracket->hi) <= 0.0);
    CHECK(r.trace.slope_sign != 0);
}

TEST_CASE("no sign change gives an asymptotic limit, flagged at the cap") {
    // 1/x decays to zero without crossing.
    const auto f = [](double x) { return 1.0 / x; };
    const auto df = [](double x) { return -1.0 / (x * x); };
    const auto r = find_root(f, df, 5, {}, SolveMode::reasonable);
    CHECK(r.kind == RootKind::asymptotic);
    CHECK(r.trace.capped);
    CHECK(r.n0 == RootConfig{}.n0_cap);
    CHECK_FALSE(r.bracket);
}

TEST_CASE("asymptotic mode never reports a reasonable root") {
    const auto r = find_root([](double x) { return x - 20.0; }, dx, 10, {}, SolveMode::asymptotic);
    CHECK(r.kind != RootKind::reasonable);
    const auto d = prefix(builtin_dataset("ntds"), 26);
    const auto r2 = find_root([&](double n) { return f_mle(d, n); },
                              [&](double n) { return df_mle(d, n); }, 26, {},
                              SolveMode::asymptotic);
    CHECK(r2.kind == RootKind::asymptotic);
    CHECK(r2.n0 > 26.0);
}

TEST_CASE("non-finite evaluations fail") {
    const auto r = find_root([](double) { return std::nan(""); }, dx, 3, {}, SolveMode::reasonable);
    CHECK(r.kind == RootKind::failed);
}

TEST_CASE("solver is deterministic") {
    const auto d = builtin_dataset("musa2");
    const auto f = [&](double n) { return f_lse(d, n); };
    const auto df = [&](double n) { return df_wls(d, WeightVector::unit(d.size()), n); };
    for (auto mode : {SolveMode::reasonable, SolveMode::asymptotic}) {
        const auto a = find_root(f, df, d.size(), {}, mode);
        const auto b = find_root(f, df, d.size(), {}, mode);
        CHECK(a.n0 == b.n0);
        CHECK(a.kind == b.kind);
        CHECK(a.iterations == b.iterations);
        CHECK(a.residual == b.residual);
    }
}

TEST_CASE("numeric derivative") {
    CHECK(numeric_derivative([](double x) { return x * x; }, 3.0) == Approx(6.0).epsilon(1e-5));
    CHECK(std::abs(numeric_derivative([](double) { return 4.2; }, 3.0)) < 1e-9);
    const auto d = prefix(builtin_dataset("ntds"), 26);
    const double numeric = numeric_derivative([&](double n) { return f_mle(d, n); }, 40.0);
    CHECK(numeric == Approx(df_mle(d, 40.0)).epsilon(1e-4));
    CHECK_THROWS_AS(numeric_derivative([](double x) { return std::sqrt(x - 3.0); }, 3.0 + 1e-7),
                    DomainError);
}
