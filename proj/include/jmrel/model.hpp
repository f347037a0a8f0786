#pragma once

#include <cstddef>

namespace jmrel {

/// Jelinski-Moranda parameters: inherent error count N0 (may be non-integer)
/// and per-error hazard Φ (1/time). Both strictly positive.
struct JmParams {
    double n0 = 0.0;
    double phi = 0.0;

    /// Throws std::invalid_argument unless both parameters are finite and > 0.
    static JmParams make(double n0, double phi);

    bool operator==(const JmParams&) const = default;
};

struct IntervalMoments {
    double mean = 0.0;
    double variance = 0.0;
};

/// Φ·(N0 − i + 1). Negative or zero once i > N0 (no errors left); callers
/// check the sign.
double failure_rate(const JmParams& p, std::size_t i);

/// exp(−Φ(N0−i+1)·x). DomainError for nonpositive rate or negative x.
double reliability(const JmParams& p, std::size_t i, double x);

/// Mean time to the i-th failure, 1 / (Φ(N0−i+1)). DomainError when the rate
/// is nonpositive.
double mtbf(const JmParams& p, std::size_t i);

/// Expected failures by cumulative time t: N0·(1 − exp(−Φt)).
double mean_failures(const JmParams& p, double t);

/// x_i is exponential, so variance is mean squared.
IntervalMoments interval_moments(const JmParams& p, std::size_t i);

}  // namespace jmrel
