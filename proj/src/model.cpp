#include "jmrel/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "jmrel/errors.hpp"

namespace jmrel {

namespace {

double positive_rate(const JmParams& p, std::size_t i) {
    const double rate = failure_rate(p, i);
    if (!(rate > 0.0)) {
        throw DomainError("failure rate at i=" + std::to_string(i) +
                          " is nonpositive (N0=" + std::to_string(p.n0) + ")");
    }
    return rate;
}

}  // namespace

JmParams JmParams::make(double n0, double phi) {
    if (!std::isfinite(n0) || !(n0 > 0.0)) throw std::invalid_argument("N0 must be > 0");
    if (!std::isfinite(phi) || !(phi > 0.0)) throw std::invalid_argument("phi must be > 0");
    return JmParams{n0, phi};
}

double failure_rate(const JmParams& p, std::size_t i) {
    if (i < 1) throw std::invalid_argument("failure index is 1-based");
    return p.phi * (p.n0 - static_cast<double>(i) + 1.0);
}

double reliability(const JmParams& p, std::size_t i, double x) {
    if (x < 0.0) throw DomainError("reliability needs x >= 0");
    return std::exp(-positive_rate(p, i) * x);
}

double mtbf(const JmParams& p, std::size_t i) { return 1.0 / positive_rate(p, i); }

double mean_failures(const JmParams& p, double t) {
    if (t < 0.0) throw DomainError("cumulative time must be >= 0");
    return p.n0 * -std::expm1(-p.phi * t);
}

IntervalMoments interval_moments(const JmParams& p, std::size_t i) {
    const double mean = mtbf(p, i);
    return {mean, mean * mean};
}

}  // namespace jmrel
