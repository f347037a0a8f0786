#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "jmrel/dataset.hpp"
#include "jmrel/estimators.hpp"
#include "jmrel/model.hpp"
#include "jmrel/weights.hpp"

namespace oracle {

/// F(d1, d2) distribution function by adaptive Simpson integration of the
/// density, written independently of the incomplete-beta implementation.
double f_cdf(double x, double d1, double d2);

/// Inverts oracle::f_cdf by bisection.
double f_quantile(double p, double d1, double d2);

/// Central difference with a caller-chosen step.
double central_difference(const std::function<double(double)>& f, double x, double h);

/// Synthetic JM intervals: x_i = MTBF_i · (1 + noise · u_i), u_i uniform on [-1, 1].
jmrel::FailureDataset synthetic_dataset(std::mt19937_64& rng, std::size_t n, double n0,
                                        double phi, double noise);

/// Exponential draws from the JM model itself.
jmrel::FailureDataset sampled_dataset(std::mt19937_64& rng, std::size_t n, double n0,
                                      double phi);

jmrel::WeightVector random_weights(std::mt19937_64& rng, std::size_t n, double lo = 0.1,
                                   double hi = 10.0);

struct GridMinimum {
    double n0 = 0.0;
    double phi = 0.0;
    double value = 0.0;
};

/// Exhaustive search of S_w over N0 ∈ (n, n + span] in steps of `step` and a
/// log grid of Φ (`per_decade` points per decade over [phi_lo, phi_hi]), then
/// coordinate refinement around the best cell.
GridMinimum brute_force_minimum(const jmrel::FailureDataset& data, const jmrel::WeightVector& w,
                                double span = 50.0, double step = 1e-3, int per_decade = 64,
                                double phi_lo = 1e-6, double phi_hi = 1e2);

/// S_w written out directly, no library calls.
double weighted_sse(const jmrel::FailureDataset& data, const jmrel::WeightVector& w, double n0,
                    double phi);

}  // namespace oracle
