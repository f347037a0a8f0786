#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jmrel/dataset.hpp"
#include "jmrel/heteroscedasticity.hpp"
#include "jmrel/model.hpp"

namespace jmrel {

/// Per-interval WNLS weights; every entry strictly positive and finite.
class WeightVector {
public:
    explicit WeightVector(std::vector<double> values);

    static WeightVector unit(std::size_t n);

    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t j) const { return values_[j]; }

    WeightVector scaled(double c) const;

    bool operator==(const WeightVector&) const = default;

private:
    std::vector<double> values_;
};

enum class WeightKind { unit, empirical, squared_empirical, optimal, inverse_residual };

/// Empirical catalog, with S_i = x_1 + ... + x_i:
///   1: S_i / i     2: i / S_i     3: i^-β     4: i^β
///   5: i           6: 1 / i       7: S_i      8: 1 / S_i
/// Labels 3 and 4 follow the published result tables (i^-β is WNLS-3).
struct WeightScheme {
    WeightKind kind = WeightKind::unit;
    int index = 0;
    double beta = 0.5;

    void validate() const;
};

/// Realizes unit, empirical and squared-empirical schemes on a segment.
WeightVector empirical_weights(const WeightScheme& scheme, const FailureDataset& data);

/// w_i = Φ²(N0 − i + 1)², the reciprocal interval variance.
WeightVector optimal_weights(const JmParams& p, std::size_t k);

/// 1e-12 · (mean |ε|)², or 1e-300 when every residual is zero.
double default_residual_floor(const ResidualVector& residuals);

/// w_i = 1 / max(ε_i², floor).
WeightVector inverse_residual_weights(const ResidualVector& residuals,
                                      std::optional<double> floor = std::nullopt);

WeightVector squared(const WeightVector& w);

}  // namespace jmrel
