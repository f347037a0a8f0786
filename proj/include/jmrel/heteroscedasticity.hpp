#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "jmrel/dataset.hpp"
#include "jmrel/model.hpp"

namespace jmrel {

/// ε_i = x_i − 1/(Φ(N0−i+1)), index-aligned with the intervals.
class ResidualVector {
public:
    explicit ResidualVector(std::vector<double> values);

    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t j) const { return values_[j]; }

private:
    std::vector<double> values_;
};

/// Throws DomainError if the model rate is nonpositive at any index.
ResidualVector residuals(const FailureDataset& data, const JmParams& p);

struct GqOptions {
    double alpha = 0.05;
    double omit_fraction = 0.25;
    int model_parameters = 2;  ///< k in the dof formula; (N0, Φ)
};

struct GqTestResult {
    double statistic = 0.0;  ///< λ
    int d1 = 0;
    int d2 = 0;
    double critical_value = 0.0;
    double alpha = 0.05;
    bool heteroscedastic = false;
    std::size_t omitted = 0;  ///< d, the dropped middle band
    std::size_t group_size = 0;
    double eer_low = 0.0;
    double eer_high = 0.0;
    bool applicable = false;
};

/// Goldfeld-Quandt on residuals of one global fit. Observations stay in
/// failure-index order (the regressor is i). The middle d = round(N·omit)
/// observations are dropped, d shrunk (then grown) by one if N − d is odd;
/// λ = (EER_high/dof) / (EER_low/dof) with dof = (N − d − 2k)/2 and the
/// verdict is λ > F^{-1}(1 − α; dof, dof). Inapplicable when dof < 1.
GqTestResult goldfeld_quandt(const ResidualVector& res, const GqOptions& opts = {});

/// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

/// F(d1, d2) distribution function.
double f_cdf(double x, double d1, double d2);

/// Inverse of f_cdf via bracketed bisection/Newton, 1e-10 relative.
/// DomainError unless 0 < p < 1 and both dof >= 1.
double f_quantile(double p, double d1, double d2);

}  // namespace jmrel
