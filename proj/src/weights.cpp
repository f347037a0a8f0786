#include "jmrel/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jmrel/errors.hpp"

namespace jmrel {

WeightVector::WeightVector(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("weight vector is empty");
    for (double w : values_) {
        if (!std::isfinite(w) || !(w > 0.0)) {
            throw DomainError("weights must be positive and finite");
        }
    }
}

WeightVector WeightVector::unit(std::size_t n) { return WeightVector(std::vector<double>(n, 1.0)); }

WeightVector WeightVector::scaled(double c) const {
    std::vector<double> out(values_);
    for (double& w : out) w *= c;
    return WeightVector(std::move(out));
}

void WeightScheme::validate() const {
    if ((kind == WeightKind::empirical || kind == WeightKind::squared_empirical) &&
        (index < 1 || index > 8)) {
        throw std::invalid_argument("empirical weight index must be in [1, 8]");
    }
    if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be > 0");
}

WeightVector empirical_weights(const WeightScheme& scheme, const FailureDataset& data) {
    scheme.validate();
    const std::size_t n = data.size();
    if (scheme.kind == WeightKind::unit) return WeightVector::unit(n);
    if (scheme.kind != WeightKind::empirical && scheme.kind != WeightKind::squared_empirical) {
        throw std::invalid_argument("scheme is not data-driven; use optimal/inverse_residual");
    }

    std::vector<double> w(n);
    double cumulative = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double i = static_cast<double>(j + 1);
        cumulative += data.intervals()[j];
        switch (scheme.index) {
            case 1: w[j] = cumulative / i; break;
            case 2: w[j] = i / cumulative; break;
            case 3: w[j] = std::pow(i, -scheme.beta); break;
            case 4: w[j] = std::pow(i, scheme.beta); break;
            case 5: w[j] = i; break;
            case 6: w[j] = 1.0 / i; break;
            case 7: w[j] = cumulative; break;
            case 8: w[j] = 1.0 / cumulative; break;
        }
    }
    WeightVector out(std::move(w));
    return scheme.kind == WeightKind::squared_empirical ? squared(out) : out;
}

WeightVector optimal_weights(const JmParams& p, std::size_t k) {
    if (!(p.n0 > static_cast<double>(k))) {
        throw DomainError("optimal weights need N0 > segment length");
    }
    std::vector<double> w(k);
    for (std::size_t j = 0; j < k; ++j) {
        const double rate = p.phi * (p.n0 - static_cast<double>(j));
        w[j] = rate * rate;
    }
    return WeightVector(std::move(w));
}

double default_residual_floor(const ResidualVector& residuals) {
    double mean_abs = 0.0;
    for (double e : residuals.values()) mean_abs += std::abs(e);
    mean_abs /= static_cast<double>(residuals.size());
    return mean_abs > 0.0 ? 1e-12 * mean_abs * mean_abs : 1e-300;
}

WeightVector inverse_residual_weights(const ResidualVector& residuals,
                                      std::optional<double> floor) {
    const double lower = floor.value_or(default_residual_floor(residuals));
    if (!(lower > 0.0)) throw std::invalid_argument("residual floor must be > 0");
    std::vector<double> w(residuals.size());
    for (std::size_t j = 0; j < w.size(); ++j) {
        w[j] = 1.0 / std::max(residuals[j] * residuals[j], lower);
    }
    return WeightVector(std::move(w));
}

WeightVector squared(const WeightVector& w) {
    std::vector<double> out(w.values().begin(), w.values().end());
    for (double& v : out) v *= v;
    return WeightVector(std::move(out));
}

}  // namespace jmrel
