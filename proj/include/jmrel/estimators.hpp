#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jmrel/dataset.hpp"
#include "jmrel/heteroscedasticity.hpp"
#include "jmrel/model.hpp"
#include "jmrel/solver.hpp"
#include "jmrel/weights.hpp"

namespace jmrel {

enum class MethodKind { mle, lse, wnls, wnls_squared, wnls_opt, wnls_h1, wnls_h2, wnls_explicit };

/// One estimation pipeline. `index` selects the empirical weight (1..8) for
/// wnls and wnls_squared.
struct MethodSpec {
    MethodKind kind = MethodKind::mle;
    int index = 0;

    /// wnls_explicit is the caller-supplied weight vector of estimate_with_weights.
    /// Row label as printed in result tables: MLE, LSE, WNLS-3, WNLS2-7, WNLS_opt, ...
    std::string label() const;
    /// Command-line spelling: mle, lse, wnls-3, wnls2-7, wnls-opt, wnls-h1, ...
    std::string cli_name() const;

    bool operator==(const MethodSpec&) const = default;
};

/// Accepts both cli_name() and label() spellings, case-insensitively.
std::optional<MethodSpec> parse_method(std::string_view text);

/// The thirteen rows of the result tables, in table order.
std::vector<MethodSpec> table_methods();

/// Squared-weight variants WNLS2-1 .. WNLS2-8.
std::vector<MethodSpec> squared_methods();

/// How Φ is recovered from a WNLS root N0.
///   unweighted: Σ 1/(N0−i+1)² / Σ x_i/(N0−i+1), the LSE formula. This is
///               what the published result tables use for every WNLS row.
///   weighted:   Σ w_i/(N0−i+1)² / Σ w_i x_i/(N0−i+1), the exact stationary
///               point of the weighted objective.
enum class PhiRecovery { unweighted, weighted };

struct EstimateOptions {
    SolveMode mode = SolveMode::reasonable;
    RootConfig root;
    double beta = 0.5;
    GqOptions gq;
    PhiRecovery phi_recovery = PhiRecovery::unweighted;
};

struct EstimationResult {
    JmParams params;
    MethodSpec method;
    RootResult root;
    std::size_t segment_length = 0;
    std::optional<WeightVector> weights;
    std::optional<JmParams> pilot;      ///< LSE pilot fit for opt / H1 / H2
    std::optional<GqTestResult> gq;     ///< H1 / H2 only
    bool reweighted = false;            ///< H1 / H2: the refit actually ran
};

// Estimating functions. All need n0 > n (DomainError otherwise).

/// Σ 1/(N0−i+1) − n / (N0 − Σ(i−1)x_i / Σx_i)
double f_mle(const FailureDataset& data, double n0);
double df_mle(const FailureDataset& data, double n0);
/// n / (N0 Σx_i − Σ(i−1)x_i)
double phi_mle(const FailureDataset& data, double n0);

/// (Σ w x R²)(Σ w R²) − (Σ w x R)(Σ w R³) with R = 1/(N0−i+1).
double f_wls(const FailureDataset& data, const WeightVector& w, double n0);
double df_wls(const FailureDataset& data, const WeightVector& w, double n0);
double f_lse(const FailureDataset& data, double n0);
/// Σ w R² / Σ w x R
double phi_wls(const FailureDataset& data, const WeightVector& w, double n0);
double phi_lse(const FailureDataset& data, double n0);

/// Σ w_i (x_i − 1/(Φ(N0−i+1)))². DomainError in the invalid regime.
double objective_swls(const FailureDataset& data, const WeightVector& w, const JmParams& p);

struct Gradient {
    double d_n0 = 0.0;
    double d_phi = 0.0;
};

/// Closed-form partial derivatives of objective_swls.
Gradient objective_gradient(const FailureDataset& data, const WeightVector& w,
                            const JmParams& p);

/// Log-likelihood score (∂lnL/∂N0, ∂lnL/∂Φ).
Gradient mle_score(const FailureDataset& data, const JmParams& p);

/// Full (N0, Φ) estimation of one method on one segment (length >= 2).
/// Throws EstimationError when the root solve fails.
EstimationResult estimate(const FailureDataset& data, const MethodSpec& method,
                          const EstimateOptions& opts = {});

/// WNLS with a caller-supplied weight vector (|w| must equal the segment length).
EstimationResult estimate_with_weights(const FailureDataset& data, WeightVector w,
                                       const EstimateOptions& opts = {});

/// The estimating function whose root produced `result` (for diagnostics and curves).
ScalarFn estimating_function(const FailureDataset& data, const EstimationResult& result);

}  // namespace jmrel
