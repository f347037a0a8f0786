#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jmrel/dataset.hpp"
#include "jmrel/estimators.hpp"
#include "jmrel/model.hpp"

namespace jmrel {

struct TermError {
    std::size_t index = 0;
    double x = 0.0;
    double mtbf = 0.0;
    double relative_error = 0.0;  ///< |x − mtbf| / x
};

/// Relative-error report. `re` is 100 · Σ relative_error / normalizer.
struct ReReport {
    double re = 0.0;
    std::optional<double> re_training;
    std::optional<double> re_testing;
    std::size_t terms_used = 0;
    std::size_t terms_skipped = 0;
    double normalizer = 0.0;
    std::vector<TermError> per_term;
};

/// Fit-once error: RE over all n terms, training over i <= m, testing over i > m.
/// Indices where the model rate is nonpositive are skipped and counted.
ReReport re_split(const FailureDataset& data, const JmParams& p, std::size_t m);

/// One-step prediction sweep: for i = 3..n fit on the first i−1 intervals and
/// predict x_i. `re` is the summed error over the number of intervals n minus
/// skipped terms. Also counts prefixes whose root was a genuine (bracketed) root.
struct SequentialReport {
    ReReport re;
    std::size_t optimal_solutions = 0;
    std::size_t failed_fits = 0;
    std::vector<std::string> failures;
};

SequentialReport sequential_evaluation(const FailureDataset& data, const MethodSpec& method,
                                       const EstimateOptions& opts = {});

/// Throws EstimationError when every term fails.
ReReport re_one_step(const FailureDataset& data, const MethodSpec& method,
                     const EstimateOptions& opts = {});

std::size_t count_optimal_solutions(const FailureDataset& data, const MethodSpec& method,
                                    const EstimateOptions& opts = {});

/// Worker count for sweeps: JM_ESTIMATE_THREADS if set and positive, else
/// the hardware concurrency (at least 1).
unsigned worker_threads();

enum class ExperimentId { exp1, exp2, exp3 };

std::string_view to_string(ExperimentId id);
std::optional<ExperimentId> parse_experiment(std::string_view text);

struct ExperimentConfig {
    EstimateOptions estimate;  ///< mode is overridden by the experiment
    bool include_squared = false;  ///< exp2/exp3: append WNLS2-1..8 rows
    std::size_t split = 26;    ///< exp1 training length
};

struct ExperimentRecord {
    std::string method;
    std::string dataset;
    std::optional<double> n0;
    std::optional<double> phi;
    std::optional<double> re;
    std::optional<double> re_training;
    std::optional<double> re_testing;
    std::optional<std::size_t> optimal_solutions;
    std::size_t terms_skipped = 0;
    std::optional<std::string> error;
};

struct ExperimentReport {
    ExperimentId id = ExperimentId::exp1;
    ExperimentConfig config;
    std::vector<std::string> datasets;
    std::vector<std::string> methods;
    std::vector<ExperimentRecord> rows;  ///< method-major, datasets in order

    const ExperimentRecord* find(std::string_view method, std::string_view dataset) const;
    bool any_error() const;
};

/// exp1: NTDS split at config.split, fit once (reasonable roots).
/// exp2: one-step RE with reasonable roots plus optimal-solution counts.
/// exp3: one-step RE with asymptotic roots.
ExperimentReport run_experiment(ExperimentId id, const ExperimentConfig& config = {});

enum class ReportField { n0, phi, re, re_training, re_testing, optimal_solutions };

std::string_view to_string(ReportField field);

/// Published reference value for one cell, if one exists.
std::optional<double> reference_value(ExperimentId id, std::string_view method,
                                      std::string_view dataset, ReportField field);

struct Deviation {
    std::string method;
    std::string dataset;
    ReportField field = ReportField::re;
    std::optional<double> computed;
    double reference = 0.0;
    double relative = 0.0;  ///< |computed − reference| / |reference|; inf if missing
};

std::vector<Deviation> deviations(const ExperimentReport& report);

}  // namespace jmrel
