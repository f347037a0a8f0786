#pragma once

#include <optional>
#include <ostream>
#include <string_view>

#include "jmrel/estimators.hpp"
#include "jmrel/evaluation.hpp"

namespace jmrel {

enum class OutputFormat { table, csv, json };

std::optional<OutputFormat> parse_output_format(std::string_view text);

void write_report(std::ostream& os, const ExperimentReport& report, OutputFormat format);

/// Cells with a reference value, flagged when the relative deviation exceeds tolerance.
void write_deviation_summary(std::ostream& os, const ExperimentReport& report, double tolerance);

void write_estimate(std::ostream& os, const EstimationResult& result, OutputFormat format);

void write_gq(std::ostream& os, const GqTestResult& gq, const std::optional<JmParams>& pilot,
              OutputFormat format);

}  // namespace jmrel
