#include "jmrel/report.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

namespace jmrel {

namespace {

using nlohmann::ordered_json;

std::string fixed(std::optional<double> v, int decimals) {
    if (!v || !std::isfinite(*v)) return v ? (std::isnan(*v) ? "nan" : "inf") : "";
    std::ostringstream os;
    os << std::fixed << std::setprecision(decimals) << *v;
    return os.str();
}

std::string cell(const ExperimentRecord* r, std::optional<double> v, int decimals) {
    if (!r || r->error) return "fail";
    const std::string s = fixed(v, decimals);
    return s.empty() ? "-" : s;
}

ordered_json number(std::optional<double> v) {
    if (!v || !std::isfinite(*v)) return nullptr;
    return *v;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

ordered_json config_json(const ExperimentReport& report) {
    const EstimateOptions& o = report.config.estimate;
    ordered_json cfg;
    cfg["mode"] = std::string(to_string(o.mode));
    cfg["beta"] = o.beta;
    cfg["alpha"] = o.gq.alpha;
    cfg["omit_fraction"] = o.gq.omit_fraction;
    cfg["phi_recovery"] = o.phi_recovery == PhiRecovery::weighted ? "weighted" : "unweighted";
    cfg["step_tolerance"] = o.root.step_tolerance;
    cfg["residual_tolerance"] = o.root.residual_tolerance;
    cfg["lower_margin"] = o.root.lower_margin;
    cfg["n0_cap"] = o.root.n0_cap;
    cfg["scan_points"] = o.root.scan_points;
    cfg["max_iterations"] = o.root.max_iterations;
    if (report.id == ExperimentId::exp1) cfg["split"] = report.config.split;
    cfg["include_squared"] = report.config.include_squared;
    return cfg;
}

void write_json(std::ostream& os, const ExperimentReport& report) {
    ordered_json doc;
    doc["experiment_id"] = std::string(to_string(report.id));
    doc["config"] = config_json(report);
    doc["rows"] = ordered_json::array();
    for (const auto& r : report.rows) {
        ordered_json row;
        row["method"] = r.method;
        row["dataset"] = r.dataset;
        if (report.id == ExperimentId::exp1) {
            row["n0"] = number(r.n0);
            row["phi"] = number(r.phi);
            row["re"] = number(r.re);
            row["re_training"] = number(r.re_training);
            row["re_testing"] = number(r.re_testing);
        } else {
            row["re"] = number(r.re);
        }
        if (r.optimal_solutions) row["optimal_solutions"] = *r.optimal_solutions;
        row["skipped"] = r.terms_skipped;
        row["error"] = r.error ? ordered_json(*r.error) : ordered_json(nullptr);
        doc["rows"].push_back(std::move(row));
    }
    if (report.id == ExperimentId::exp2) {
        ordered_json counts;
        for (const auto& d : report.datasets) {
            ordered_json per;
            for (const auto& m : report.methods) {
                const auto* r = report.find(m, d);
                per[m] = r && r->optimal_solutions ? ordered_json(*r->optimal_solutions)
                                                   : ordered_json(nullptr);
            }
            counts[d] = std::move(per);
        }
        doc["optimal_solution_counts"] = std::move(counts);
    }
    os << doc.dump(2) << '\n';
}

void write_csv(std::ostream& os, const ExperimentReport& report) {
    os << "experiment,method,dataset,n0,phi,re,re_training,re_testing,optimal_solutions,"
          "skipped,error\n";
    for (const auto& r : report.rows) {
        os << to_string(report.id) << ',' << csv_escape(r.method) << ',' << csv_escape(r.dataset)
           << ',' << fixed(r.n0, 4) << ',' << fixed(r.phi, 6) << ',' << fixed(r.re, 4) << ','
           << fixed(r.re_training, 4) << ',' << fixed(r.re_testing, 4) << ','
           << (r.optimal_solutions ? std::to_string(*r.optimal_solutions) : "") << ','
           << r.terms_skipped << ',' << (r.error ? csv_escape(*r.error) : "") << '\n';
    }
}

void write_grid(std::ostream& os, const ExperimentReport& report, const std::string& title,
                bool counts) {
    os << title << '\n' << std::left << std::setw(10) << "Method";
    for (const auto& d : report.datasets) os << std::right << std::setw(13) << d;
    os << '\n';
    for (const auto& m : report.methods) {
        os << std::left << std::setw(10) << m;
        for (const auto& d : report.datasets) {
            const auto* r = report.find(m, d);
            std::string text;
            if (counts) {
                text = r && r->optimal_solutions ? std::to_string(*r->optimal_solutions) : "fail";
            } else {
                text = cell(r, r ? r->re : std::nullopt, 4);
            }
            os << std::right << std::setw(13) << text;
        }
        os << '\n';
    }
}

void write_table(std::ostream& os, const ExperimentReport& report) {
    if (report.id == ExperimentId::exp1) {
        os << "RE_I on " << report.datasets.front() << ", split at " << report.config.split
           << '\n';
        os << std::left << std::setw(10) << "Method" << std::right << std::setw(11) << "N"
           << std::setw(11) << "Phi" << std::setw(11) << "RE_I" << std::setw(11) << "Training"
           << std::setw(11) << "Testing" << '\n';
        for (const auto& r : report.rows) {
            os << std::left << std::setw(10) << r.method << std::right << std::setw(11)
               << cell(&r, r.n0, 4) << std::setw(11) << cell(&r, r.phi, 6) << std::setw(11)
               << cell(&r, r.re, 4) << std::setw(11) << cell(&r, r.re_training, 4)
               << std::setw(11) << cell(&r, r.re_testing, 4) << '\n';
        }
    } else {
        const std::string mode(to_string(report.config.estimate.mode));
        write_grid(os, report, "RE_II, " + mode + " roots", false);
        if (report.id == ExperimentId::exp2) {
            os << '\n';
            write_grid(os, report, "Prefixes with a reasonable root", true);
        }
    }
    for (const auto& r : report.rows) {
        if (r.error) os << "error: " << r.method << '/' << r.dataset << ": " << *r.error << '\n';
    }
}

}  // namespace

std::optional<OutputFormat> parse_output_format(std::string_view text) {
    if (text == "table") return OutputFormat::table;
    if (text == "csv") return OutputFormat::csv;
    if (text == "json") return OutputFormat::json;
    return std::nullopt;
}

void write_report(std::ostream& os, const ExperimentReport& report, OutputFormat format) {
    switch (format) {
        case OutputFormat::table: write_table(os, report); break;
        case OutputFormat::csv: write_csv(os, report); break;
        case OutputFormat::json: write_json(os, report); break;
    }
}

void write_deviation_summary(std::ostream& os, const ExperimentReport& report,
                             double tolerance) {
    const auto devs = deviations(report);
    std::size_t over = 0;
    os << "Deviation from reference values (tolerance " << fixed(100.0 * tolerance, 2)
       << "%)\n";
    os << std::left << std::setw(10) << "Method" << std::setw(8) << "Dataset" << std::setw(19)
       << "Field" << std::right << std::setw(13) << "Computed" << std::setw(13) << "Reference"
       << std::setw(10) << "Dev%" << '\n';
    for (const auto& d : devs) {
        const bool bad = !(d.relative <= tolerance);
        over += bad ? 1 : 0;
        const int decimals = d.field == ReportField::phi ? 6
                             : d.field == ReportField::optimal_solutions ? 0
                                                                           : 4;
        os << std::left << std::setw(10) << d.method << std::setw(8) << d.dataset
           << std::setw(19) << to_string(d.field) << std::right << std::setw(13)
           << (d.computed ? fixed(d.computed, decimals) : "fail") << std::setw(13)
           << fixed(d.reference, decimals) << std::setw(10) << fixed(100.0 * d.relative, 2)
           << (bad ? "  *" : "") << '\n';
    }
    os << over << " of " << devs.size() << " cells outside tolerance\n";
}

void write_estimate(std::ostream& os, const EstimationResult& result, OutputFormat format) {
    const std::string kind(to_string(result.root.kind));
    switch (format) {
        case OutputFormat::table:
            os << "method      " << result.method.label() << '\n'
               << "segment     " << result.segment_length << '\n'
               << "N0          " << fixed(result.params.n0, 4) << '\n'
               << "phi         " << fixed(result.params.phi, 6) << '\n'
               << "root        " << kind << (result.root.trace.capped ? " (capped)" : "") << '\n'
               << "iterations  " << result.root.iterations << '\n'
               << "residual    " << result.root.residual << '\n';
            if (result.root.bracket) {
                os << "bracket     [" << std::setprecision(17) << result.root.bracket->lo << ", "
                   << result.root.bracket->hi << "]\n"
                   << std::setprecision(6);
            }
            if (result.pilot) {
                os << "pilot       N0=" << fixed(result.pilot->n0, 4)
                   << " phi=" << fixed(result.pilot->phi, 6) << '\n';
            }
            if (result.gq) {
                os << "gq          lambda=" << fixed(result.gq->statistic, 4)
                   << " critical=" << fixed(result.gq->critical_value, 4) << " verdict="
                   << (!result.gq->applicable     ? "inapplicable"
                       : result.gq->heteroscedastic ? "heteroscedastic"
                                                    : "homoscedastic")
                   << (result.reweighted ? " (refit)" : " (kept LSE)") << '\n';
            }
            if (result.weights) {
                os << "weights    ";
                for (double w : result.weights->values()) os << ' ' << std::setprecision(6) << w;
                os << '\n';
            }
            break;
        case OutputFormat::csv:
            os << "method,segment,n0,phi,root,iterations\n"
               << result.method.label() << ',' << result.segment_length << ','
               << fixed(result.params.n0, 4) << ',' << fixed(result.params.phi, 6) << ',' << kind
               << ',' << result.root.iterations << '\n';
            break;
        case OutputFormat::json: {
            ordered_json doc;
            doc["method"] = result.method.label();
            doc["segment_length"] = result.segment_length;
            doc["n0"] = result.params.n0;
            doc["phi"] = result.params.phi;
            doc["root"] = {{"kind", kind},
                           {"iterations", result.root.iterations},
                           {"residual", number(result.root.residual)},
                           {"capped", result.root.trace.capped},
                           {"slope_sign", result.root.trace.slope_sign},
                           {"curvature_sign", result.root.trace.curvature_sign}};
            if (result.root.bracket) {
                doc["root"]["bracket"] = {result.root.bracket->lo, result.root.bracket->hi};
            }
            if (result.pilot) doc["pilot"] = {{"n0", result.pilot->n0}, {"phi", result.pilot->phi}};
            if (result.gq) {
                doc["gq"] = {{"statistic", number(result.gq->statistic)},
                             {"critical_value", number(result.gq->critical_value)},
                             {"applicable", result.gq->applicable},
                             {"heteroscedastic", result.gq->heteroscedastic},
                             {"reweighted", result.reweighted}};
            }
            if (result.weights) {
                doc["weights"] = std::vector<double>(result.weights->values().begin(),
                                                     result.weights->values().end());
            }
            os << doc.dump(2) << '\n';
            break;
        }
    }
}

void write_gq(std::ostream& os, const GqTestResult& gq, const std::optional<JmParams>& pilot,
              OutputFormat format) {
    const std::string verdict = !gq.applicable     ? "inapplicable"
                                : gq.heteroscedastic ? "heteroscedastic"
                                                     : "homoscedastic";
    switch (format) {
        case OutputFormat::table:
            if (pilot) {
                os << "lse N0      " << fixed(pilot->n0, 4) << '\n'
                   << "lse phi     " << fixed(pilot->phi, 6) << '\n';
            }
            if (gq.applicable) {
                os << "lambda      " << fixed(gq.statistic, 4) << '\n'
                   << "dof         (" << gq.d1 << ", " << gq.d2 << ")\n"
                   << "critical    " << fixed(gq.critical_value, 4) << " at alpha "
                   << gq.alpha << '\n'
                   << "omitted     " << gq.omitted << '\n';
            }
            os << "verdict     " << verdict << '\n';
            break;
        case OutputFormat::csv:
            os << "lse_n0,lse_phi,lambda,d1,d2,critical,alpha,verdict\n"
               << (pilot ? fixed(pilot->n0, 4) : "") << ','
               << (pilot ? fixed(pilot->phi, 6) : "") << ','
               << fixed(gq.statistic, 4) << ',' << gq.d1 << ',' << gq.d2 << ','
               << fixed(gq.critical_value, 4) << ',' << gq.alpha << ',' << verdict << '\n';
            break;
        case OutputFormat::json: {
            ordered_json doc;
            if (pilot) doc["lse"] = {{"n0", pilot->n0}, {"phi", pilot->phi}};
            doc["statistic"] = number(gq.statistic);
            doc["d1"] = gq.d1;
            doc["d2"] = gq.d2;
            doc["critical_value"] = number(gq.critical_value);
            doc["alpha"] = gq.alpha;
            doc["omitted"] = gq.omitted;
            doc["group_size"] = gq.group_size;
            doc["applicable"] = gq.applicable;
            doc["verdict"] = verdict;
            os << doc.dump(2) << '\n';
            break;
        }
    }
}

}  // namespace jmrel
