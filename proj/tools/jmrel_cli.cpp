#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jmrel/dataset.hpp"
#include "jmrel/errors.hpp"
#include "jmrel/estimators.hpp"
#include "jmrel/evaluation.hpp"
#include "jmrel/heteroscedasticity.hpp"
#include "jmrel/report.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonFlags {
    std::string mode = "reasonable";
    double beta = 0.5;
    double alpha = 0.05;
    double omit_fraction = 0.25;
    double cap = 1e12;
    int scan_points = 4096;
    double accuracy = 1e-16;
    std::string phi_recovery = "unweighted";
    std::string format = "table";
    std::string out;
};

void add_solver_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--mode", f.mode, "Root selection: reasonable or asymptotic")
        ->check(CLI::IsMember({"reasonable", "asymptotic"}))
        ->capture_default_str();
    cmd->add_option("--beta", f.beta, "Exponent of the i^beta / i^-beta weights")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--alpha", f.alpha, "Goldfeld-Quandt significance level")
        ->check(CLI::Range(1e-6, 0.5))
        ->capture_default_str();
    cmd->add_option("--omit-fraction", f.omit_fraction, "Middle fraction dropped by the GQ test")
        ->check(CLI::Range(0.0, 0.9))
        ->capture_default_str();
    cmd->add_option("--cap", f.cap, "Largest N0 the solver will report")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--scan-points", f.scan_points, "Grid size for sign-change scanning")
        ->check(CLI::Range(16, 1 << 22))
        ->capture_default_str();
    cmd->add_option("--accuracy", f.accuracy, "Relative Newton step tolerance")
        ->check(CLI::Range(0.0, 1e-2))
        ->capture_default_str();
    cmd->add_option("--phi-recovery", f.phi_recovery, "Phi formula at a WNLS root")
        ->check(CLI::IsMember({"unweighted", "weighted"}))
        ->capture_default_str();
}

void add_output_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--format", f.format, "Output format")
        ->check(CLI::IsMember({"table", "csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--out", f.out, "Write output to this file instead of stdout");
}

jmrel::EstimateOptions make_options(const CommonFlags& f) {
    jmrel::EstimateOptions o;
    o.mode = *jmrel::parse_solve_mode(f.mode);
    o.beta = f.beta;
    o.gq.alpha = f.alpha;
    o.gq.omit_fraction = f.omit_fraction;
    o.root.n0_cap = f.cap;
    o.root.scan_points = f.scan_points;
    o.root.step_tolerance = f.accuracy;
    o.phi_recovery = f.phi_recovery == "weighted" ? jmrel::PhiRecovery::weighted
                                                  : jmrel::PhiRecovery::unweighted;
    try {
        o.root.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return o;
}

jmrel::FailureDataset resolve_dataset(const std::string& spec) {
    for (const auto& name : jmrel::builtin_dataset_names()) {
        if (spec == name) return jmrel::builtin_dataset(name);
    }
    const std::filesystem::path path(spec);
    if (!std::filesystem::exists(path)) {
        std::string names;
        for (const auto& n : jmrel::builtin_dataset_names()) names += " " + n;
        throw UsageError("unknown dataset '" + spec + "' (bundled:" + names +
                         ", or a path to a data file)");
    }
    return jmrel::load_dataset(path, jmrel::format_for_path(path));
}

jmrel::FailureDataset segment(const jmrel::FailureDataset& data, std::optional<std::size_t> k) {
    const std::size_t len = k.value_or(data.size());
    if (len < 3 || len > data.size()) {
        throw UsageError("--k must lie in [3, " + std::to_string(data.size()) + "]");
    }
    return jmrel::prefix(data, len);
}

/// Runs `body` with the stream selected by --out.
template <typename Fn>
void with_output(const std::string& out, Fn&& body) {
    if (out.empty()) {
        body(std::cout);
        return;
    }
    std::ofstream file(out);
    if (!file) throw std::runtime_error("cannot open output file " + out);
    body(file);
    if (!file) throw std::runtime_error("failed writing " + out);
}

int cmd_datasets(const CommonFlags& f) {
    const auto fmt = *jmrel::parse_output_format(f.format);
    with_output(f.out, [&](std::ostream& os) {
        if (fmt == jmrel::OutputFormat::json) {
            os << "[\n";
            const auto names = jmrel::builtin_dataset_names();
            for (std::size_t j = 0; j < names.size(); ++j) {
                const auto d = jmrel::builtin_dataset(names[j]);
                os << "  {\"name\": \"" << d.name() << "\", \"length\": " << d.size()
                   << ", \"unit\": \"" << d.unit() << "\", \"source\": \"" << d.source() << "\"}"
                   << (j + 1 < names.size() ? "," : "") << '\n';
            }
            os << "]\n";
            return;
        }
        if (fmt == jmrel::OutputFormat::csv) os << "name,length,unit,source\n";
        for (const auto& name : jmrel::builtin_dataset_names()) {
            const auto d = jmrel::builtin_dataset(name);
            if (fmt == jmrel::OutputFormat::csv) {
                os << d.name() << ',' << d.size() << ',' << d.unit() << ',' << d.source() << '\n';
            } else {
                os << d.name() << ", " << d.size() << ", " << d.unit() << ", " << d.source()
                   << '\n';
            }
        }
    });
    return kOk;
}

struct CurveFlags {
    std::string path;
    double max = 0.0;
    int points = 400;
};

void dump_curve(const jmrel::FailureDataset& data, const jmrel::EstimationResult& result,
                const CurveFlags& c) {
    const jmrel::ScalarFn f = jmrel::estimating_function(data, result);
    const double k = static_cast<double>(data.size());
    double hi = c.max;
    if (!(hi > k)) {
        hi = result.root.kind == jmrel::RootKind::reasonable ? std::max(2.0 * result.params.n0, 4.0 * k)
                                                             : 20.0 * k;
    }
    const double lo = k + 1e-3;
    std::ofstream os(c.path);
    if (!os) throw std::runtime_error("cannot open curve file " + c.path);
    os << "n0,f,df,d2f\n" << std::setprecision(12);
    const auto df = [&](double x) { return jmrel::numeric_derivative(f, x); };
    for (int j = 0; j < c.points; ++j) {
        const double x = lo * std::pow(hi / lo, static_cast<double>(j) / (c.points - 1));
        os << x << ',' << f(x) << ',' << df(x) << ',' << jmrel::numeric_derivative(df, x) << '\n';
    }
}

std::vector<double> read_numbers(const std::string& path, const std::string& what);

int cmd_estimate(const std::string& data_spec, std::optional<std::size_t> k,
                 const std::string& method_name, const std::string& weight_path,
                 const CommonFlags& f, const CurveFlags& curve) {
    const auto method = jmrel::parse_method(method_name);
    if (!method) throw UsageError("unknown method '" + method_name + "'");
    const auto opts = make_options(f);
    const auto data = segment(resolve_dataset(data_spec), k);
    const auto fmt = *jmrel::parse_output_format(f.format);
    std::optional<jmrel::WeightVector> explicit_weights;
    if (!weight_path.empty()) {
        auto w = read_numbers(weight_path, "weight");
        if (w.size() < data.size()) {
            throw UsageError("weight file has " + std::to_string(w.size()) +
                             " values, segment needs " + std::to_string(data.size()));
        }
        w.resize(data.size());
        try {
            explicit_weights.emplace(std::move(w));
        } catch (const jmrel::DomainError& e) {
            throw UsageError(e.what());
        }
    }
    try {
        const auto result = explicit_weights
                                ? jmrel::estimate_with_weights(data, *explicit_weights, opts)
                                : jmrel::estimate(data, *method, opts);
        with_output(f.out, [&](std::ostream& os) { jmrel::write_estimate(os, result, fmt); });
        if (!curve.path.empty()) dump_curve(data, result, curve);
    } catch (const jmrel::EstimationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kOk;
}

std::vector<double> read_numbers(const std::string& path, const std::string& what) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + what + " file " + path);
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string tok;
        while (fields >> tok) {
            try {
                std::size_t used = 0;
                values.push_back(std::stod(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw jmrel::ParseError("bad " + what + " '" + tok + "'", line_no);
            }
        }
    }
    return values;
}

int cmd_gq(const std::string& data_spec, std::optional<std::size_t> k,
           const std::string& residual_path, const CommonFlags& f) {
    const auto opts = make_options(f);
    const auto fmt = *jmrel::parse_output_format(f.format);
    std::optional<jmrel::JmParams> pilot;
    std::vector<double> res;
    if (!residual_path.empty()) {
        res = read_numbers(residual_path, "residual");
    } else {
        if (data_spec.empty()) throw UsageError("gq needs --data or --residuals");
        const auto data = segment(resolve_dataset(data_spec), k);
        try {
            const auto fit = jmrel::estimate(data, {jmrel::MethodKind::lse, 0}, opts);
            pilot = fit.params;
            const auto r = jmrel::residuals(data, fit.params);
            res.assign(r.values().begin(), r.values().end());
        } catch (const jmrel::EstimationError& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kFailure;
        }
    }
    const auto gq = jmrel::goldfeld_quandt(jmrel::ResidualVector(std::move(res)), opts.gq);
    with_output(f.out, [&](std::ostream& os) { jmrel::write_gq(os, gq, pilot, fmt); });
    return kOk;
}

int cmd_experiment(const std::string& id_text, const CommonFlags& f, double tolerance,
                   bool squared, bool summary) {
    const auto id = jmrel::parse_experiment(id_text);
    if (!id) throw UsageError("unknown experiment '" + id_text + "'");
    jmrel::ExperimentConfig cfg;
    cfg.estimate = make_options(f);
    cfg.include_squared = squared;
    const auto report = jmrel::run_experiment(*id, cfg);
    const auto fmt = *jmrel::parse_output_format(f.format);
    with_output(f.out, [&](std::ostream& os) { jmrel::write_report(os, report, fmt); });
    if (summary) {
        std::ostream& os = f.out.empty() ? std::cerr : std::cout;
        jmrel::write_deviation_summary(os, report, tolerance);
    }
    return report.any_error() ? kFailure : kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Jelinski-Moranda reliability model estimation"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string data_spec;
    std::optional<std::size_t> k;
    std::string method = "mle";
    std::string residual_path;
    std::string weight_path;
    std::string experiment_id;
    double tolerance = 0.01;
    bool squared = false;
    bool no_summary = false;
    CurveFlags curve;

    auto* datasets = app.add_subcommand("datasets", "List the bundled failure datasets");
    add_output_flags(datasets, flags);

    auto* est = app.add_subcommand("estimate", "Fit one method on one segment");
    est->add_option("--data", data_spec, "Bundled dataset name or data file path")->required();
    est->add_option("--k", k, "Segment length (first k intervals; default all)");
    est->add_option("--method", method,
                    "mle, lse, wnls-1..8, wnls2-1..8, wnls-opt, wnls-h1, wnls-h2")
        ->capture_default_str();
    est->add_option("--weights", weight_path, "Explicit weight file (one value per interval)");
    est->add_option("--dump-curve", curve.path, "Write f, f', f'' samples to this CSV file");
    est->add_option("--curve-max", curve.max, "Upper N0 of the dumped curve");
    est->add_option("--curve-points", curve.points, "Samples in the dumped curve")
        ->check(CLI::Range(2, 1000000))
        ->capture_default_str();
    add_solver_flags(est, flags);
    add_output_flags(est, flags);

    auto* gq = app.add_subcommand("gq", "Goldfeld-Quandt test on LSE residuals");
    gq->add_option("--data", data_spec, "Bundled dataset name or data file path");
    gq->add_option("--k", k, "Segment length (default all)");
    gq->add_option("--residuals", residual_path, "Test these residuals instead of fitting");
    add_solver_flags(gq, flags);
    add_output_flags(gq, flags);

    auto* exp = app.add_subcommand("experiment", "Reproduce a result table");
    exp->add_option("id", experiment_id, "exp1, exp2 or exp3")
        ->required()
        ->check(CLI::IsMember({"exp1", "exp2", "exp3"}));
    exp->add_option("--tolerance", tolerance, "Relative deviation flagged in the summary")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    exp->add_flag("--squared", squared, "Also run the squared-weight variants");
    exp->add_flag("--no-summary", no_summary, "Skip the deviation summary");
    add_solver_flags(exp, flags);
    add_output_flags(exp, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (datasets->parsed()) return cmd_datasets(flags);
        if (est->parsed()) return cmd_estimate(data_spec, k, method, weight_path, flags, curve);
        if (gq->parsed()) return cmd_gq(data_spec, k, residual_path, flags);
        if (exp->parsed()) return cmd_experiment(experiment_id, flags, tolerance, squared, !no_summary);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const jmrel::ParseError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kUsage;
}
