#include "jmrel/estimators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "jmrel/errors.hpp"

namespace jmrel {

namespace {

void require_domain(const FailureDataset& data, double n0) {
    if (!(n0 > static_cast<double>(data.size()))) {
        throw DomainError("estimating functions need N0 > n (N0=" + std::to_string(n0) +
                          ", n=" + std::to_string(data.size()) + ")");
    }
}

void require_matching(const FailureDataset& data, const WeightVector& w) {
    if (w.size() != data.size()) throw std::invalid_argument("weights and data differ in length");
}

/// The four WLS sums and their N0-derivatives, for weights that may depend on N0.
struct WlsSums {
    double a = 0, b = 0, c = 0, d = 0;
    double da = 0, db = 0, dc = 0, dd = 0;

};

using WeightAt = std::function<std::pair<double, double>(std::size_t, double)>;

WlsSums wls_sums(const FailureDataset& data, double n0, const WeightAt& weight) {
    WlsSums s;
    const auto xs = data.intervals();
    for (std::size_t j = 0; j < xs.size(); ++j) {
        const double r = 1.0 / (n0 - static_cast<double>(j));
        const double r2 = r * r;
        const double r3 = r2 * r;
        const auto [w, dw] = weight(j, n0);
        const double x = xs[j];
        s.a += w * x * r2;
        s.b += w * r2;
        s.c += w * x * r;
        s.d += w * r3;
        s.da += dw * x * r2 - 2.0 * w * x * r3;
        s.db += dw * r2 - 2.0 * w * r3;
        s.dc += dw * x * r - w * x * r2;
        s.dd += dw * r3 - 3.0 * w * r3 * r;
    }
    return s;
}

WeightAt fixed(const WeightVector& w) {
    return [&w](std::size_t j, double) { return std::pair{w[j], 0.0}; };
}

/// Prefix sums over i < j of p_i·{1, i, x_i, i·x_i, i²·x_i}. For a fixed j they give
///   direct(j) = Σ p_i (i−j)(x_i − x_j)
///   full(j)   = Σ p_i (i−j) [(N0+1)(x_i − x_j) + j·x_j − i·x_i].
struct PairPrefix {
    double s0 = 0.0, s_i = 0.0, s_x = 0.0, s_ix = 0.0, s_iix = 0.0;

    double direct(double j, double x) const { return (s_ix - j * s_x) - x * (s_i - j * s0); }
    double full(double j, double x, double n0) const {
        const double rest = j * x * (s_i - j * s0) - (s_iix - j * s_ix);
        return (n0 + 1.0) * direct(j, x) + rest;
    }
    void add(double j, double x, double p) {
        s0 += p;
        s_i += j * p;
        s_x += p * x;
        s_ix += j * p * x;
        s_iix += j * j * p * x;
    }
};

/// a·b − c·d of the four WLS sums cancels to ~N0^-6 from terms of size ~N0^-4.
/// Using R_i − R_j = (i − j)·R_i·R_j the pair terms combine into
///   Σ_{i<j} A_i A_j (i−j) [(N0+1)(x_i − x_j) + j·x_j − i·x_i],  A_i = w_i R_i³,
/// which keeps N0-sized quantities out of every subtraction.
double wls_value(const FailureDataset& data, double n0, const WeightAt& weight) {
    const auto xs = data.intervals();
    PairPrefix pre;
    double total = 0.0;
    for (std::size_t idx = 0; idx < xs.size(); ++idx) {
        const double j = static_cast<double>(idx + 1);
        const double r = 1.0 / (n0 - static_cast<double>(idx));
        const double a = weight(idx, n0).first * r * r * r;
        total += a * pre.full(j, xs[idx], n0);
        pre.add(j, xs[idx], a);
    }
    return total;
}

double wls_slope(const FailureDataset& data, double n0, const WeightAt& weight) {
    const auto xs = data.intervals();
    PairPrefix pre, pre_d;
    double total = 0.0;
    for (std::size_t idx = 0; idx < xs.size(); ++idx) {
        const double j = static_cast<double>(idx + 1);
        const double x = xs[idx];
        const double r = 1.0 / (n0 - static_cast<double>(idx));
        const double r3 = r * r * r;
        const auto [w, dw] = weight(idx, n0);
        const double a = w * r3;
        const double da = dw * r3 - 3.0 * a * r;
        total += a * (pre.direct(j, x) + pre_d.full(j, x, n0)) + da * pre.full(j, x, n0);
        pre.add(j, x, a);
        pre_d.add(j, x, da);
    }
    return total;
}

/// Φ²(N0−i+1)² evaluated at the N0 being solved for.
WeightAt tracking_optimal(double phi) {
    const double phi2 = phi * phi;
    return [phi2](std::size_t j, double n0) {
        const double m = n0 - static_cast<double>(j);
        return std::pair{phi2 * m * m, 2.0 * phi2 * m};
    };
}

struct MleSums {
    double total = 0.0;     // Σ x_i
    double weighted = 0.0;  // Σ (i−1) x_i
};

MleSums mle_sums(const FailureDataset& data) {
    MleSums s;
    const auto xs = data.intervals();
    for (std::size_t j = 0; j < xs.size(); ++j) {
        s.total += xs[j];
        s.weighted += static_cast<double>(j) * xs[j];
    }
    return s;
}

std::string lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

double recover_phi(const FailureDataset& data, const WeightVector& w, double n0,
                   PhiRecovery policy) {
    return policy == PhiRecovery::weighted ? phi_wls(data, w, n0) : phi_lse(data, n0);
}

RootResult solve_or_throw(const ScalarFn& f, const ScalarFn& df, const FailureDataset& data,
                          const MethodSpec& method, const EstimateOptions& opts) {
    RootResult root = find_root(f, df, data.size(), opts.root, opts.mode);
    if (root.kind == RootKind::failed) {
        throw EstimationError(method.label() + " on " + data.name() +
                              ": root solve failed (" + root.trace.note + ")");
    }
    return root;
}

EstimationResult fit_fixed_weights(const FailureDataset& data, const MethodSpec& method,
                                   WeightVector w, const EstimateOptions& opts) {
    const auto f = [&](double n0) { return wls_value(data, n0, fixed(w)); };
    const auto df = [&](double n0) { return wls_slope(data, n0, fixed(w)); };
    EstimationResult out;
    out.root = solve_or_throw(f, df, data, method, opts);
    out.params = JmParams::make(out.root.n0, recover_phi(data, w, out.root.n0, opts.phi_recovery));
    out.method = method;
    out.segment_length = data.size();
    out.weights = std::move(w);
    return out;
}

}  // namespace

std::string MethodSpec::label() const {
    switch (kind) {
        case MethodKind::mle: return "MLE";
        case MethodKind::lse: return "LSE";
        case MethodKind::wnls: return "WNLS-" + std::to_string(index);
        case MethodKind::wnls_squared: return "WNLS2-" + std::to_string(index);
        case MethodKind::wnls_opt: return "WNLS_opt";
        case MethodKind::wnls_h1: return "WNLS_H1";
        case MethodKind::wnls_h2: return "WNLS_H2";
        case MethodKind::wnls_explicit: return "WNLS";
    }
    return "?";
}

std::string MethodSpec::cli_name() const {
    switch (kind) {
        case MethodKind::mle: return "mle";
        case MethodKind::lse: return "lse";
        case MethodKind::wnls: return "wnls-" + std::to_string(index);
        case MethodKind::wnls_squared: return "wnls2-" + std::to_string(index);
        case MethodKind::wnls_opt: return "wnls-opt";
        case MethodKind::wnls_h1: return "wnls-h1";
        case MethodKind::wnls_h2: return "wnls-h2";
        case MethodKind::wnls_explicit: return "wnls";
    }
    return "?";
}

std::optional<MethodSpec> parse_method(std::string_view text) {
    const std::string key = lower(text);
    for (const auto& m : table_methods()) {
        if (key == m.cli_name() || key == lower(m.label())) return m;
    }
    for (const auto& m : squared_methods()) {
        if (key == m.cli_name() || key == lower(m.label())) return m;
    }
    return std::nullopt;
}

std::vector<MethodSpec> table_methods() {
    std::vector<MethodSpec> out{{MethodKind::mle, 0}, {MethodKind::lse, 0}};
    for (int i = 1; i <= 8; ++i) out.push_back({MethodKind::wnls, i});
    out.push_back({MethodKind::wnls_opt, 0});
    out.push_back({MethodKind::wnls_h1, 0});
    out.push_back({MethodKind::wnls_h2, 0});
    return out;
}

std::vector<MethodSpec> squared_methods() {
    std::vector<MethodSpec> out;
    for (int i = 1; i <= 8; ++i) out.push_back({MethodKind::wnls_squared, i});
    return out;
}

double f_mle(const FailureDataset& data, double n0) {
    require_domain(data, n0);
    // With c = Σ(i−1)x/Σx and R_c = 1/(N0−c), each 1/(N0−i+1) − R_c equals
    // (i−1−c)·R_i·R_c, so f = R_c²·(D + Σ(i−1−c)²·R_i) with D = Σ(i−1) − n·c.
    const MleSums s = mle_sums(data);
    const double c = s.weighted / s.total;
    const double n = static_cast<double>(data.size());
    const double rc = 1.0 / (n0 - c);
    double spread = 0.0;
    for (std::size_t j = 0; j < data.size(); ++j) {
        const double offset = static_cast<double>(j) - c;
        spread += offset * offset / (n0 - static_cast<double>(j));
    }
    const double d = 0.5 * n * (n - 1.0) - n * c;
    return rc * rc * (d + spread);
}

double df_mle(const FailureDataset& data, double n0) {
    require_domain(data, n0);
    const MleSums s = mle_sums(data);
    const double c = s.weighted / s.total;
    const double n = static_cast<double>(data.size());
    const double rc = 1.0 / (n0 - c);
    double spread = 0.0;
    double spread_slope = 0.0;
    for (std::size_t j = 0; j < data.size(); ++j) {
        const double offset = static_cast<double>(j) - c;
        const double r = 1.0 / (n0 - static_cast<double>(j));
        spread += offset * offset * r;
        spread_slope -= offset * offset * r * r;
    }
    const double d = 0.5 * n * (n - 1.0) - n * c;
    return -2.0 * rc * rc * rc * (d + spread) + rc * rc * spread_slope;
}

double phi_mle(const FailureDataset& data, double n0) {
    const MleSums s = mle_sums(data);
    const double denom = n0 * s.total - s.weighted;
    if (!(denom > 0.0)) throw DomainError("MLE phi denominator is nonpositive");
    return static_cast<double>(data.size()) / denom;
}

double f_wls(const FailureDataset& data, const WeightVector& w, double n0) {
    require_domain(data, n0);
    require_matching(data, w);
    return wls_value(data, n0, fixed(w));
}

double df_wls(const FailureDataset& data, const WeightVector& w, double n0) {
    require_domain(data, n0);
    require_matching(data, w);
    return wls_slope(data, n0, fixed(w));
}

double f_lse(const FailureDataset& data, double n0) {
    return f_wls(data, WeightVector::unit(data.size()), n0);
}

double phi_wls(const FailureDataset& data, const WeightVector& w, double n0) {
    require_domain(data, n0);
    require_matching(data, w);
    const WlsSums s = wls_sums(data, n0, fixed(w));
    if (!(s.c > 0.0)) throw DomainError("WLS phi denominator is nonpositive");
    return s.b / s.c;
}

double phi_lse(const FailureDataset& data, double n0) {
    return phi_wls(data, WeightVector::unit(data.size()), n0);
}

double objective_swls(const FailureDataset& data, const WeightVector& w, const JmParams& p) {
    require_matching(data, w);
    double total = 0.0;
    for (std::size_t i = 1; i <= data.size(); ++i) {
        const double e = data.x(i) - mtbf(p, i);
        total += w[i - 1] * e * e;
    }
    return total;
}

Gradient objective_gradient(const FailureDataset& data, const WeightVector& w,
                            const JmParams& p) {
    require_matching(data, w);
    Gradient g;
    for (std::size_t i = 1; i <= data.size(); ++i) {
        const double m = p.n0 - static_cast<double>(i) + 1.0;
        if (!(m > 0.0)) throw DomainError("objective gradient outside the valid regime");
        const double e = data.x(i) - 1.0 / (p.phi * m);
        g.d_n0 += 2.0 * w[i - 1] * e / (p.phi * m * m);
        g.d_phi += 2.0 * w[i - 1] * e / (m * p.phi * p.phi);
    }
    return g;
}

Gradient mle_score(const FailureDataset& data, const JmParams& p) {
    Gradient g;
    g.d_phi = static_cast<double>(data.size()) / p.phi;
    for (std::size_t i = 1; i <= data.size(); ++i) {
        const double m = p.n0 - static_cast<double>(i) + 1.0;
        if (!(m > 0.0)) throw DomainError("score outside the valid regime");
        g.d_n0 += 1.0 / m - p.phi * data.x(i);
        g.d_phi -= m * data.x(i);
    }
    return g;
}

EstimationResult estimate(const FailureDataset& data, const MethodSpec& method,
                          const EstimateOptions& opts) {
    if (data.size() < 2) throw std::invalid_argument("estimation needs at least 2 intervals");
    const std::size_t k = data.size();

    switch (method.kind) {
        case MethodKind::mle: {
            const auto f = [&](double n0) { return f_mle(data, n0); };
            const auto df = [&](double n0) { return df_mle(data, n0); };
            EstimationResult out;
            out.root = solve_or_throw(f, df, data, method, opts);
            out.params = JmParams::make(out.root.n0, phi_mle(data, out.root.n0));
            out.method = method;
            out.segment_length = k;
            return out;
        }
        case MethodKind::lse:
            return fit_fixed_weights(data, method, WeightVector::unit(k), opts);
        case MethodKind::wnls:
        case MethodKind::wnls_squared: {
            const WeightKind kind = method.kind == MethodKind::wnls
                                        ? WeightKind::empirical
                                        : WeightKind::squared_empirical;
            return fit_fixed_weights(
                data, method, empirical_weights({kind, method.index, opts.beta}, data), opts);
        }
        case MethodKind::wnls_explicit:
            throw std::invalid_argument("explicit weights go through estimate_with_weights");
        default: break;
    }

    const MethodSpec lse{MethodKind::lse, 0};
    const EstimationResult pilot = fit_fixed_weights(data, lse, WeightVector::unit(k), opts);

    if (method.kind == MethodKind::wnls_opt) {
        const auto weight = tracking_optimal(pilot.params.phi);
        const auto f = [&](double n0) { return wls_value(data, n0, weight); };
        const auto df = [&](double n0) { return wls_slope(data, n0, weight); };
        EstimationResult out;
        out.root = solve_or_throw(f, df, data, method, opts);
        const double n0 = out.root.n0;
        WeightVector w = optimal_weights({n0, pilot.params.phi}, k);
        out.params = JmParams::make(n0, recover_phi(data, w, n0, opts.phi_recovery));
        out.method = method;
        out.segment_length = k;
        out.weights = std::move(w);
        out.pilot = pilot.params;
        out.reweighted = true;
        return out;
    }

    const ResidualVector res = residuals(data, pilot.params);
    const GqTestResult gq = goldfeld_quandt(res, opts.gq);
    if (!gq.applicable || !gq.heteroscedastic) {
        EstimationResult out = pilot;
        out.method = method;
        out.pilot = pilot.params;
        out.gq = gq;
        return out;
    }

    WeightVector w = method.kind == MethodKind::wnls_h1 ? optimal_weights(pilot.params, k)
                                                        : inverse_residual_weights(res);
    EstimationResult out = fit_fixed_weights(data, method, std::move(w), opts);
    out.pilot = pilot.params;
    out.gq = gq;
    out.reweighted = true;
    return out;
}

EstimationResult estimate_with_weights(const FailureDataset& data, WeightVector w,
                                       const EstimateOptions& opts) {
    if (data.size() < 2) throw std::invalid_argument("estimation needs at least 2 intervals");
    require_matching(data, w);
    return fit_fixed_weights(data, {MethodKind::wnls_explicit, 0}, std::move(w), opts);
}

ScalarFn estimating_function(const FailureDataset& data, const EstimationResult& result) {
    if (result.method.kind == MethodKind::mle) {
        return [data](double n0) { return f_mle(data, n0); };
    }
    if (result.method.kind == MethodKind::wnls_opt && result.pilot) {
        return [data, weight = tracking_optimal(result.pilot->phi)](double n0) {
            return wls_value(data, n0, weight);
        };
    }
    const WeightVector w = result.weights.value_or(WeightVector::unit(data.size()));
    return [data, w](double n0) { return f_wls(data, w, n0); };
}

}  // namespace jmrel
