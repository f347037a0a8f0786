#include "jmrel/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "jmrel/errors.hpp"

namespace jmrel {

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

std::vector<double> geometric_grid(double lo, double hi, int points) {
    std::vector<double> grid(static_cast<std::size_t>(points));
    const double log_lo = std::log(lo);
    const double span = std::log(hi) - log_lo;
    for (int j = 0; j < points; ++j) {
        grid[static_cast<std::size_t>(j)] = std::exp(log_lo + span * j / (points - 1));
    }
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

void annotate(RootResult& r, const ScalarFn& df) {
    if (r.kind == RootKind::failed) return;
    const double slope = df(r.n0);
    r.trace.slope_sign = sign_of(slope);
    try {
        r.trace.curvature_sign = sign_of(numeric_derivative(df, r.n0));
    } catch (const DomainError&) {
        r.trace.curvature_sign = 0;
    }
}

RootResult bisect_and_polish(const ScalarFn& f, const ScalarFn& df, double a, double b,
                             double fa, const RootConfig& cfg) {
    RootResult r;
    int iterations = 0;
    while (true) {
        const double mid = a + 0.5 * (b - a);
        const double bound = cfg.step_tolerance * std::max(1.0, std::abs(mid)) * 10.0;
        if (b - a <= bound || mid <= a || mid >= b) break;
        const double fm = f(mid);
        ++iterations;
        if (!std::isfinite(fm)) {
            r.kind = RootKind::failed;
            r.n0 = mid;
            r.trace.note = "non-finite f inside bracket";
            return r;
        }
        if (fm == 0.0) {
            a = b = mid;
            break;
        }
        if (sign_of(fm) == sign_of(fa)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }

    double best = a;
    double best_f = f(a);
    if (b != a) {
        const double fb = f(b);
        if (std::abs(fb) < std::abs(best_f)) {
            best = b;
            best_f = fb;
        }
        const double mid = a + 0.5 * (b - a);
        const double slope = df(mid);
        if (std::isfinite(slope) && slope != 0.0) {
            const double polished = mid - f(mid) / slope;
            ++iterations;
            if (polished >= a && polished <= b) {
                const double fp = f(polished);
                if (std::abs(fp) < std::abs(best_f)) {
                    best = polished;
                    best_f = fp;
                }
            }
        }
    }

    r.n0 = best;
    r.residual = best_f;
    r.kind = RootKind::reasonable;
    r.iterations = iterations;
    r.bracket = Bracket{a, b};
    return r;
}

/// Index just past the last sign change or turning point of the sampled f.
std::size_t tail_index(const std::vector<double>& values) {
    std::size_t last = 0;
    bool any = false;
    for (std::size_t j = 0; j + 1 < values.size(); ++j) {
        if (sign_of(values[j]) != sign_of(values[j + 1])) {
            last = j;
            any = true;
        }
        if (j + 2 < values.size()) {
            const int s1 = sign_of(values[j + 1] - values[j]);
            const int s2 = sign_of(values[j + 2] - values[j + 1]);
            if (s1 != 0 && s2 != 0 && s1 != s2) {
                last = j + 1;
                any = true;
            }
        }
    }
    if (!any) return 0;
    return std::min(last + 2, values.size() - 1);
}

RootResult tail_newton(const ScalarFn& f, const ScalarFn& df, double start, double lo,
                       const RootConfig& cfg) {
    RootResult r;
    r.trace.start = start;
    double x = start;
    for (int it = 1; it <= cfg.max_iterations; ++it) {
        const double fx = f(x);
        const double dx = df(x);
        r.iterations = it;
        if (!std::isfinite(fx) || !std::isfinite(dx)) {
            r.n0 = x;
            r.kind = RootKind::failed;
            r.trace.note = "non-finite f or f' during Newton";
            return r;
        }
        if (fx == 0.0) {
            r.n0 = x;
            r.residual = 0.0;
            r.kind = RootKind::asymptotic;
            r.trace.note = "Newton hit an exact zero";
            return r;
        }
        if (dx == 0.0) {
            r.n0 = x;
            r.residual = fx;
            r.kind = RootKind::failed;
            r.trace.note = "zero derivative during Newton";
            return r;
        }
        double step = -fx / dx;
        double next = x + step;
        for (int halvings = 0; next <= lo && halvings < 200; ++halvings) {
            step *= 0.5;
            next = x + step;
        }
        if (next <= lo) {
            r.n0 = x;
            r.residual = fx;
            r.kind = RootKind::failed;
            r.trace.note = "Newton step could not be kept inside the domain";
            return r;
        }
        if (next >= cfg.n0_cap) {
            r.n0 = cfg.n0_cap;
            r.residual = f(cfg.n0_cap);
            r.kind = RootKind::asymptotic;
            r.trace.capped = true;
            r.trace.note = "Newton reached n0_cap along the asymptote";
            return r;
        }
        if (std::abs(next - x) <= cfg.step_tolerance * std::max(1.0, std::abs(x))) {
            r.n0 = next;
            r.residual = f(next);
            r.kind = RootKind::asymptotic;
            r.trace.note = "relative Newton step below step_tolerance";
            return r;
        }
        x = next;
    }
    r.n0 = x;
    r.residual = f(x);
    r.kind = RootKind::failed;
    r.trace.note = "max_iterations exhausted";
    return r;
}

}  // namespace

std::string_view to_string(SolveMode mode) {
    return mode == SolveMode::reasonable ? "reasonable" : "asymptotic";
}

std::string_view to_string(RootKind kind) {
    switch (kind) {
        case RootKind::reasonable: return "reasonable";
        case RootKind::asymptotic: return "asymptotic";
        case RootKind::failed: return "failed";
    }
    return "failed";
}

std::optional<SolveMode> parse_solve_mode(std::string_view text) {
    if (text == "reasonable") return SolveMode::reasonable;
    if (text == "asymptotic") return SolveMode::asymptotic;
    return std::nullopt;
}

void RootConfig::validate(std::size_t segment_length) const {
    if (!(step_tolerance > 0.0) || !(residual_tolerance > 0.0) || !(lower_margin > 0.0)) {
        throw std::invalid_argument("root tolerances and margin must be > 0");
    }
    if (scan_points < 2) throw std::invalid_argument("scan_points must be >= 2");
    if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
    if (!(n0_cap > static_cast<double>(segment_length) + lower_margin)) {
        throw std::invalid_argument("n0_cap must exceed the search lower bound");
    }
}

RootResult find_root(const ScalarFn& f, const ScalarFn& df, std::size_t k,
                     const RootConfig& cfg, SolveMode mode) {
    cfg.validate(k);
    const double lo = static_cast<double>(k) + cfg.lower_margin;
    const auto grid = geometric_grid(lo, cfg.n0_cap, cfg.scan_points);

    std::vector<double> values(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        values[j] = f(grid[j]);
        if (!std::isfinite(values[j])) {
            RootResult r;
            r.n0 = grid[j];
            r.kind = RootKind::failed;
            r.trace.note = "non-finite f on the scan grid";
            return r;
        }
    }

    if (mode == SolveMode::reasonable) {
        for (std::size_t j = 0; j < grid.size(); ++j) {
            if (std::abs(values[j]) <= 0.0) {
                RootResult r;
                r.n0 = grid[j];
                r.kind = RootKind::reasonable;
                r.bracket = Bracket{grid[j], grid[j]};
                annotate(r, df);
                return r;
            }
            if (j + 1 < grid.size() && sign_of(values[j]) != sign_of(values[j + 1]) &&
                values[j + 1] != 0.0) {
                RootResult r = bisect_and_polish(f, df, grid[j], grid[j + 1], values[j], cfg);
                annotate(r, df);
                return r;
            }
        }
    }

    const double start = std::max(static_cast<double>(k) + 1.0, grid[tail_index(values)]);
    RootResult r = tail_newton(f, df, start, lo, cfg);
    if (mode == SolveMode::reasonable && r.kind != RootKind::failed) {
        r.trace.note = "no sign change on the search domain; " + r.trace.note;
    }
    annotate(r, df);
    return r;
}

double numeric_derivative(const ScalarFn& f, double x) {
    const double h = std::max(1e-6, 1e-6 * std::abs(x));
    const double up = f(x + h);
    const double down = f(x - h);
    if (!std::isfinite(up) || !std::isfinite(down)) {
        throw DomainError("non-finite evaluation in numeric derivative");
    }
    return (up - down) / (2.0 * h);
}

}  // namespace jmrel
