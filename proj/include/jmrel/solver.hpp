#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace jmrel {

using ScalarFn = std::function<double(double)>;

/// How a root of an estimating function f(N0) = 0 is selected.
///   reasonable: take a genuine root (sign change) above the segment length
///               when one exists, otherwise the asymptotic limit.
///   asymptotic: always follow Newton along the asymptotic branch of f.
enum class SolveMode { reasonable, asymptotic };

enum class RootKind { reasonable, asymptotic, failed };

std::string_view to_string(SolveMode mode);
std::string_view to_string(RootKind kind);
std::optional<SolveMode> parse_solve_mode(std::string_view text);

struct RootConfig {
    double step_tolerance = 1e-16;      ///< relative Newton step criterion
    double residual_tolerance = 1e-12;  ///< |f| accepted as an exact zero
    double lower_margin = 1e-6;         ///< search domain starts at k + margin
    double n0_cap = 1e12;
    int scan_points = 4096;             ///< geometric grid for bracketing
    int max_iterations = 200;

    /// Throws std::invalid_argument on a nonsensical configuration.
    void validate(std::size_t segment_length = 0) const;
};

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
};

/// Diagnostics only; nothing here gates a result.
struct RootTrace {
    double start = 0.0;       ///< Newton starting point (0 when bracketed)
    bool capped = false;      ///< Newton ran into n0_cap
    int slope_sign = 0;       ///< sign of f' at the solution
    int curvature_sign = 0;   ///< sign of f'' at the solution
    std::string note;
};

struct RootResult {
    double n0 = 0.0;
    RootKind kind = RootKind::failed;
    double residual = 0.0;
    int iterations = 0;
    std::optional<Bracket> bracket;
    RootTrace trace;
};

/// Solves f(N0) = 0 on (k + lower_margin, n0_cap].
///
/// Reasonable mode scans a geometric grid for the smallest sign change,
/// bisects it down to a few ulps and polishes with one Newton step. Without a
/// sign change, and always in asymptotic mode, damped Newton starts on the
/// asymptotic tail of f (past the last sign change or turning point seen on
/// the grid, and never below k + 1) and is followed until the relative step
/// drops under step_tolerance or the cap is reached.
RootResult find_root(const ScalarFn& f, const ScalarFn& df, std::size_t k,
                     const RootConfig& cfg, SolveMode mode);

/// Central difference with h = max(1e-6, 1e-6·|x|).
double numeric_derivative(const ScalarFn& f, double x);

}  // namespace jmrel
