#include "jmrel/heteroscedasticity.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "jmrel/errors.hpp"

namespace jmrel {

namespace {

// Continued fraction for I_x(a, b), modified Lentz. Converges quickly for
// x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 10000; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) break;
    }
    return h;
}

double f_density(double x, double d1, double d2) {
    if (x <= 0.0) return 0.0;
    const double log_num = 0.5 * d1 * std::log(d1) + 0.5 * d2 * std::log(d2) +
                           (0.5 * d1 - 1.0) * std::log(x) -
                           0.5 * (d1 + d2) * std::log(d2 + d1 * x);
    const double log_beta =
        std::lgamma(0.5 * d1) + std::lgamma(0.5 * d2) - std::lgamma(0.5 * (d1 + d2));
    return std::exp(log_num - log_beta);
}

}  // namespace

ResidualVector::ResidualVector(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("residual vector is empty");
    for (double e : values_) {
        if (!std::isfinite(e)) throw DomainError("residuals must be finite");
    }
}

ResidualVector residuals(const FailureDataset& data, const JmParams& p) {
    std::vector<double> out(data.size());
    for (std::size_t i = 1; i <= data.size(); ++i) out[i - 1] = data.x(i) - mtbf(p, i);
    return ResidualVector(std::move(out));
}

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("incomplete beta needs a, b > 0");
    if (x < 0.0 || x > 1.0) throw DomainError("incomplete beta needs 0 <= x <= 1");
    if (x == 0.0 || x == 1.0) return x;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double f_cdf(double x, double d1, double d2) {
    if (!(d1 > 0.0) || !(d2 > 0.0)) throw DomainError("F distribution needs positive dof");
    if (x <= 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    // I_{d1 x/(d1 x + d2)}(d1/2, d2/2), written to avoid 1 - z cancellation.
    const double z = d1 * x / (d1 * x + d2);
    const double zc = d2 / (d1 * x + d2);
    if (z < 0.5) return incomplete_beta(0.5 * d1, 0.5 * d2, z);
    return 1.0 - incomplete_beta(0.5 * d2, 0.5 * d1, zc);
}

double f_quantile(double p, double d1, double d2) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("F quantile needs 0 < p < 1");
    if (!(d1 >= 1.0) || !(d2 >= 1.0)) throw DomainError("F quantile needs dof >= 1");

    double lo = 0.0;
    double hi = 1.0;
    while (f_cdf(hi, d1, d2) < p) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) throw DomainError("F quantile bracket overflow");
    }

    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 500; ++it) {
        const double g = f_cdf(x, d1, d2) - p;
        if (g == 0.0) return x;
        if (g < 0.0) lo = x; else hi = x;
        if (hi - lo <= 1e-12 * hi) break;

        const double dens = f_density(x, d1, d2);
        double next = dens > 0.0 ? x - g / dens : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 1e-14 * x) return next;
        x = next;
    }
    return 0.5 * (lo + hi);
}

GqTestResult goldfeld_quandt(const ResidualVector& res, const GqOptions& opts) {
    if (!(opts.alpha > 0.0 && opts.alpha < 1.0)) throw std::invalid_argument("alpha in (0,1)");
    if (!(opts.omit_fraction >= 0.0 && opts.omit_fraction < 1.0)) {
        throw std::invalid_argument("omit fraction in [0,1)");
    }

    GqTestResult out;
    out.alpha = opts.alpha;
    const std::size_t n = res.size();
    auto d = static_cast<std::size_t>(std::lround(static_cast<double>(n) * opts.omit_fraction));
    if (d > n) d = n;
    if ((n - d) % 2 != 0) d = d > 0 ? d - 1 : d + 1;
    out.omitted = d;
    out.group_size = d <= n ? (n - d) / 2 : 0;

    const long dof = static_cast<long>(out.group_size) - opts.model_parameters;
    if (dof < 1) {
        out.applicable = false;
        return out;
    }
    out.applicable = true;
    out.d1 = out.d2 = static_cast<int>(dof);

    for (std::size_t j = 0; j < out.group_size; ++j) {
        out.eer_low += res[j] * res[j];
        out.eer_high += res[n - out.group_size + j] * res[n - out.group_size + j];
    }
    const double scale = static_cast<double>(dof);
    if (out.eer_low == 0.0) {
        out.statistic = out.eer_high == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    } else {
        out.statistic = (out.eer_high / scale) / (out.eer_low / scale);
    }
    out.critical_value = f_quantile(1.0 - opts.alpha, scale, scale);
    out.heteroscedastic = out.statistic > out.critical_value;
    return out;
}

}  // namespace jmrel
