#include "ensp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ensp/errors.hpp"

namespace ensp {

MeanStderr mean_stderr(const std::vector<double>& xs) {
    MeanStderr out;
    out.count = static_cast<std::int64_t>(xs.size());
    if (xs.empty()) return out;
    NeumaierSum s;
    for (double x : xs) s.add(x);
    out.mean = s.value() / static_cast<double>(xs.size());
    if (xs.size() < 2) return out;
    NeumaierSum ss;
    for (double x : xs) {
        const double d = x - out.mean;
        ss.add(d * d);
    }
    out.sample_variance = ss.value() / static_cast<double>(xs.size() - 1);
    out.stderr_value = std::sqrt(out.sample_variance / static_cast<double>(xs.size()));
    return out;
}

double quantile(std::vector<double> xs, double q) {
    if (xs.empty()) throw config_error("quantile of empty sample");
    if (q < 0.0 || q > 1.0) throw config_error("quantile level outside [0,1]");
    std::sort(xs.begin(), xs.end());
    const double h = q * static_cast<double>(xs.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= xs.size()) return xs.back();
    const double frac = h - static_cast<double>(lo);
    return xs[lo] + frac * (xs[lo + 1] - xs[lo]);
}

double log_choose(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

std::uint64_t choose_exact(int n, int k) {
    if (n < 0 || n > 63) throw config_error("choose_exact supports n in [0,63]");
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    // Pascal row, built in place right to left.
    std::vector<std::uint64_t> row(static_cast<std::size_t>(k) + 1, 0);
    row[0] = 1;
    for (int i = 1; i <= n; ++i)
        for (int j = std::min(i, k); j >= 1; --j) row[j] += row[j - 1];
    return row[k];
}

// Series and continued-fraction evaluation of P(a,x); both converge to
// machine precision in the regions where they are used.
static double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < 1000; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

static double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double regularized_gamma_p(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw config_error("regularized_gamma_p domain");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_contfrac(a, x);
}

double chi_square_sf(double x, int df) {
    if (df <= 0) throw config_error("chi-square df must be positive");
    if (x <= 0.0) return 1.0;
    const double a = 0.5 * df;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, 0.5 * x);
    return gamma_q_contfrac(a, 0.5 * x);
}

double inverse_normal_cdf(double p) {
    if (p <= 0.0 || p >= 1.0) throw config_error("inverse_normal_cdf domain");
    // Acklam's rational approximation, refined by one Halley step.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = 0.5 * std::erfc(-x / 1.4142135623730951) - p;
    const double u = e * 2.5066282746310002 * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

double chi_square_quantile(double p, int df) {
    if (df <= 0) throw config_error("chi-square df must be positive");
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) throw config_error("chi-square quantile level must be < 1");
    // Wilson-Hilferty start, then Newton on the CDF.
    const double z = inverse_normal_cdf(p);
    const double k = static_cast<double>(df);
    const double t = 1.0 - 2.0 / (9.0 * k) + z * std::sqrt(2.0 / (9.0 * k));
    double x = k * t * t * t;
    if (x <= 0.0) x = 1e-8;
    for (int it = 0; it < 40; ++it) {
        const double f = regularized_gamma_p(0.5 * k, 0.5 * x) - p;
        const double pdf = std::exp((0.5 * k - 1.0) * std::log(0.5 * x) - 0.5 * x -
                                    std::lgamma(0.5 * k)) * 0.5;
        if (pdf <= 0.0) break;
        const double step = f / pdf;
        x -= step;
        if (x <= 0.0) x = 1e-8;
        if (std::abs(step) < 1e-12 * std::max(1.0, x)) break;
    }
    return x;
}

ChiSquareTest chi_square_uniformity(const std::vector<std::int64_t>& counts) {
    if (counts.size() < 2) throw config_error("chi-square needs at least 2 cells");
    std::int64_t total = 0;
    for (auto c : counts) total += c;
    if (total == 0) throw config_error("chi-square: empty sample");
    const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
    NeumaierSum s;
    for (auto c : counts) {
        const double d = static_cast<double>(c) - expected;
        s.add(d * d / expected);
    }
    ChiSquareTest out;
    out.statistic = s.value();
    out.df = static_cast<int>(counts.size()) - 1;
    out.p_value = chi_square_sf(out.statistic, out.df);
    return out;
}

Interval variance_interval(double sample_variance, std::int64_t count, double alpha) {
    if (count < 2) throw config_error("variance interval needs count >= 2");
    const int df = static_cast<int>(count - 1);
    const double scaled = df * sample_variance;
    Interval iv;
    iv.lo = scaled / chi_square_quantile(1.0 - 0.5 * alpha, df);
    iv.hi = scaled / chi_square_quantile(0.5 * alpha, df);
    return iv;
}

double zero_hit_upper_bound(std::int64_t trials, double alpha) {
    if (trials < 1) throw config_error("zero_hit_upper_bound needs trials >= 1");
    if (alpha <= 0.0 || alpha >= 1.0) throw config_error("alpha must be in (0,1)");
    return 1.0 - std::pow(alpha, 1.0 / static_cast<double>(trials));
}

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    LineFit fit;
    if (xs.size() != ys.size() || xs.size() < 2) return fit;
    const std::size_t n = xs.size();
    NeumaierSum sx, sy;
    for (std::size_t i = 0; i < n; ++i) {
        sx.add(xs[i]);
        sy.add(ys[i]);
    }
    const double mx = sx.value() / n, my = sy.value() / n;
    NeumaierSum sxx, sxy, syy;
    for (std::size_t i = 0; i < n; ++i) {
        sxx.add((xs[i] - mx) * (xs[i] - mx));
        sxy.add((xs[i] - mx) * (ys[i] - my));
        syy.add((ys[i] - my) * (ys[i] - my));
    }
    if (sxx.value() <= 0.0) return fit;
    fit.slope = sxy.value() / sxx.value();
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy.value() > 0.0
                 ? (sxy.value() * sxy.value()) / (sxx.value() * syy.value())
                 : 1.0;
    fit.ok = true;
    return fit;
}

}  // namespace ensp
