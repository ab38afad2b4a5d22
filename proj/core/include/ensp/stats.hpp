#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace ensp {

// Compensated (Neumaier) accumulator; keeps reductions deterministic to the
// last bit for a fixed summation order.
class NeumaierSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct MeanStderr {
    double mean = 0.0;
    double stderr_value = 0.0;    // sample std / sqrt(count)
    double sample_variance = 0.0;  // unbiased, divisor count-1
    std::int64_t count = 0;
};
MeanStderr mean_stderr(const std::vector<double>& xs);

// Linear-interpolation quantile (R type 7); q in [0,1].
double quantile(std::vector<double> xs, double q);

// log of the binomial coefficient via lgamma; exact for the uint64 version.
double log_choose(std::int64_t n, std::int64_t k);
std::uint64_t choose_exact(int n, int k);  // requires n <= 63

// Regularized incomplete gamma P(a,x) and the chi-square upper tail.
double regularized_gamma_p(double a, double x);
double chi_square_sf(double x, int df);
double chi_square_quantile(double p, int df);
double inverse_normal_cdf(double p);

struct ChiSquareTest {
    double statistic = 0.0;
    int df = 0;
    double p_value = 1.0;
};
// Goodness of fit of observed counts against a uniform law over the cells.
ChiSquareTest chi_square_uniformity(const std::vector<std::int64_t>& counts);

// Two-sided chi-square confidence interval for a variance estimate.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};
Interval variance_interval(double sample_variance, std::int64_t count, double alpha);

// One-sided upper confidence bound for an event probability after observing
// zero hits in `trials` independent trials: 1 - alpha^(1/trials).
double zero_hit_upper_bound(std::int64_t trials, double alpha);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    bool ok = false;
};
LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace ensp
