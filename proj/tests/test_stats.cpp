#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "ensp/errors.hpp"
#include "ensp/stats.hpp"

using namespace ensp;

TEST_CASE("compensated summation survives cancellation") {
    NeumaierSum sum;
    sum.add(1e16);
    for (int i = 0; i < 1000; ++i) sum.add(1.0);
    sum.add(-1e16);
    CHECK(sum.value() == doctest::Approx(1000.0).epsilon(1e-15));
}

TEST_CASE("mean and stderr on a tiny sample") {
    MeanStderr ms = mean_stderr({1.0, 2.0, 3.0, 4.0});
    CHECK(ms.count == 4);
    CHECK(ms.mean == doctest::Approx(2.5));
    CHECK(ms.sample_variance == doctest::Approx(5.0 / 3.0));
    CHECK(ms.stderr_value == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
}

TEST_CASE("type-7 quantiles match the reference implementation") {
    std::vector<double> xs = {3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0};
    CHECK(quantile(xs, 0.25) == doctest::Approx(1.75).epsilon(1e-12));
    CHECK(quantile(xs, 0.9) == doctest::Approx(6.9).epsilon(1e-12));
    CHECK(quantile(xs, 0.0) == doctest::Approx(1.0));
    CHECK(quantile(xs, 1.0) == doctest::Approx(9.0));
}

TEST_CASE("binomial coefficients, exact and logarithmic") {
    CHECK(choose_exact(52, 5) == 2598960ull);
    CHECK(choose_exact(6, 0) == 1ull);
    CHECK(choose_exact(6, 6) == 1ull);
    CHECK_THROWS_AS(choose_exact(64, 2), config_error);
    CHECK(log_choose(10, 3) == doctest::Approx(std::log(120.0)).epsilon(1e-13));
    CHECK(log_choose(1000, 500) ==
          doctest::Approx(std::lgamma(1001.0) - 2.0 * std::lgamma(501.0)).epsilon(1e-13));
    CHECK(std::isinf(log_choose(5, 7)));
}

TEST_CASE("chi-square tail probabilities match reference values") {
    CHECK(chi_square_sf(3.84, 1) == doctest::Approx(0.05004352124870519).epsilon(1e-10));
    CHECK(chi_square_sf(25.0, 4) ==
          doctest::Approx(5.0309817823062075e-05).epsilon(1e-10));
    CHECK(chi_square_sf(150.0, 100) ==
          doctest::Approx(0.0009039320423540184).epsilon(1e-9));
    CHECK(chi_square_sf(0.0, 5) == doctest::Approx(1.0));
}

TEST_CASE("chi-square quantiles match reference values") {
    CHECK(chi_square_quantile(0.95, 3) ==
          doctest::Approx(7.814727903251179).epsilon(1e-9));
    CHECK(chi_square_quantile(0.99, 1) ==
          doctest::Approx(6.6348966010212145).epsilon(1e-9));
    CHECK(chi_square_quantile(0.025, 10) ==
          doctest::Approx(3.2469727802368413).epsilon(1e-9));
    CHECK(chi_square_quantile(0.975, 10) ==
          doctest::Approx(20.483177350807388).epsilon(1e-9));
    CHECK(chi_square_quantile(0.5, 199) ==
          doctest::Approx(198.33373183841684).epsilon(1e-9));
}

TEST_CASE("inverse normal cdf matches reference values") {
    CHECK(inverse_normal_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(inverse_normal_cdf(0.975) ==
          doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(inverse_normal_cdf(0.999) ==
          doctest::Approx(3.090232306167813).epsilon(1e-12));
    CHECK(inverse_normal_cdf(0.1) ==
          doctest::Approx(-1.2815515655446004).epsilon(1e-12));
}

TEST_CASE("uniformity test accepts balanced counts and rejects skewed ones") {
    ChiSquareTest balanced = chi_square_uniformity({250, 250, 250, 250});
    CHECK(balanced.statistic == doctest::Approx(0.0));
    CHECK(balanced.df == 3);
    CHECK(balanced.p_value == doctest::Approx(1.0));

    ChiSquareTest skewed = chi_square_uniformity({400, 100, 250, 250});
    CHECK(skewed.p_value < 1e-6);
}

TEST_CASE("variance interval brackets the estimate consistently") {
    Interval ci = variance_interval(1.0, 200, 0.05);
    CHECK(ci.lo < 1.0);
    CHECK(ci.hi > 1.0);
    // Frozen endpoints: (n-1) s^2 / qchisq(1 - alpha/2) and / qchisq(alpha/2).
    CHECK(ci.lo == doctest::Approx(199.0 / 239.9596818276442).epsilon(1e-6));
    CHECK(ci.hi == doctest::Approx(199.0 / 161.82618239364686).epsilon(1e-6));
}

TEST_CASE("zero-hit bound inverts the no-hit probability") {
    double bound = zero_hit_upper_bound(1000, 0.05);
    CHECK(std::pow(1.0 - bound, 1000.0) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(zero_hit_upper_bound(10000, 0.05) < bound);
}

TEST_CASE("least-squares line fit") {
    LineFit fit = fit_line({0.0, 1.0, 2.0, 3.0}, {1.0, 2.9, 5.1, 6.9});
    CHECK(fit.ok);
    CHECK(fit.slope == doctest::Approx(1.99).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(0.99).epsilon(1e-12));
    CHECK(fit.r2 == doctest::Approx(0.9986382549489345).epsilon(1e-10));

    CHECK_FALSE(fit_line({1.0}, {2.0}).ok);
    CHECK_FALSE(fit_line({1.0, 1.0}, {2.0, 3.0}).ok);
}
