#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace pdkde {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline double normal_pdf(double x, double mean, double sigma) {
    const double z = (x - mean) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * kPi));
}

// Standard normal CDF via erfc; accurate in both tails.
inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

// Adaptive Simpson quadrature on [a, b] to absolute tolerance tol.
// value_noise is the absolute uncertainty of integrand evaluations (e.g.
// the tolerance of a nested quadrature); subdivision stops once the local
// discrepancy reaches that floor. Throws std::runtime_error when the
// recursion depth is exhausted before the tolerance is met.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol, int max_depth = 48, double value_noise = 0.0);

// pmf of the number of successes among independent Bernoulli(q[j]) trials
std::vector<double> poisson_binomial_pmf(const std::vector<double>& q);

// Upper critical value of the chi-square distribution at significance
// alpha = 0.01, for small degrees of freedom (tabulated).
double chi_square_critical_1pct(int dof);

struct MeanAccumulator {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t n = 0;

    void add(double x) {
        sum += x;
        sum_sq += x * x;
        ++n;
    }
    void merge(const MeanAccumulator& o) {
        sum += o.sum;
        sum_sq += o.sum_sq;
        n += o.n;
    }
    double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
    double variance() const {
        if (n < 2) return 0.0;
        const double m = mean();
        double v = (sum_sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1);
        return v > 0.0 ? v : 0.0;
    }
    double std_error() const { return n ? std::sqrt(variance() / static_cast<double>(n)) : 0.0; }
};

}  // namespace pdkde
