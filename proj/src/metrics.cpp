#include "gpfc/metrics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gpfc {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
    if (a == 0) throw std::invalid_argument("scores need at least one test point");
    if (a != b) throw std::invalid_argument("score inputs have different lengths");
}

double log_density(double actual, double mean, double variance) {
    if (!(variance > 0.0)) throw std::invalid_argument("predictive variance must be positive");
    const double r = actual - mean;
    return -0.5 * std::log(2.0 * std::numbers::pi * variance) - r * r / (2.0 * variance);
}

}  // namespace

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double mae(std::span<const double> actual, std::span<const double> mean) {
    check_lengths(actual.size(), mean.size());
    double sum = 0.0;
    for (std::size_t t = 0; t < actual.size(); ++t) sum += std::abs(actual[t] - mean[t]);
    return sum / static_cast<double>(actual.size());
}

double crps_gaussian(double actual, double mean, double sd) {
    if (!(sd > 0.0)) throw std::invalid_argument("CRPS needs a positive standard deviation");
    const double z = (actual - mean) / sd;
    return sd * (z * (2.0 * normal_cdf(z) - 1.0) + 2.0 * normal_pdf(z) - std::numbers::inv_sqrtpi);
}

double test_log_likelihood(std::span<const double> actual, std::span<const double> mean,
                           std::span<const double> variance) {
    check_lengths(actual.size(), mean.size());
    check_lengths(actual.size(), variance.size());
    double sum = 0.0;
    for (std::size_t t = 0; t < actual.size(); ++t) sum += log_density(actual[t], mean[t], variance[t]);
    return sum / static_cast<double>(actual.size());
}

ScoreReport score(std::span<const double> actual, std::span<const double> mean, std::span<const double> variance) {
    check_lengths(actual.size(), mean.size());
    check_lengths(actual.size(), variance.size());
    ScoreReport r;
    const std::size_t n = actual.size();
    for (std::size_t t = 0; t < n; ++t) {
        r.abs_error.push_back(std::abs(actual[t] - mean[t]));
        r.crps_steps.push_back(crps_gaussian(actual[t], mean[t], std::sqrt(variance[t])));
        r.ll_steps.push_back(log_density(actual[t], mean[t], variance[t]));
    }
    r.mae = mae(actual, mean);
    double c = 0.0;
    for (double v : r.crps_steps) c += v;
    r.crps = c / static_cast<double>(n);
    r.ll = test_log_likelihood(actual, mean, variance);
    return r;
}

}  // namespace gpfc
