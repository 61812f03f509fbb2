#pragma once

#include <span>
#include <vector>

namespace gpfc {

/// Per-step and averaged scores of a Gaussian probabilistic forecast.
struct ScoreReport {
    double mae = 0.0;
    double crps = 0.0;
    double ll = 0.0;
    std::vector<double> abs_error;
    std::vector<double> crps_steps;
    std::vector<double> ll_steps;
};

double normal_pdf(double z);
double normal_cdf(double z);

/// Mean absolute error. Throws std::invalid_argument on empty or mismatched input.
double mae(std::span<const double> actual, std::span<const double> mean);

/// CRPS of N(mean, sd^2) at `actual`: sd * [z(2Phi(z) - 1) + 2phi(z) - 1/sqrt(pi)].
double crps_gaussian(double actual, double mean, double sd);

/// Average Gaussian log density of the test values, one variance per step.
double test_log_likelihood(std::span<const double> actual, std::span<const double> mean,
                           std::span<const double> variance);

ScoreReport score(std::span<const double> actual, std::span<const double> mean, std::span<const double> variance);

}  // namespace gpfc
