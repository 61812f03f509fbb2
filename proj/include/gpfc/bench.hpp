#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gpfc/dataset.hpp"
#include "gpfc/forecaster.hpp"
#include "gpfc/metrics.hpp"

namespace gpfc {

struct BenchConfig {
    Seasonality mode = Seasonality::Single;
    TrainConfig train;
    PriorSpec priors = default_priors();
    /// Worker threads across series; each fit stays single-threaded.
    int parallelism = 1;
    /// Score in the training standardization (default) or original units.
    bool standardized_scoring = true;
    bool with_baseline = true;
    /// Seasonal-naive cycle length; defaults to round(steps_per_year).
    std::optional<int> season_length;
};

struct SeriesOutcome {
    std::string name;
    ScoreReport gp;
    std::optional<ScoreReport> baseline;
    HyperParams theta;
    int iterations = 0;
    bool converged = false;
    double train_seconds = 0.0;
};

struct SeriesFailure {
    std::string name;
    std::string reason;
};

struct Aggregate {
    std::size_t scored = 0;
    double median_mae = 0.0;
    double median_crps = 0.0;
    double median_ll = 0.0;
};

struct BenchReport {
    std::vector<SeriesOutcome> scored;
    std::vector<SeriesFailure> failed;
    Aggregate gp;
    std::optional<Aggregate> baseline;
    double total_seconds = 0.0;
    double median_train_seconds = 0.0;
};

/// Median of a non-empty range (mean of the two middle values for even sizes).
double median(std::vector<double> values);

/// Repeats the last observed season. Variance is the in-sample mean squared
/// seasonal difference, scaled by the number of seasons ahead; a series of
/// exactly one season uses its own variance instead. Throws
/// std::invalid_argument when the series is shorter than one season.
Forecast seasonal_naive(const TimeSeries& train, int horizon, int season_length);

BenchReport run_benchmark(const Dataset& ds, const BenchConfig& cfg);

/// True when scores, hyperparameters and failure lists agree bit for bit;
/// timings are ignored.
bool same_results(const BenchReport& a, const BenchReport& b);

}  // namespace gpfc
