#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gpfc/priors.hpp"
#include "gpfc/trainer.hpp"

namespace gpfc {

enum class FrequencyKind { Monthly, Quarterly, Custom };

struct Frequency {
    FrequencyKind kind = FrequencyKind::Monthly;
    double steps_per_year = 12.0;

    static Frequency monthly() { return {FrequencyKind::Monthly, 12.0}; }
    static Frequency quarterly() { return {FrequencyKind::Quarterly, 4.0}; }
    /// Throws std::invalid_argument unless steps_per_year is positive and finite.
    static Frequency custom(double steps_per_year);

    std::string name() const;

    friend bool operator==(const Frequency&, const Frequency&) = default;
};

/// Six-hourly sampling: 4 steps a day over a 365.25-day year.
inline constexpr double kSixHourlyStepsPerYear = 4.0 * 365.25;
inline constexpr double kWeeksPerYear = 52.18;
inline constexpr double kDaysPerYear = 365.25;

/// "monthly", "quarterly", "6h", or a positive number of steps per year.
Frequency parse_frequency(const std::string& text);

struct TimeSeries {
    std::vector<double> values;
    Frequency frequency = Frequency::monthly();
    /// Time of the first observation in years (e.g. 1990.25); labels only.
    std::optional<double> start;

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;
};

/// Point i maps to i / steps_per_year, so one unit is one year.
std::vector<double> make_time_index(const Frequency& freq, std::size_t first, std::size_t count);
inline std::vector<double> make_time_index(const TimeSeries& ts) {
    return make_time_index(ts.frequency, 0, ts.values.size());
}

class Standardizer {
public:
    /// Mean and population standard deviation of `values`. Throws
    /// std::domain_error for constant or empty input.
    static Standardizer fit(std::span<const double> values);

    Standardizer(double mean, double sd);

    double mean() const { return mean_; }
    double sd() const { return sd_; }

    double apply(double v) const { return (v - mean_) / sd_; }
    double invert(double z) const { return z * sd_ + mean_; }
    double invert_variance(double var) const { return var * sd_ * sd_; }
    double apply_variance(double var) const { return var / (sd_ * sd_); }

private:
    double mean_;
    double sd_;
};

enum class Seasonality { Single, Double };

/// Single: PER(1 year) + LIN + RBF + SM1 + SM2 + WN.
/// Double: PER(1/52.18) + PER2(1/365.25) + LIN + RBF + SM1 + SM2 + WN.
KernelSpec default_spec(Seasonality mode);

/// 18 monthly, 8 quarterly, 42 for double-seasonal data; otherwise 1.
int default_horizon(const Frequency& freq, Seasonality mode);

struct Forecast {
    /// Step index of each forecast, continuing the series' own numbering.
    std::vector<std::size_t> step;
    /// Years from the start of the series, offset by TimeSeries::start if set.
    std::vector<double> time;
    Vector mean;
    Vector variance;
    /// Same forecast on the standardized scale of the training data.
    Vector std_mean;
    Vector std_variance;

    std::size_t horizon() const { return step.size(); }
};

struct ForecastOptions {
    Seasonality mode = Seasonality::Single;
    /// Overrides the composition chosen by `mode`.
    std::optional<KernelSpec> spec;
    PriorSpec priors = default_priors();
    TrainConfig train;
};

struct ForecastResult {
    Forecast forecast;
    TrainResult training;
    KernelSpec spec;
    Standardizer standardizer{0.0, 1.0};
};

inline constexpr std::size_t kMinTrainingLength = 8;

/// Raised when the model cannot be trained on the series at all.
class TrainingFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Standardizes on `ts`, trains, predicts the next `horizon` steps and maps the
/// result back to the original scale. Non-convergence is reported through
/// `ForecastResult::training.converged`, not thrown.
ForecastResult forecast(const TimeSeries& ts, int horizon, const ForecastOptions& opts = {});

}  // namespace gpfc
