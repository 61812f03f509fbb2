#include "gpfc/forecaster.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace gpfc {

Frequency Frequency::custom(double steps_per_year) {
    if (!(std::isfinite(steps_per_year) && steps_per_year > 0.0)) {
        throw std::invalid_argument("steps per year must be positive and finite");
    }
    return {FrequencyKind::Custom, steps_per_year};
}

std::string Frequency::name() const {
    switch (kind) {
        case FrequencyKind::Monthly: return "monthly";
        case FrequencyKind::Quarterly: return "quarterly";
        case FrequencyKind::Custom: break;
    }
    std::ostringstream os;
    os.precision(17);
    os << steps_per_year;
    return os.str();
}

Frequency parse_frequency(const std::string& text) {
    if (text == "monthly" || text == "12") return Frequency::monthly();
    if (text == "quarterly" || text == "4") return Frequency::quarterly();
    if (text == "6h" || text == "6-hourly") return Frequency::custom(kSixHourlyStepsPerYear);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("unknown frequency: " + text);
    }
    if (used != text.size()) throw std::invalid_argument("unknown frequency: " + text);
    return Frequency::custom(v);
}

std::vector<double> make_time_index(const Frequency& freq, std::size_t first, std::size_t count) {
    if (!(std::isfinite(freq.steps_per_year) && freq.steps_per_year > 0.0)) {
        throw std::invalid_argument("steps per year must be positive and finite");
    }
    std::vector<double> x(count);
    for (std::size_t i = 0; i < count; ++i) x[i] = static_cast<double>(first + i) / freq.steps_per_year;
    return x;
}

Standardizer::Standardizer(double mean, double sd) : mean_(mean), sd_(sd) {
    if (!(std::isfinite(sd) && sd > 0.0) || !std::isfinite(mean)) {
        throw std::domain_error("standardizer needs a finite mean and positive standard deviation");
    }
}

Standardizer Standardizer::fit(std::span<const double> values) {
    if (values.empty()) throw std::domain_error("cannot standardize an empty series");
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / n);
    if (!(sd > 0.0)) throw std::domain_error("constant series cannot be standardized");
    return {mean, sd};
}

KernelSpec default_spec(Seasonality mode) {
    std::vector<Term> terms;
    if (mode == Seasonality::Single) {
        terms.push_back({TermKind::Per, 1.0});
    } else {
        terms.push_back({TermKind::Per, 1.0 / kWeeksPerYear});
        terms.push_back({TermKind::Per2, 1.0 / kDaysPerYear});
    }
    terms.push_back({TermKind::Lin});
    terms.push_back({TermKind::Rbf});
    terms.push_back({TermKind::Sm1});
    terms.push_back({TermKind::Sm2});
    terms.push_back({TermKind::WhiteNoise});
    return KernelSpec(std::move(terms));
}

int default_horizon(const Frequency& freq, Seasonality mode) {
    if (mode == Seasonality::Double) return 42;
    switch (freq.kind) {
        case FrequencyKind::Monthly: return 18;
        case FrequencyKind::Quarterly: return 8;
        case FrequencyKind::Custom: break;
    }
    return 1;
}

ForecastResult forecast(const TimeSeries& ts, int horizon, const ForecastOptions& opts) {
    if (horizon < 1) throw std::invalid_argument("forecast horizon must be >= 1");
    if (ts.values.size() < kMinTrainingLength) {
        throw std::invalid_argument("series needs at least " + std::to_string(kMinTrainingLength) + " observations");
    }
    for (double v : ts.values) {
        if (!std::isfinite(v)) throw std::invalid_argument("series values must be finite");
    }

    ForecastResult out;
    out.spec = opts.spec ? *opts.spec : default_spec(opts.mode);
    out.spec.validate();
    out.standardizer = Standardizer::fit(ts.values);

    const std::size_t n = ts.values.size();
    const auto x = make_time_index(ts.frequency, 0, n);
    Vector y(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) y(static_cast<Eigen::Index>(i)) = out.standardizer.apply(ts.values[i]);

    const auto h = static_cast<std::size_t>(horizon);
    const auto x_star = make_time_index(ts.frequency, n, h);
    PredictiveDistribution pred;
    try {
        out.training = train(out.spec, opts.priors, x, y, opts.train);
        pred = predict(fit(out.spec, out.training.theta, x, y, opts.train.exec), x_star);
    } catch (const IllConditionedModel& e) {
        throw TrainingFailed(std::string("training failed: ") + e.what());
    }

    Forecast& f = out.forecast;
    f.std_mean = pred.mean;
    f.std_variance = pred.variance;
    f.mean.resize(pred.mean.size());
    f.variance.resize(pred.variance.size());
    for (std::size_t i = 0; i < h; ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        f.step.push_back(n + i);
        f.time.push_back(x_star[i] + ts.start.value_or(0.0));
        f.mean(k) = out.standardizer.invert(pred.mean(k));
        f.variance(k) = out.standardizer.invert_variance(pred.variance(k));
    }
    return out;
}

}  // namespace gpfc
