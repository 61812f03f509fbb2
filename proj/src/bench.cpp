#include "gpfc/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <variant>

#include <omp.h>

namespace gpfc {

namespace {

using SeriesResult = std::variant<SeriesOutcome, SeriesFailure>;

// Smallest variance a degenerate seasonal-naive forecast is given, relative to
// the training variance.
constexpr double kBaselineVarianceFloor = 1e-12;

ScoreReport score_forecast(const Forecast& f, std::span<const double> test, const Standardizer& st,
                           bool standardized) {
    std::vector<double> actual(test.begin(), test.end());
    std::vector<double> mean, var;
    if (standardized) {
        for (double& v : actual) v = st.apply(v);
        mean.assign(f.std_mean.begin(), f.std_mean.end());
        var.assign(f.std_variance.begin(), f.std_variance.end());
    } else {
        mean.assign(f.mean.begin(), f.mean.end());
        var.assign(f.variance.begin(), f.variance.end());
    }
    return score(actual, mean, var);
}

SeriesResult run_one(const SeriesEntry& entry, const BenchConfig& cfg) {
    const auto& values = entry.series.values;
    const auto test_len = static_cast<std::size_t>(entry.test_length);
    if (values.size() <= test_len) return SeriesFailure{entry.name, "series is not longer than its test length"};
    const std::size_t n_train = values.size() - test_len;
    TimeSeries train_ts{std::vector<double>(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(n_train)),
                        entry.series.frequency, entry.series.start};
    const std::span<const double> test(values.data() + n_train, test_len);

    try {
        ForecastOptions opts;
        opts.mode = cfg.mode;
        opts.priors = cfg.priors;
        opts.train = cfg.train;
        const ForecastResult r = forecast(train_ts, entry.test_length, opts);

        SeriesOutcome out;
        out.name = entry.name;
        out.gp = score_forecast(r.forecast, test, r.standardizer, cfg.standardized_scoring);
        out.theta = r.training.theta;
        out.iterations = r.training.iterations;
        out.converged = r.training.converged;
        out.train_seconds = r.training.seconds;
        if (cfg.with_baseline) {
            const int season =
                cfg.season_length.value_or(static_cast<int>(std::lround(entry.series.frequency.steps_per_year)));
            const Forecast naive = seasonal_naive(train_ts, entry.test_length, season);
            out.baseline = score_forecast(naive, test, r.standardizer, cfg.standardized_scoring);
        }
        return out;
    } catch (const std::exception& e) {
        return SeriesFailure{entry.name, e.what()};
    }
}

Aggregate aggregate(const std::vector<const ScoreReport*>& reports) {
    Aggregate a;
    a.scored = reports.size();
    if (reports.empty()) return a;
    std::vector<double> m, c, l;
    for (const auto* r : reports) {
        m.push_back(r->mae);
        c.push_back(r->crps);
        l.push_back(r->ll);
    }
    a.median_mae = median(m);
    a.median_crps = median(c);
    a.median_ll = median(l);
    return a;
}

bool same_scores(const ScoreReport& a, const ScoreReport& b) {
    return a.mae == b.mae && a.crps == b.crps && a.ll == b.ll && a.abs_error == b.abs_error &&
           a.crps_steps == b.crps_steps && a.ll_steps == b.ll_steps;
}

}  // namespace

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of an empty set");
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) return upper;
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

Forecast seasonal_naive(const TimeSeries& train, int horizon, int season_length) {
    if (horizon < 1) throw std::invalid_argument("forecast horizon must be >= 1");
    if (season_length < 1) throw std::invalid_argument("season length must be >= 1");
    const auto& y = train.values;
    const auto m = static_cast<std::size_t>(season_length);
    if (y.size() < m) throw std::invalid_argument("series is shorter than one season");

    const Standardizer st = Standardizer::fit(y);
    double sigma2 = 0.0;
    if (y.size() > m) {
        for (std::size_t t = m; t < y.size(); ++t) sigma2 += (y[t] - y[t - m]) * (y[t] - y[t - m]);
        sigma2 /= static_cast<double>(y.size() - m);
    } else {
        sigma2 = st.sd() * st.sd();
    }
    sigma2 = std::max(sigma2, kBaselineVarianceFloor * st.sd() * st.sd());

    Forecast f;
    const auto h = static_cast<std::size_t>(horizon);
    const auto n = y.size();
    const auto times = make_time_index(train.frequency, n, h);
    f.mean.resize(static_cast<Eigen::Index>(h));
    f.variance.resize(static_cast<Eigen::Index>(h));
    f.std_mean.resize(static_cast<Eigen::Index>(h));
    f.std_variance.resize(static_cast<Eigen::Index>(h));
    for (std::size_t i = 0; i < h; ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        f.step.push_back(n + i);
        f.time.push_back(times[i] + train.start.value_or(0.0));
        f.mean(k) = y[n - m + i % m];
        f.variance(k) = sigma2 * static_cast<double>(i / m + 1);
        f.std_mean(k) = st.apply(f.mean(k));
        f.std_variance(k) = st.apply_variance(f.variance(k));
    }
    return f;
}

BenchReport run_benchmark(const Dataset& ds, const BenchConfig& cfg) {
    ds.validate();
    cfg.train.validate();
    if (cfg.parallelism < 1) throw std::invalid_argument("parallelism must be >= 1");
    const auto start = std::chrono::steady_clock::now();

    const auto count = static_cast<std::ptrdiff_t>(ds.series.size());
    std::vector<SeriesResult> results(ds.series.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(cfg.parallelism)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        results[static_cast<std::size_t>(i)] = run_one(ds.series[static_cast<std::size_t>(i)], cfg);
    }

    BenchReport report;
    for (auto& r : results) {
        if (auto* ok = std::get_if<SeriesOutcome>(&r)) {
            report.scored.push_back(std::move(*ok));
        } else {
            report.failed.push_back(std::get<SeriesFailure>(std::move(r)));
        }
    }
    std::vector<const ScoreReport*> gp, base;
    std::vector<double> seconds;
    for (const auto& s : report.scored) {
        gp.push_back(&s.gp);
        if (s.baseline) base.push_back(&*s.baseline);
        seconds.push_back(s.train_seconds);
    }
    report.gp = aggregate(gp);
    if (cfg.with_baseline) report.baseline = aggregate(base);
    if (!seconds.empty()) report.median_train_seconds = median(seconds);
    report.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

bool same_results(const BenchReport& a, const BenchReport& b) {
    if (a.scored.size() != b.scored.size() || a.failed.size() != b.failed.size()) return false;
    for (std::size_t i = 0; i < a.scored.size(); ++i) {
        const auto& x = a.scored[i];
        const auto& y = b.scored[i];
        if (x.name != y.name || !same_scores(x.gp, y.gp) || !(x.theta == y.theta) || x.iterations != y.iterations ||
            x.converged != y.converged || x.baseline.has_value() != y.baseline.has_value()) {
            return false;
        }
        if (x.baseline && !same_scores(*x.baseline, *y.baseline)) return false;
    }
    for (std::size_t i = 0; i < a.failed.size(); ++i) {
        if (a.failed[i].name != b.failed[i].name || a.failed[i].reason != b.failed[i].reason) return false;
    }
    auto agg_eq = [](const Aggregate& p, const Aggregate& q) {
        return p.scored == q.scored && p.median_mae == q.median_mae && p.median_crps == q.median_crps &&
               p.median_ll == q.median_ll;
    };
    if (!agg_eq(a.gp, b.gp) || a.baseline.has_value() != b.baseline.has_value()) return false;
    return !a.baseline || agg_eq(*a.baseline, *b.baseline);
}

}  // namespace gpfc
