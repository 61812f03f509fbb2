// gpfc: forecast a series, benchmark a dataset, or inspect the priors.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "gpfc/bench.hpp"
#include "gpfc/config.hpp"
#include "gpfc/dataset.hpp"
#include "gpfc/forecaster.hpp"
#include "gpfc/priors.hpp"
#include "gpfc/report.hpp"

namespace {

struct Common {
    std::string freq = "monthly";
    std::string mode = "single";
    std::string layout = "wide";
    bool no_header = false;
    std::string config_path;
    std::string priors_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

gpfc::Seasonality parse_mode(const std::string& m) {
    if (m == "single" || m == "single-seasonal") return gpfc::Seasonality::Single;
    if (m == "double" || m == "double-seasonal") return gpfc::Seasonality::Double;
    throw std::invalid_argument("unknown mode " + m);
}

gpfc::TrainConfig train_config(const Common& c) {
    gpfc::TrainConfig cfg;
    if (!c.config_path.empty()) cfg = gpfc::load_train_config(c.config_path, cfg);
    if (c.seed_set) cfg.seed = c.seed;
    return cfg;
}

gpfc::PriorSpec priors(const Common& c) {
    return c.priors_path.empty() ? gpfc::default_priors() : gpfc::load_priors(c.priors_path);
}

gpfc::CsvOptions csv_options(const Common& c) {
    gpfc::CsvOptions o;
    o.layout = c.layout == "long" ? gpfc::CsvLayout::Long : gpfc::CsvLayout::Wide;
    o.header = !c.no_header;
    o.frequency = gpfc::parse_frequency(c.freq);
    return o;
}

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--freq", c.freq, "monthly, quarterly, 6h, or steps per year")->capture_default_str();
    cmd->add_option("--mode", c.mode, "single or double (seasonality)")->capture_default_str();
    cmd->add_option("--layout", c.layout, "CSV layout: wide or long")
        ->check(CLI::IsMember({"wide", "long"}))
        ->capture_default_str();
    cmd->add_flag("--no-header", c.no_header, "CSV has no header row");
    cmd->add_option("--config", c.config_path, "training config file (key = value)");
    cmd->add_option("--priors", c.priors_path, "prior file (name = nu lambda)");
    cmd->add_option("--seed", c.seed, "seed for restarts > 1")->each([&c](const std::string&) { c.seed_set = true; });
}

int run_forecast(const Common& c, const std::string& input, int horizon, const std::string& series_name,
                 const std::string& output) {
    auto ds = gpfc::load_csv(input, csv_options(c));
    if (ds.series.empty()) throw std::invalid_argument("no series in " + input);
    const gpfc::SeriesEntry* entry = &ds.series.front();
    if (!series_name.empty()) {
        entry = nullptr;
        for (const auto& s : ds.series) {
            if (s.name == series_name) entry = &s;
        }
        if (!entry) throw std::invalid_argument("series " + series_name + " not found");
    }
    gpfc::ForecastOptions opts;
    opts.mode = parse_mode(c.mode);
    opts.priors = priors(c);
    opts.train = train_config(c);
    if (horizon <= 0) horizon = gpfc::default_horizon(entry->series.frequency, opts.mode);

    const auto result = gpfc::forecast(entry->series, horizon, opts);
    if (!result.training.converged) {
        std::cerr << "warning: training did not converge in " << result.training.iterations << " iterations\n";
    }

    std::ofstream file;
    if (!output.empty()) {
        file.open(output);
        if (!file) throw std::runtime_error("cannot write " + output);
    }
    std::ostream& out = output.empty() ? std::cout : file;
    out << "step,time,mean,variance,lower95,upper95\n";
    const auto& f = result.forecast;
    char line[256];
    for (std::size_t i = 0; i < f.horizon(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        const double sd = std::sqrt(f.variance(k));
        std::snprintf(line, sizeof line, "%zu,%.10g,%.10g,%.10g,%.10g,%.10g\n", f.step[i], f.time[i], f.mean(k),
                      f.variance(k), f.mean(k) - 1.959964 * sd, f.mean(k) + 1.959964 * sd);
        out << line;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian-process forecasting with a fixed kernel composition"};
    app.require_subcommand(1);
    Common common;

    auto* fc = app.add_subcommand("forecast", "forecast one series");
    std::string fc_input, fc_output, fc_series;
    int fc_horizon = 0;
    fc->add_option("input", fc_input, "CSV file")->required()->check(CLI::ExistingFile);
    fc->add_option("--horizon,-H", fc_horizon, "steps ahead (default: 18 monthly, 8 quarterly, 42 double)");
    fc->add_option("--series", fc_series, "series name (default: first in file)");
    fc->add_option("--output,-o", fc_output, "output CSV (default: stdout)");
    add_common(fc, common);

    auto* bn = app.add_subcommand("bench", "score a dataset on held-out tails");
    std::string bn_input, bn_format = "table", bn_output;
    int bn_test_length = 0, bn_parallel = 1, bn_season = 0;
    bool allow_failures = false, original_units = false, no_baseline = false, no_timing = false;
    bn->add_option("input", bn_input, "CSV file")->required()->check(CLI::ExistingFile);
    bn->add_option("--test-length", bn_test_length, "held-out steps per series (default: 18 monthly, 8 quarterly)");
    bn->add_option("--parallel", bn_parallel, "worker threads across series")->capture_default_str();
    bn->add_option("--format", bn_format, "table or jsonl")
        ->check(CLI::IsMember({"table", "jsonl"}))
        ->capture_default_str();
    bn->add_option("--output,-o", bn_output, "report file (default: stdout)");
    bn->add_option("--season", bn_season, "seasonal-naive cycle length (default: steps per year)");
    bn->add_flag("--allow-failures", allow_failures, "exit 0 even if some series failed");
    bn->add_flag("--original-units", original_units, "score in original units instead of standardized");
    bn->add_flag("--no-baseline", no_baseline, "skip the seasonal-naive baseline");
    bn->add_flag("--no-timing", no_timing, "omit timing fields from the report");
    add_common(bn, common);

    auto* pr = app.add_subcommand("priors", "print or export the active priors");
    std::string pr_export;
    pr->add_option("--priors", common.priors_path, "prior file to load instead of the defaults");
    pr->add_option("--export", pr_export, "write to this file instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*fc) return run_forecast(common, fc_input, fc_horizon, fc_series, fc_output);

        if (*bn) {
            auto csv = csv_options(common);
            if (bn_test_length > 0) csv.test_length = bn_test_length;
            const auto mode = parse_mode(common.mode);
            if (!csv.test_length) csv.test_length = gpfc::default_horizon(csv.frequency, mode);
            const auto ds = gpfc::load_csv(bn_input, csv);

            gpfc::BenchConfig cfg;
            cfg.mode = mode;
            cfg.train = train_config(common);
            cfg.priors = priors(common);
            cfg.parallelism = bn_parallel;
            cfg.standardized_scoring = !original_units;
            cfg.with_baseline = !no_baseline;
            if (bn_season > 0) cfg.season_length = bn_season;
            const auto report = gpfc::run_benchmark(ds, cfg);

            const auto text = gpfc::emit_report(
                report, bn_format == "jsonl" ? gpfc::ReportFormat::Jsonl : gpfc::ReportFormat::Table,
                {.include_timing = !no_timing});
            if (bn_output.empty()) {
                std::cout << text;
            } else {
                std::ofstream out(bn_output);
                if (!out) throw std::runtime_error("cannot write " + bn_output);
                out << text;
            }
            return report.failed.empty() || allow_failures ? 0 : 1;
        }

        if (*pr) {
            const auto spec = priors(common);
            if (pr_export.empty()) {
                gpfc::write_priors(std::cout, spec);
            } else {
                std::ofstream out(pr_export);
                if (!out) throw std::runtime_error("cannot write " + pr_export);
                gpfc::write_priors(out, spec);
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
