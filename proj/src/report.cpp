#include "gpfc/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace gpfc {

namespace {

using nlohmann::json;

std::string fixed(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

json aggregate_record(const char* model, const Aggregate& a, std::size_t failed) {
    json j = {{"type", "aggregate"}, {"model", model}, {"scored", a.scored}, {"failed", failed}};
    if (a.scored == 0) {
        j["no_series_scored"] = true;
    } else {
        j["median_mae"] = a.median_mae;
        j["median_crps"] = a.median_crps;
        j["median_ll"] = a.median_ll;
    }
    return j;
}

void table_aggregate(std::ostream& os, const char* model, const Aggregate& a) {
    os << "  " << model << ": ";
    if (a.scored == 0) {
        os << "no series scored\n";
        return;
    }
    os << "median mae " << fixed(a.median_mae) << "  median crps " << fixed(a.median_crps) << "  median ll "
       << fixed(a.median_ll) << "  (" << a.scored << " series)\n";
}

std::string emit_table(const BenchReport& r, const EmitOptions& opts) {
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof line, "%-20s %10s %10s %10s", "series", "mae", "crps", "ll");
    os << line;
    if (opts.include_timing) os << "  train_seconds";
    os << "  converged\n";
    for (const auto& s : r.scored) {
        std::snprintf(line, sizeof line, "%-20s %10.4f %10.4f %10.4f", s.name.c_str(), s.gp.mae, s.gp.crps, s.gp.ll);
        os << line;
        if (opts.include_timing) {
            std::snprintf(line, sizeof line, "  %13.3f", s.train_seconds);
            os << line;
        }
        os << "  " << (s.converged ? "yes" : "no") << '\n';
    }
    if (!r.failed.empty()) {
        os << "\nfailed (" << r.failed.size() << "):\n";
        for (const auto& f : r.failed) os << "  " << f.name << ": " << f.reason << '\n';
    }
    os << "\naggregate (" << r.scored.size() << " scored, " << r.failed.size() << " failed)\n";
    table_aggregate(os, "gp", r.gp);
    if (r.baseline) table_aggregate(os, "seasonal_naive", *r.baseline);
    if (opts.include_timing) {
        os << "  total seconds " << fixed(r.total_seconds, 3) << "  median train seconds "
           << fixed(r.median_train_seconds, 3) << '\n';
    }
    return os.str();
}

std::string emit_jsonl(const BenchReport& r, const EmitOptions& opts) {
    std::ostringstream os;
    for (const auto& s : r.scored) {
        json j = {{"type", "series"}, {"series", s.name}, {"mae", s.gp.mae}, {"crps", s.gp.crps}, {"ll", s.gp.ll}};
        if (opts.include_timing) j["train_seconds"] = s.train_seconds;
        j["converged"] = s.converged;
        j["iterations"] = s.iterations;
        if (s.baseline) {
            j["baseline"] = {{"mae", s.baseline->mae}, {"crps", s.baseline->crps}, {"ll", s.baseline->ll}};
        }
        os << j.dump() << '\n';
    }
    for (const auto& f : r.failed) {
        os << json{{"type", "failure"}, {"series", f.name}, {"reason", f.reason}}.dump() << '\n';
    }
    os << aggregate_record("gp", r.gp, r.failed.size()).dump() << '\n';
    if (r.baseline) os << aggregate_record("seasonal_naive", *r.baseline, r.failed.size()).dump() << '\n';
    if (opts.include_timing) {
        os << json{{"type", "timing"},
                   {"total_seconds", r.total_seconds},
                   {"median_train_seconds", r.median_train_seconds}}
                  .dump()
           << '\n';
    }
    return os.str();
}

Aggregate read_aggregate(const json& j) {
    Aggregate a;
    a.scored = j.at("scored").get<std::size_t>();
    if (a.scored > 0) {
        a.median_mae = j.at("median_mae").get<double>();
        a.median_crps = j.at("median_crps").get<double>();
        a.median_ll = j.at("median_ll").get<double>();
    }
    return a;
}

}  // namespace

std::string emit_report(const BenchReport& report, ReportFormat format, const EmitOptions& opts) {
    return format == ReportFormat::Table ? emit_table(report, opts) : emit_jsonl(report, opts);
}

BenchReport parse_report_jsonl(const std::string& text) {
    BenchReport r;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            const json j = json::parse(line);
            const auto type = j.at("type").get<std::string>();
            if (type == "series") {
                SeriesOutcome s;
                s.name = j.at("series").get<std::string>();
                s.gp.mae = j.at("mae").get<double>();
                s.gp.crps = j.at("crps").get<double>();
                s.gp.ll = j.at("ll").get<double>();
                s.train_seconds = j.value("train_seconds", 0.0);
                s.converged = j.at("converged").get<bool>();
                s.iterations = j.value("iterations", 0);
                if (j.contains("baseline")) {
                    const auto& b = j.at("baseline");
                    ScoreReport base;
                    base.mae = b.at("mae").get<double>();
                    base.crps = b.at("crps").get<double>();
                    base.ll = b.at("ll").get<double>();
                    s.baseline = base;
                }
                r.scored.push_back(std::move(s));
            } else if (type == "failure") {
                r.failed.push_back({j.at("series").get<std::string>(), j.at("reason").get<std::string>()});
            } else if (type == "aggregate") {
                const auto model = j.at("model").get<std::string>();
                if (model == "gp") {
                    r.gp = read_aggregate(j);
                } else {
                    r.baseline = read_aggregate(j);
                }
            } else if (type == "timing") {
                r.total_seconds = j.at("total_seconds").get<double>();
                r.median_train_seconds = j.at("median_train_seconds").get<double>();
            } else {
                throw std::invalid_argument("unknown record type " + type);
            }
        } catch (const std::exception& e) {
            throw std::invalid_argument("report line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return r;
}

}  // namespace gpfc
