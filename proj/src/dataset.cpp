#include "gpfc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>

namespace gpfc {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    s = s.substr(first, last - first + 1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return std::string(s);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        fields.push_back(trim(std::string_view(line).substr(pos, comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return fields;
}

template <typename T>
std::optional<T> parse_number(const std::string& field) {
    T value{};
    const char* begin = field.data();
    const char* end = begin + field.size();
    if (begin != end && *begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) return std::nullopt;
    }
    return value;
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

Dataset parse_long(std::istream& in, const CsvOptions& opts, int test_length) {
    // Name order of first appearance; steps sorted within each series.
    std::vector<std::string> order;
    std::map<std::string, std::map<long long, std::pair<double, std::size_t>>> rows;
    std::string line;
    std::size_t line_no = 0;
    bool skipped_header = !opts.header;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        if (!skipped_header) {
            skipped_header = true;
            continue;
        }
        const auto f = split_fields(line);
        if (f.size() != 3) throw CsvError(line_no, "expected 3 fields (series_id,step_index,value)");
        if (f[0].empty()) throw CsvError(line_no, "empty series id");
        const auto step = parse_number<long long>(f[1]);
        if (!step) throw CsvError(line_no, "step index is not an integer: '" + f[1] + "'");
        const auto value = parse_number<double>(f[2]);
        if (!value) throw CsvError(line_no, "value is not a finite number: '" + f[2] + "'");
        auto [it, inserted] = rows.try_emplace(f[0]);
        if (inserted) order.push_back(f[0]);
        if (!it->second.emplace(*step, std::pair{*value, line_no}).second) {
            throw CsvError(line_no, "duplicate step " + f[1] + " for series " + f[0]);
        }
    }
    Dataset ds;
    for (const auto& name : order) {
        const auto& steps = rows.at(name);
        SeriesEntry entry{name, {{}, opts.frequency, std::nullopt}, test_length};
        long long expected = steps.begin()->first;
        for (const auto& [step, v] : steps) {
            if (step != expected) {
                throw CsvError(v.second, "series " + name + " skips from step " + std::to_string(expected - 1) +
                                             " to " + std::to_string(step));
            }
            entry.series.values.push_back(v.first);
            ++expected;
        }
        ds.series.push_back(std::move(entry));
    }
    return ds;
}

Dataset parse_wide(std::istream& in, const CsvOptions& opts, int test_length) {
    Dataset ds;
    std::vector<bool> ended;
    std::string line;
    std::size_t line_no = 0;
    bool have_columns = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        const auto f = split_fields(line);
        if (!have_columns) {
            have_columns = true;
            for (std::size_t c = 0; c < f.size(); ++c) {
                const std::string name = opts.header ? f[c] : "series" + std::to_string(c + 1);
                if (name.empty()) throw CsvError(line_no, "empty column name");
                ds.series.push_back({name, {{}, opts.frequency, std::nullopt}, test_length});
            }
            ended.assign(f.size(), false);
            if (opts.header) continue;
        }
        if (f.size() != ds.series.size()) {
            throw CsvError(line_no, "expected " + std::to_string(ds.series.size()) + " fields, found " +
                                        std::to_string(f.size()));
        }
        for (std::size_t c = 0; c < f.size(); ++c) {
            if (f[c].empty()) {
                ended[c] = true;
                continue;
            }
            if (ended[c]) throw CsvError(line_no, "gap in column " + ds.series[c].name);
            const auto value = parse_number<double>(f[c]);
            if (!value) throw CsvError(line_no, "value is not a finite number: '" + f[c] + "'");
            ds.series[c].series.values.push_back(*value);
        }
    }
    return ds;
}

}  // namespace

CsvError::CsvError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

void Dataset::validate() const {
    std::set<std::string> names;
    for (const auto& s : series) {
        if (!names.insert(s.name).second) throw std::invalid_argument("duplicate series name " + s.name);
        if (s.test_length < 1) throw std::invalid_argument("series " + s.name + " has test length < 1");
    }
}

Dataset parse_csv(std::istream& in, const CsvOptions& opts) {
    const int test_length = opts.test_length.value_or(default_horizon(opts.frequency, Seasonality::Single));
    if (test_length < 1) throw std::invalid_argument("test length must be >= 1");
    Dataset ds = opts.layout == CsvLayout::Long ? parse_long(in, opts, test_length) : parse_wide(in, opts, test_length);
    ds.validate();
    return ds;
}

Dataset load_csv(const std::string& path, const CsvOptions& opts) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse_csv(in, opts);
}

void write_csv(std::ostream& out, const Dataset& ds) {
    out << "series_id,step_index,value\n";
    char buf[64];
    for (const auto& s : ds.series) {
        for (std::size_t i = 0; i < s.series.values.size(); ++i) {
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, s.series.values[i]);
            out << s.name << ',' << i << ',' << std::string_view(buf, static_cast<std::size_t>(ptr - buf)) << '\n';
        }
    }
}

}  // namespace gpfc
