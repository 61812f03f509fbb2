#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gpfc/forecaster.hpp"

namespace gpfc {

/// Long: `series_id,step_index,value` rows in any order.
/// Wide: one column per series, one row per step; shorter series leave
/// trailing cells empty.
enum class CsvLayout { Long, Wide };

struct CsvOptions {
    CsvLayout layout = CsvLayout::Long;
    bool header = true;
    Frequency frequency = Frequency::monthly();
    /// Test length applied to every series; defaults to the frequency's
    /// standard horizon.
    std::optional<int> test_length;
};

struct SeriesEntry {
    std::string name;
    TimeSeries series;
    int test_length = 1;

    friend bool operator==(const SeriesEntry&, const SeriesEntry&) = default;
};

struct Dataset {
    std::vector<SeriesEntry> series;

    /// Throws std::invalid_argument on duplicate names or test lengths < 1.
    void validate() const;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Parse error that names the offending 1-based line.
class CsvError : public std::runtime_error {
public:
    CsvError(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

Dataset parse_csv(std::istream& in, const CsvOptions& opts);
Dataset load_csv(const std::string& path, const CsvOptions& opts);

/// Writes long layout with a header, full double precision.
void write_csv(std::ostream& out, const Dataset& ds);

}  // namespace gpfc
