#pragma once

#include <string>

#include "gpfc/bench.hpp"

namespace gpfc {

enum class ReportFormat { Table, Jsonl };

struct EmitOptions {
    /// Timing columns vary from run to run; golden files turn them off.
    bool include_timing = true;
};

/// Column order: series, mae, crps, ll, train_seconds, converged; then any
/// failures, then the aggregate block with medians.
std::string emit_report(const BenchReport& report, ReportFormat format, const EmitOptions& opts = {});

/// Reads back the JSONL form. Per-step score vectors and hyperparameters are
/// not part of the format and come back empty/default.
BenchReport parse_report_jsonl(const std::string& text);

}  // namespace gpfc
