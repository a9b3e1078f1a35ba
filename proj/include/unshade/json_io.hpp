#pragma once

#include <string>

#include <json.hpp>

#include "unshade/elliptic.hpp"
#include "unshade/metrics.hpp"
#include "unshade/restore.hpp"

namespace unshade {

// Key order is fixed so identical runs serialize to identical bytes.
using OrderedJson = nlohmann::ordered_json;

OrderedJson solve_report_json(const SolveReport& report);
OrderedJson metric_report_json(const MetricReport& report);
OrderedJson restore_step_json(const RestoreStep& step);

/// One JSON object per line, one line per global step; an aborted run ends
/// with an {"aborted_step": ..., "reason": ...} line.
std::string trace_jsonl(const RestoreTrace& trace);

/// Flat per-step table for plotting.
std::string trace_csv(const RestoreTrace& trace);

}  // namespace unshade
