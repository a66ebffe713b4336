#pragma once

#include <cstdint>
#include <string>

#include "depscreen/benchmarks.hpp"
#include "depscreen/test_outcome.hpp"

namespace depscreen {

enum class ReportFormat { Csv, Json };

// "%.12g" rendering used for every floating value in emitted reports.
std::string format_sig12(double v);

// Screening report serialization:
//   JSON: { method, alpha, seed, per_input: [{index, statistic, p_value,
//          reject}], selected: [...] }
//   CSV:  header + one row per input with the same fields.
std::string render_screening_report(const ScreeningReport& report, std::uint64_t seed,
                                    ReportFormat format);
ScreeningReport parse_screening_report_json(const std::string& text);

std::string render_metrics_report(const MetricsReport& report, ReportFormat format);
std::string render_share_table(const std::vector<ShareRow>& rows, std::uint64_t seed,
                               ReportFormat format);
std::string render_interaction_table(const std::vector<InteractionRow>& rows,
                                     std::uint64_t seed, ReportFormat format);

// Writes to the path, or to stdout when path is "-".
void write_text(const std::string& path, const std::string& text);

}  // namespace depscreen
