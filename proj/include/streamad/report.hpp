#pragma once

#include <iosfwd>

#include "streamad/runner.hpp"

namespace streamad {

/// Header: model,sorted,enriched,time_mean_s,time_std_s,auc_evil_mean,
/// auc_evil_std,auc_sus_mean,auc_sus_std
void write_report_csv(std::ostream& out, const Report& report);

/// Reads rows written by write_report_csv (failures are not stored).
Report read_report_csv(std::istream& in);

/// Aligned Markdown table, followed by a list of failed runs if any.
void write_report_markdown(std::ostream& out, const Report& report);

}  // namespace streamad
