#pragma once

#include <string>

#include "qbc/experiments.hpp"

namespace qbc {

// Bit-stable serializations: fixed field order, reals at 12 significant
// digits, trailing newline.
std::string report_to_csv(const ExperimentReport& report);
std::string report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const std::string& text);

// Writes in the given format; empty path writes to stdout.
void write_report(const ExperimentReport& report, const std::string& path,
                  ReportFormat format);

}  // namespace qbc
