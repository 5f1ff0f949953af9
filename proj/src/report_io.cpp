#include "qbc/report_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

namespace qbc {

namespace {

// 12 significant digits, shortest form; stable across runs.
std::string real(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

std::string format_name(ReportFormat format) {
    return format == ReportFormat::Csv ? "csv" : "json";
}

}  // namespace

std::string report_to_csv(const ExperimentReport& report) {
    std::string out =
        "experiment,n,trials,seed,estimate,stderr,exact,aborts,wall_time\n";
    char line[512];
    std::snprintf(line, sizeof(line), "%s,%d,%ld,%" PRIu64 ",",
                  experiment_name(report.config.experiment).c_str(),
                  report.config.n, report.config.trials,
                  report.config.master_seed);
    out += line;
    out += real(report.estimate) + "," + real(report.standard_error) + ",";
    if (report.exact_value) out += real(*report.exact_value);
    out += "," + std::to_string(report.abort_count) + "," +
           real(report.wall_time) + "\n";
    return out;
}

std::string report_to_json(const ExperimentReport& report) {
    std::string out = "{\n";
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "  \"experiment\": \"%s\",\n  \"n\": %d,\n"
                  "  \"trials\": %ld,\n  \"rounds\": %d,\n"
                  "  \"r_weight\": %d,\n  \"seed\": %" PRIu64 ",\n"
                  "  \"workers\": %d,\n",
                  experiment_name(report.config.experiment).c_str(),
                  report.config.n, report.config.trials, report.config.rounds,
                  report.config.r_weight, report.config.master_seed,
                  report.config.workers);
    out += buf;
    out += "  \"estimate\": " + real(report.estimate) + ",\n";
    out += "  \"stderr\": " + real(report.standard_error) + ",\n";
    out += "  \"exact\": ";
    out += report.exact_value ? real(*report.exact_value) : "null";
    out += ",\n  \"aborts\": " + std::to_string(report.abort_count) + ",\n";
    out += std::string("  \"oracle_agrees\": ") +
           (report.oracle_agrees ? "true" : "false") + ",\n";
    out += "  \"wall_time\": " + real(report.wall_time) + "\n}\n";
    return out;
}

ExperimentReport report_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    ExperimentReport report;
    report.config.experiment =
        experiment_from_name(j.at("experiment").get<std::string>());
    report.config.n = j.at("n").get<int>();
    report.config.trials = j.at("trials").get<long>();
    report.config.rounds = j.at("rounds").get<int>();
    report.config.r_weight = j.at("r_weight").get<int>();
    report.config.master_seed = j.at("seed").get<std::uint64_t>();
    report.config.workers = j.at("workers").get<int>();
    report.estimate = j.at("estimate").get<double>();
    report.standard_error = j.at("stderr").get<double>();
    if (!j.at("exact").is_null())
        report.exact_value = j.at("exact").get<double>();
    report.abort_count = j.at("aborts").get<long>();
    report.oracle_agrees = j.at("oracle_agrees").get<bool>();
    report.wall_time = j.at("wall_time").get<double>();
    return report;
}

void write_report(const ExperimentReport& report, const std::string& path,
                  ReportFormat format) {
    const std::string payload = format == ReportFormat::Csv
                                    ? report_to_csv(report)
                                    : report_to_json(report);
    if (path.empty()) {
        std::fputs(payload.c_str(), stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("write_report: cannot open " + path);
    out << payload;
    if (!out)
        throw std::runtime_error("write_report: write failed for " + path +
                                 " (" + format_name(format) + ")");
}

}  // namespace qbc
