#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hypermp/homophily.hpp"
#include "hypermp/sampler.hpp"
#include "hypermp/stats.hpp"
#include "hypermp/train.hpp"

namespace hypermp {

using Json = nlohmann::ordered_json;

/// Header plus rows of already-formatted cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

enum class ReportFormat { kJson, kCsv };

/// A report renders either as JSON or as CSV. Key order follows insertion;
/// numbers use the shortest round-trip representation, so identical inputs
/// give identical bytes.
struct Report {
  Json json = Json::object();
  CsvTable table;
};

std::string emit(const Report& report, ReportFormat format);
std::string emit_json(const Json& value);
std::string emit_csv(const CsvTable& table);

/// Writes to `path`, or to stdout when path is empty. Throws Error when the
/// path is not writable.
void write_output(const std::string& bytes, const std::optional<std::filesystem::path>& path);

std::string format_number(double value);

Report stats_report(const StatsReport& stats);
Report homophily_report(const HomophilyTrace<double>& trace, const LabelAssignment& labels,
                        const std::vector<double>& mu_grid, IsolatedPolicy policy);
Report delta_report(const HomophilyTrace<double>& trace, std::size_t t,
                    const std::vector<double>& mu_grid, IsolatedPolicy policy);
Report kuniform_report(const KUniformReport& report);
Report class_shift_report(const ClassShiftReport& shift);
Json train_report_json(const TrainReport& report);

/// Default μ grid 0.01, 0.02, ..., 1.00.
std::vector<double> default_mu_grid();

}  // namespace hypermp
