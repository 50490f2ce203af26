#pragma once

#include <span>
#include <string>
#include <string_view>

#include "durasim/fitting.hpp"
#include "durasim/history.hpp"
#include "durasim/simulation.hpp"
#include "durasim/statistics.hpp"

namespace durasim {

// Machine-readable documents. Each is canonical (two-space indent, fixed key
// order, trailing newline) so identical inputs give identical bytes.

/// {project, config, total, phases: [{name, stats}], items: [{id, phase,
///  resolved, stats}], total_samples?}
std::string result_to_json(const SimulationResult& result, bool include_samples = false);
/// Reads a document written by result_to_json. Throws ParseError.
SimulationResult result_from_json(std::string_view document);

/// {phases: [{name, stats}], spread_ranking, overrun_ranking, degenerate}
std::string risk_report_to_json(const RiskReport& report);
/// Three blocks (phases, spread_ranking, overrun_ranking), each a "# name"
/// line followed by  phase,mean,sd,q1,q3,iqr,skewness,excess_kurtosis  rows.
/// Unavailable skewness/kurtosis are empty cells.
std::string risk_report_to_csv(const RiskReport& report);

std::string comparison_to_json(const RefinementReport& report);
std::string fits_to_json(std::span<const FitResult> fits);
std::string history_to_json(std::span<const HistoryRecord> records);
std::string import_report_to_json(const ImportReport& report);

// Console tables.

/// The total-project block: mean, sd, min/max, quartiles, IQR, skewness, kurtosis.
std::string summary_table(const SummaryStats& stats, std::string_view title);
std::string comparison_table(const RefinementReport& report);
std::string fits_table(std::span<const FitResult> fits);
std::string risk_table(const RiskReport& report);

/// Shortest text that round-trips the double.
std::string format_number(double value);

}  // namespace durasim
