#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "durasim/distributions.hpp"
#include "durasim/history.hpp"
#include "durasim/statistics.hpp"
#include "durasim/wbs.hpp"

namespace durasim {

/// 5,000-10,000 iterations is the customary band for desk-scale estimates.
struct SimulationConfig {
    std::size_t iterations = 10'000;
    std::uint64_t seed = 0;
    /// Typical records a historical estimate needs before it can be fitted.
    std::size_t min_history_points = 5;

    friend bool operator==(const SimulationConfig&, const SimulationConfig&) = default;
};

/// Execution knobs that never change the result.
struct RunOptions {
    /// Worker threads; 0 means hardware concurrency.
    unsigned threads = 1;
    /// Keep per-item and per-phase sample vectors (for additivity checks).
    bool retain_component_samples = false;
    /// Above this many iterations samples are streamed: moments and histograms
    /// stay exact, quartiles come from a reservoir of `reservoir_size` values.
    std::size_t retain_limit = 1'000'000;
    std::size_t reservoir_size = 100'000;
};

struct ItemResult {
    std::string id;
    std::string phase;
    Distribution resolved;
    SummaryStats stats;
    friend bool operator==(const ItemResult&, const ItemResult&) = default;
};

struct PhaseResult {
    std::string name;
    SummaryStats stats;
    friend bool operator==(const PhaseResult&, const PhaseResult&) = default;
};

struct SimulationResult {
    std::string project_name;
    SimulationConfig config;
    std::vector<ItemResult> items;    ///< project order
    std::vector<PhaseResult> phases;  ///< nonempty phases, project order
    SummaryStats total;
    /// y_i per iteration; empty when iterations exceed RunOptions::retain_limit.
    std::vector<double> total_samples;

    // Only with RunOptions::retain_component_samples (index-aligned with
    // items / phases).
    std::vector<std::vector<double>> item_samples;
    std::vector<std::vector<double>> phase_samples;

    const ItemResult* item(std::string_view id) const noexcept;
    const PhaseResult* phase(std::string_view name) const noexcept;

    friend bool operator==(const SimulationResult&, const SimulationResult&) = default;
};

/// Manual estimates pass through; historical ones take the best-ranked fit
/// over the key's typical records. Throws InsufficientHistoryError when fewer
/// than max(min_history_points, kMinFitPoints) records exist.
Distribution resolve_estimate(const EstimateSpec& spec, const HistoryStore& history,
                              std::size_t min_history_points = 5);

/// Monte Carlo propagation through the additive model
///   phase_i = sum of its items' draws, total_i = sum of phase_i,
/// with items sampled independently by inverse transform from
/// substream_uniform(seed, i, item_index). The result is bit-identical for any
/// thread count.
SimulationResult run(const Project& project, const SimulationConfig& config, const HistoryStore& history,
                     const RunOptions& options = {});

/// Per-phase risk ranking of a finished run.
RiskReport risk_report(const SimulationResult& result);

enum class Verdict { improved, worsened, unchanged, not_available };

std::string_view verdict_name(Verdict v) noexcept;

struct MetricChange {
    std::optional<double> before;
    std::optional<double> after;
    std::optional<double> delta;  ///< after - before
    /// Unset for metrics that carry no direction (the mean).
    std::optional<Verdict> verdict;
};

struct ScopeComparison {
    std::string scope;  ///< "total" or a phase name
    MetricChange mean;
    MetricChange sd;
    MetricChange excess_kurtosis;
    MetricChange iqr;
};

/// Lower sd and IQR are improvements; higher excess kurtosis (a sharper
/// spike) is an improvement.
struct RefinementReport {
    std::string project_name;
    std::size_t iterations = 0;
    ScopeComparison total;
    std::vector<ScopeComparison> phases;
};

/// Throws ValidationError when the runs belong to different projects or
/// iteration counts.
RefinementReport compare(const SimulationResult& before, const SimulationResult& after);

}  // namespace durasim
