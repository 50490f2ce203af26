#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "durasim/distributions.hpp"

namespace durasim {

struct ManualEstimate {
    Distribution distribution;
    friend bool operator==(const ManualEstimate&, const ManualEstimate&) = default;
};

/// Distribution learned from the history store at simulation time.
struct HistoricalEstimate {
    std::string key;
    /// Families searched by the fit; empty means all of kAllFamilies.
    std::vector<Family> families;
    friend bool operator==(const HistoricalEstimate&, const HistoricalEstimate&) = default;
};

using EstimateSpec = std::variant<ManualEstimate, HistoricalEstimate>;

std::vector<std::string> validate(const EstimateSpec& spec);

struct WorkPackage {
    std::string id;
    std::string name;
    EstimateSpec estimate;
    /// Set once the package is completed.
    std::optional<double> actual;
    /// Estimate in force before completion, kept for estimate-vs-actual review.
    std::optional<EstimateSpec> original_estimate;

    bool completed() const noexcept { return actual.has_value(); }
    friend bool operator==(const WorkPackage&, const WorkPackage&) = default;
};

/// A lifecycle phase ("super task"). The milestone is an annotation with no
/// duration. Phases may be empty placeholders; they contribute nothing.
struct Phase {
    std::string name;
    std::optional<std::string> milestone;
    std::vector<WorkPackage> work_packages;
    friend bool operator==(const Phase&, const Phase&) = default;
};

struct Project {
    std::string name;
    std::vector<Phase> phases;

    std::size_t work_package_count() const noexcept;
    const WorkPackage* find(std::string_view id) const noexcept;
    friend bool operator==(const Project&, const Project&) = default;
};

/// Every broken invariant, each prefixed with its location
/// (e.g. "phase 'Analysis & Design' item 'FM': min < max").
std::vector<std::string> validate(const Project& project);

/// Throws ValidationError listing every violation.
void require_valid(const Project& project);

/// Six-phase waterfall skeleton with the standard planning, requirements and
/// design work packages.
Project default_template();

/// Marks `id` completed with `actual` and pins its estimate to PointValue{actual}.
/// Throws NotFoundError for an unknown id and ValidationError for a negative
/// or non-finite actual.
Project freeze(Project project, std::string_view id, double actual);

/// Replaces the estimate of a pending item. Throws NotFoundError / ValidationError.
Project set_estimate(Project project, std::string_view id, EstimateSpec estimate);

struct FreezeOverride {
    std::string id;
    double actual = 0.0;
    friend bool operator==(const FreezeOverride&, const FreezeOverride&) = default;
};

struct EstimateOverride {
    std::string id;
    EstimateSpec estimate;
    friend bool operator==(const EstimateOverride&, const EstimateOverride&) = default;
};

/// A what-if scenario delta: estimate replacements, then freezes.
struct Overrides {
    std::vector<EstimateOverride> estimates;
    std::vector<FreezeOverride> freeze;

    bool empty() const noexcept { return estimates.empty() && freeze.empty(); }
    friend bool operator==(const Overrides&, const Overrides&) = default;
};

Project apply_overrides(Project project, const Overrides& overrides);

}  // namespace durasim
