#include "durasim/wbs.hpp"

#include <cmath>
#include <set>

#include "durasim/error.hpp"
#include "overloaded.hpp"

namespace durasim {

namespace {

WorkPackage manual(std::string id, std::string name, Distribution d) {
    return WorkPackage{std::move(id), std::move(name), ManualEstimate{d}, std::nullopt, std::nullopt};
}

WorkPackage historical(std::string id, std::string name, std::string key) {
    return WorkPackage{std::move(id), std::move(name), HistoricalEstimate{std::move(key), {}}, std::nullopt,
                       std::nullopt};
}

WorkPackage& find_mutable(Project& project, std::string_view id) {
    for (Phase& phase : project.phases) {
        for (WorkPackage& wp : phase.work_packages) {
            if (wp.id == id) return wp;
        }
    }
    throw NotFoundError("unknown work package id '" + std::string(id) + "'");
}

}  // namespace

std::vector<std::string> validate(const EstimateSpec& spec) {
    return std::visit(detail::Overloaded{
                          [](const ManualEstimate& m) { return validate(m.distribution); },
                          [](const HistoricalEstimate& h) {
                              std::vector<std::string> out;
                              if (h.key.find_first_not_of(" \t\r\n") == std::string::npos) {
                                  out.emplace_back("historical key must be nonempty");
                              }
                              return out;
                          },
                      },
                      spec);
}

std::size_t Project::work_package_count() const noexcept {
    std::size_t n = 0;
    for (const Phase& p : phases) n += p.work_packages.size();
    return n;
}

const WorkPackage* Project::find(std::string_view id) const noexcept {
    for (const Phase& phase : phases) {
        for (const WorkPackage& wp : phase.work_packages) {
            if (wp.id == id) return &wp;
        }
    }
    return nullptr;
}

std::vector<std::string> validate(const Project& project) {
    std::vector<std::string> out;
    if (project.name.empty()) out.emplace_back("project name must be nonempty");
    if (project.work_package_count() == 0) out.emplace_back("project must contain at least one work package");

    std::set<std::string, std::less<>> ids;
    std::set<std::string, std::less<>> phase_names;
    for (const Phase& phase : project.phases) {
        const std::string where = "phase '" + phase.name + "'";
        if (phase.name.empty()) out.emplace_back("phase name must be nonempty");
        if (!phase_names.insert(phase.name).second) out.push_back("duplicate phase name '" + phase.name + "'");
        for (const WorkPackage& wp : phase.work_packages) {
            const std::string item = where + " item '" + wp.id + "'";
            if (wp.id.empty()) out.push_back(where + ": work package id must be nonempty");
            if (!ids.insert(wp.id).second) out.push_back("duplicate work package id '" + wp.id + "'");
            if (wp.name.empty()) out.push_back(item + ": name must be nonempty");
            for (const std::string& v : validate(wp.estimate)) out.push_back(item + ": " + v);
            if (wp.actual && !(std::isfinite(*wp.actual) && *wp.actual >= 0.0)) {
                out.push_back(item + ": completed actual must be >= 0");
            }
            if (wp.original_estimate) {
                for (const std::string& v : validate(*wp.original_estimate)) {
                    out.push_back(item + ": original_estimate: " + v);
                }
            }
            if (wp.original_estimate && !wp.actual) {
                out.push_back(item + ": original_estimate is only recorded for completed items");
            }
        }
    }
    return out;
}

void require_valid(const Project& project) {
    auto violations = validate(project);
    if (!violations.empty()) {
        throw ValidationError("invalid project '" + project.name + "'", std::move(violations));
    }
}

Project default_template() {
    Project p;
    p.name = "Software Development Project";
    p.phases = {
        Phase{"Planning & Bid Preparation",
              "Bid Submission",
              {
                  manual("RO", "Review Opportunity", PointValue{15.0}),
                  historical("PS", "Project Scoping", "project-scoping"),
                  historical("PP", "Project Plan", "project-plan"),
                  historical("CE", "Cost Estimation", "cost-estimation"),
              }},
        Phase{"Requirements Definition",
              "System Requirements Review",
              {
                  manual("CR", "Capacity Planning/Resource Allocation", Uniform{30.0, 100.0}),
                  manual("DR", "Draft Requirements Documents", Uniform{50.0, 80.0}),
                  historical("QP", "Quality Plan", "quality-plan"),
                  manual("TP", "Draft System Test Plan", Triangular{25.0, 50.0, 60.0}),
                  manual("FR", "Finalise Requirements Documents", Uniform{20.0, 90.0}),
              }},
        Phase{"Analysis & Design",
              "Critical Design Review",
              {
                  manual("DS", "Draft Design Specification", Triangular{50.0, 75.0, 100.0}),
                  manual("IP", "Integration Test Plan", Triangular{20.0, 60.0, 100.0}),
                  historical("CP", "Configuration Management Plan", "configuration-management-plan"),
                  manual("FM", "Modelling", Triangular{30.0, 50.0, 110.0}),
                  historical("FD", "Finalise Design Specification", "finalise-design-specification"),
              }},
        Phase{"Coding & Debugging", std::nullopt, {}},
        Phase{"Integration & Testing", std::nullopt, {}},
        Phase{"Deployment & Acceptance", "Customer Acceptance", {}},
    };
    return p;
}

Project freeze(Project project, std::string_view id, double actual) {
    if (!(std::isfinite(actual) && actual >= 0.0)) {
        throw ValidationError("actual effort for '" + std::string(id) + "' must be >= 0, got " +
                              std::to_string(actual));
    }
    WorkPackage& wp = find_mutable(project, id);
    if (!wp.completed()) wp.original_estimate = wp.estimate;
    wp.actual = actual;
    wp.estimate = ManualEstimate{PointValue{actual}};
    return project;
}

Project set_estimate(Project project, std::string_view id, EstimateSpec estimate) {
    WorkPackage& wp = find_mutable(project, id);
    if (wp.completed()) {
        throw ValidationError("work package '" + wp.id + "' is completed; its estimate is fixed");
    }
    auto violations = validate(estimate);
    if (!violations.empty()) {
        throw ValidationError("estimate for '" + wp.id + "'", std::move(violations));
    }
    wp.estimate = std::move(estimate);
    return project;
}

Project apply_overrides(Project project, const Overrides& overrides) {
    for (const EstimateOverride& e : overrides.estimates) {
        project = set_estimate(std::move(project), e.id, e.estimate);
    }
    for (const FreezeOverride& f : overrides.freeze) {
        project = freeze(std::move(project), f.id, f.actual);
    }
    return project;
}

}  // namespace durasim
