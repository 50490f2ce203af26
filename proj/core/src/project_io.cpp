#include "durasim/project_io.hpp"

#include "json_codec.hpp"

namespace durasim {

using detail::child_path;
using detail::Json;
using detail::ObjectReader;

namespace {

Json work_package_to_json(const WorkPackage& wp) {
    Json j;
    j["id"] = wp.id;
    j["name"] = wp.name;
    j["status"] = wp.completed() ? "completed" : "pending";
    if (wp.actual) j["actual"] = *wp.actual;
    j["estimate"] = detail::estimate_to_json(wp.estimate);
    if (wp.original_estimate) j["original_estimate"] = detail::estimate_to_json(*wp.original_estimate);
    return j;
}

WorkPackage work_package_from_json(const Json& j, const std::string& path) {
    ObjectReader r(j, path);
    WorkPackage wp;
    wp.id = r.string("id");
    wp.name = r.string("name");
    const std::string status = r.string("status");
    if (status == "completed") {
        wp.actual = r.number("actual");
    } else if (status != "pending") {
        detail::fail(child_path(path, "status"), "status must be 'pending' or 'completed', got '" + status + "'");
    } else if (r.has("actual")) {
        detail::fail(child_path(path, "actual"), "a pending work package has no actual");
    }
    wp.estimate = detail::estimate_from_json(r.required("estimate"), child_path(path, "estimate"));
    if (const Json* orig = r.optional("original_estimate")) {
        wp.original_estimate = detail::estimate_from_json(*orig, child_path(path, "original_estimate"));
    }
    r.finish();
    return wp;
}

}  // namespace

Project parse_project(std::string_view document) {
    const Json root = detail::parse_document(document, "project document");
    ObjectReader r(root, "");
    Project project;
    project.name = r.string("name");
    const Json& phases = detail::expect_array(r.required("phases"), "/phases");
    for (std::size_t i = 0; i < phases.size(); ++i) {
        const std::string ppath = child_path("/phases", i);
        ObjectReader pr(phases[i], ppath);
        Phase phase;
        phase.name = pr.string("name");
        if (const Json* m = pr.optional("milestone")) {
            phase.milestone = detail::expect_string(*m, child_path(ppath, "milestone"));
        }
        const std::string wpath = child_path(ppath, "work_packages");
        const Json& wps = detail::expect_array(pr.required("work_packages"), wpath);
        for (std::size_t k = 0; k < wps.size(); ++k) {
            phase.work_packages.push_back(work_package_from_json(wps[k], child_path(wpath, k)));
        }
        pr.finish();
        project.phases.push_back(std::move(phase));
    }
    r.finish();
    require_valid(project);
    return project;
}

std::string serialize_project(const Project& project) {
    Json root;
    root["name"] = project.name;
    Json phases = Json::array();
    for (const Phase& phase : project.phases) {
        Json jp;
        jp["name"] = phase.name;
        if (phase.milestone) jp["milestone"] = *phase.milestone;
        Json wps = Json::array();
        for (const WorkPackage& wp : phase.work_packages) wps.push_back(work_package_to_json(wp));
        jp["work_packages"] = std::move(wps);
        phases.push_back(std::move(jp));
    }
    root["phases"] = std::move(phases);
    return detail::dump_canonical(root);
}

Overrides parse_overrides(std::string_view document) {
    const Json root = detail::parse_document(document, "overrides document");
    ObjectReader r(root, "");
    Overrides out;
    if (const Json* est = r.optional("estimates")) {
        detail::expect_array(*est, "/estimates");
        for (std::size_t i = 0; i < est->size(); ++i) {
            const std::string path = child_path("/estimates", i);
            ObjectReader er((*est)[i], path);
            EstimateOverride e;
            e.id = er.string("id");
            e.estimate = detail::estimate_from_json(er.required("estimate"), child_path(path, "estimate"));
            er.finish();
            out.estimates.push_back(std::move(e));
        }
    }
    if (const Json* fr = r.optional("freeze")) {
        detail::expect_array(*fr, "/freeze");
        for (std::size_t i = 0; i < fr->size(); ++i) {
            ObjectReader f((*fr)[i], child_path("/freeze", i));
            FreezeOverride o;
            o.id = f.string("id");
            o.actual = f.number("actual");
            f.finish();
            out.freeze.push_back(std::move(o));
        }
    }
    r.finish();
    return out;
}

std::string serialize_overrides(const Overrides& overrides) {
    Json root = Json::object();
    Json est = Json::array();
    for (const EstimateOverride& e : overrides.estimates) {
        Json j;
        j["id"] = e.id;
        j["estimate"] = detail::estimate_to_json(e.estimate);
        est.push_back(std::move(j));
    }
    Json fr = Json::array();
    for (const FreezeOverride& f : overrides.freeze) {
        Json j;
        j["id"] = f.id;
        j["actual"] = f.actual;
        fr.push_back(std::move(j));
    }
    root["estimates"] = std::move(est);
    root["freeze"] = std::move(fr);
    return detail::dump_canonical(root);
}

}  // namespace durasim
