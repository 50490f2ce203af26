#pragma once

// nlohmann-backed helpers shared by the core translation units.

#include <json.hpp>
#include <set>
#include <string>
#include <string_view>

#include "durasim/distributions.hpp"
#include "durasim/error.hpp"
#include "durasim/fitting.hpp"
#include "durasim/statistics.hpp"
#include "durasim/wbs.hpp"

namespace durasim::detail {

using Json = nlohmann::ordered_json;

Json parse_document(std::string_view document, std::string_view what);
std::string dump_canonical(const Json& j);

/// Field access on one JSON object with strict-schema checks. Every accessed
/// key is remembered; finish() rejects anything left over.
class ObjectReader {
public:
    ObjectReader(const Json& j, std::string path);

    const std::string& path() const noexcept { return path_; }
    bool has(std::string_view key) const;

    const Json& required(std::string_view key);
    const Json* optional(std::string_view key);

    std::string string(std::string_view key);
    double number(std::string_view key);
    bool boolean(std::string_view key);

    void finish() const;

private:
    const Json& j_;
    std::string path_;
    std::set<std::string, std::less<>> seen_;
};

std::string child_path(const std::string& parent, std::string_view key);
std::string child_path(const std::string& parent, std::size_t index);

[[noreturn]] void fail(const std::string& path, const std::string& message);

std::string expect_string(const Json& j, const std::string& path);
double expect_number(const Json& j, const std::string& path);
const Json& expect_array(const Json& j, const std::string& path);

Json distribution_to_json(const Distribution& d);
Distribution distribution_from_json(const Json& j, const std::string& path);

Json estimate_to_json(const EstimateSpec& spec);
EstimateSpec estimate_from_json(const Json& j, const std::string& path);

Json stats_to_json(const SummaryStats& s);
SummaryStats stats_from_json(const Json& j, const std::string& path);

Json fit_to_json(const FitResult& fit);

/// null for an empty optional.
Json optional_number(const std::optional<double>& v);

}  // namespace durasim::detail
