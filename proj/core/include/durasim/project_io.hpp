#pragma once

#include <string>
#include <string_view>

#include "durasim/wbs.hpp"

namespace durasim {

/// Parses a project document:
///   {name, phases: [{name, milestone?, work_packages: [{id, name, status,
///    actual?, estimate, original_estimate?}]}]}
/// with estimate {type: point|normal|triangular|uniform|logistic, params: {...}}
/// or {type: "historical", key, families?}. Unknown fields are rejected.
/// Throws ParseError (syntax, types, unknown fields; message carries the JSON
/// pointer of the offending value) or ValidationError (invariants).
Project parse_project(std::string_view document);

/// Canonical form: two-space indent, keys in schema order, trailing newline.
std::string serialize_project(const Project& project);

/// {estimates?: [{id, estimate}], freeze?: [{id, actual}]}
Overrides parse_overrides(std::string_view document);
std::string serialize_overrides(const Overrides& overrides);

}  // namespace durasim
