#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace durasim::cli {

enum class ExitStatus : int {
    success = 0,
    domain_error = 1,  ///< validation, parse, resolution or I/O failure
    usage_error = 2,   ///< bad flags or arguments
};

/// Store path used when neither --store nor --history is given.
std::string default_history_path();

/// Runs one command line (without the program name).
ExitStatus run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace durasim::cli
