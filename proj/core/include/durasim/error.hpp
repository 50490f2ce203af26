#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace durasim {

/// Base of every error the engine raises. Front ends map the subclasses to
/// exit codes and HTTP statuses; the message is user-facing.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value breaks a domain invariant (bad distribution, negative actual, ...).
class ValidationError : public Error {
public:
    explicit ValidationError(std::string message)
        : Error(message), violations_{std::move(message)} {}
    ValidationError(const std::string& context, std::vector<std::string> violations)
        : Error(join(context, violations)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    static std::string join(const std::string& context, const std::vector<std::string>& items) {
        std::string out = context;
        for (std::size_t i = 0; i < items.size(); ++i) {
            out += (i == 0 ? ": " : "; ");
            out += items[i];
        }
        return out;
    }

    std::vector<std::string> violations_;
};

/// Malformed input document (JSON syntax, wrong field type, unknown field).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Unknown work-package id, project, or similar lookup failure.
class NotFoundError : public Error {
public:
    using Error::Error;
};

/// Fewer data points than a fit needs.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

class InsufficientHistoryError : public Error {
public:
    InsufficientHistoryError(std::string key, std::size_t found, std::size_t required, std::string item = {})
        : Error((item.empty() ? std::string() : "work package '" + item + "': ") +
                "insufficient history for key '" + key + "': found " + std::to_string(found) + " record(s), " +
                std::to_string(required) + " required"),
          key_(std::move(key)), item_(std::move(item)), found_(found), required_(required) {}

    const std::string& item() const noexcept { return item_; }

    const std::string& key() const noexcept { return key_; }
    std::size_t found() const noexcept { return found_; }
    std::size_t required() const noexcept { return required_; }

private:
    std::string key_;
    std::string item_;
    std::size_t found_;
    std::size_t required_;
};

/// Optimistic-concurrency failure: the caller wrote against a stale version.
class ConflictError : public Error {
public:
    using Error::Error;
};

}  // namespace durasim
