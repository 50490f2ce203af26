#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "durasim/fitting.hpp"

namespace durasim {

/// One actual outcome from a past project.
struct HistoryRecord {
    std::string project_name;
    std::string key;  ///< normalized item or phase label
    double actual = 0.0;
    std::chrono::year_month_day recorded_at{};
    /// Atypical projects are kept but excluded from fits by default.
    bool typical = true;

    friend bool operator==(const HistoryRecord&, const HistoryRecord&) = default;
};

/// Lowercase, trim, and collapse each internal whitespace run to one hyphen,
/// so "Draft Requirements Documents" and " draft  requirements documents"
/// share history.
std::string normalize_key(std::string_view label);

std::vector<std::string> validate(const HistoryRecord& record);

/// "YYYY-MM-DD". parse_date throws ParseError on anything else.
std::chrono::year_month_day parse_date(std::string_view text);
std::string format_date(std::chrono::year_month_day date);

/// Append-ordered, value-semantic collection of records.
class HistoryStore {
public:
    HistoryStore() = default;

    const std::vector<HistoryRecord>& records() const noexcept { return records_; }
    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }

    /// Actual values under `key` (normalized before lookup) in insertion order.
    std::vector<double> records_for(std::string_view key, bool include_atypical = false) const;

    friend bool operator==(const HistoryStore&, const HistoryStore&) = default;

private:
    friend HistoryStore add_record(HistoryStore store, HistoryRecord record);
    std::vector<HistoryRecord> records_;
};

/// Validates, normalizes the key, appends. Throws ValidationError.
HistoryStore add_record(HistoryStore store, HistoryRecord record);

/// Best-ranked fit over the key's values. Throws InsufficientDataError below
/// kMinFitPoints.
FitResult refit(const HistoryStore& store, std::string_view key, std::span<const Family> families,
                bool include_atypical = false);

struct RejectedRow {
    std::size_t line = 0;  ///< 1-based; the header is line 1
    std::string reason;
};

struct ImportReport {
    std::size_t imported = 0;
    std::vector<RejectedRow> rejected;
};

struct ImportOutcome {
    HistoryStore store;
    ImportReport report;
};

/// CSV with header columns project_name,key,actual,recorded_at,typical (any
/// order). Bad rows are reported and skipped; a bad header refuses the whole
/// import with ParseError.
ImportOutcome import_csv(HistoryStore store, std::string_view document);

/// One record object {project_name, key, actual, recorded_at, typical?}.
/// Throws ParseError or ValidationError.
HistoryRecord parse_record(std::string_view json);
std::string serialize_record(const HistoryRecord& record);

/// JSON Lines, one {project_name, key, actual, recorded_at, typical} per line.
std::string serialize_history(const HistoryStore& store);
HistoryStore parse_history(std::string_view document);

/// A missing file loads as an empty store.
HistoryStore load_history(const std::filesystem::path& path);
/// Atomic replace (temp file + rename) under the store's advisory lock.
void save_history(const HistoryStore& store, const std::filesystem::path& path);

/// Load-modify-save while holding the exclusive advisory lock, so concurrent
/// writers serialize. Returns the saved store.
HistoryStore update_history(const std::filesystem::path& path,
                            const std::function<HistoryStore(HistoryStore)>& mutate);

}  // namespace durasim
