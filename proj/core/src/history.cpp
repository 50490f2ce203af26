#include "durasim/history.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json_codec.hpp"

namespace durasim {

using detail::Json;

namespace {

constexpr std::array<std::string_view, 5> kCsvColumns{"project_name", "key", "actual", "recorded_at", "typical"};

class StoreLock {
public:
    explicit StoreLock(const std::filesystem::path& store) {
        const std::string lock_path = store.string() + ".lock";
        fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
        if (fd_ < 0) throw Error("cannot open history lock file '" + lock_path + "'");
        if (::flock(fd_, LOCK_EX) != 0) {
            ::close(fd_);
            throw Error("cannot lock history store '" + store.string() + "'");
        }
    }
    ~StoreLock() {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
    StoreLock(const StoreLock&) = delete;
    StoreLock& operator=(const StoreLock&) = delete;

private:
    int fd_ = -1;
};

HistoryStore load_unlocked(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        if (!std::filesystem::exists(path)) return {};
        throw Error("cannot read history store '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_history(buf.str());
}

void save_unlocked(const HistoryStore& store, const std::filesystem::path& path) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write history store '" + path.string() + "'");
        out << serialize_history(store);
        if (!out.flush()) throw Error("cannot write history store '" + path.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error("cannot replace history store '" + path.string() + "': " + ec.message());
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

struct CsvRow {
    std::size_t line = 0;
    std::vector<std::string> fields;
    bool malformed = false;
};

// RFC 4180 splitter: quoted fields may contain commas, doubled quotes and
// newlines. Each row remembers the line it starts on.
std::vector<CsvRow> split_csv(std::string_view doc) {
    std::vector<CsvRow> rows;
    std::size_t line = 1;
    std::size_t i = 0;
    if (doc.substr(0, 3) == "\xEF\xBB\xBF") i = 3;
    while (i < doc.size()) {
        CsvRow row;
        row.line = line;
        std::string field;
        bool in_quotes = false;
        bool field_quoted = false;
        bool end_of_row = false;
        while (i < doc.size() && !end_of_row) {
            const char c = doc[i++];
            if (in_quotes) {
                if (c == '"') {
                    if (i < doc.size() && doc[i] == '"') {
                        field += '"';
                        ++i;
                    } else {
                        in_quotes = false;
                    }
                } else {
                    if (c == '\n') ++line;
                    field += c;
                }
            } else if (c == '"') {
                if (!field.empty() || field_quoted) row.malformed = true;
                in_quotes = true;
                field_quoted = true;
            } else if (c == ',') {
                row.fields.push_back(std::move(field));
                field.clear();
                field_quoted = false;
            } else if (c == '\n') {
                ++line;
                end_of_row = true;
            } else if (c != '\r') {
                if (field_quoted) row.malformed = true;
                field += c;
            }
        }
        if (in_quotes) row.malformed = true;
        row.fields.push_back(std::move(field));
        const bool blank = row.fields.size() == 1 && trim(row.fields[0]).empty() && !field_quoted;
        if (!blank) rows.push_back(std::move(row));
    }
    return rows;
}

std::optional<double> parse_number(const std::string& text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<bool> parse_flag(const std::string& text) {
    const std::string t = lower(text);
    if (t.empty() || t == "true" || t == "1" || t == "yes" || t == "y") return true;
    if (t == "false" || t == "0" || t == "no" || t == "n") return false;
    return std::nullopt;
}

Json record_to_json(const HistoryRecord& r) {
    Json j;
    j["project_name"] = r.project_name;
    j["key"] = r.key;
    j["actual"] = r.actual;
    j["recorded_at"] = format_date(r.recorded_at);
    j["typical"] = r.typical;
    return j;
}

}  // namespace

std::string normalize_key(std::string_view label) {
    std::string out;
    bool pending_gap = false;
    for (unsigned char c : trim(label)) {
        if (std::isspace(c)) {
            pending_gap = true;
            continue;
        }
        if (pending_gap) {
            out += '-';
            pending_gap = false;
        }
        out += static_cast<char>(std::tolower(c));
    }
    return out;
}

std::vector<std::string> validate(const HistoryRecord& record) {
    std::vector<std::string> out;
    if (normalize_key(record.key).empty()) out.emplace_back("key must be nonempty");
    if (!(std::isfinite(record.actual) && record.actual >= 0.0)) out.emplace_back("actual must be >= 0");
    if (!record.recorded_at.ok()) out.emplace_back("recorded_at must be a valid calendar date");
    return out;
}

std::chrono::year_month_day parse_date(std::string_view text) {
    const auto bad = [&] { return ParseError("invalid date '" + std::string(text) + "', expected YYYY-MM-DD"); };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') throw bad();
    int y = 0;
    unsigned m = 0, d = 0;
    const auto num = [&](std::size_t pos, std::size_t len, auto& out) {
        const auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
        if (ec != std::errc{} || ptr != text.data() + pos + len) throw bad();
    };
    num(0, 4, y);
    num(5, 2, m);
    num(8, 2, d);
    const std::chrono::year_month_day date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!date.ok()) throw bad();
    return date;
}

std::string format_date(std::chrono::year_month_day date) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

std::vector<double> HistoryStore::records_for(std::string_view key, bool include_atypical) const {
    const std::string wanted = normalize_key(key);
    std::vector<double> out;
    for (const HistoryRecord& r : records_) {
        if (r.key == wanted && (include_atypical || r.typical)) out.push_back(r.actual);
    }
    return out;
}

HistoryStore add_record(HistoryStore store, HistoryRecord record) {
    auto violations = validate(record);
    if (!violations.empty()) throw ValidationError("invalid history record", std::move(violations));
    record.key = normalize_key(record.key);
    store.records_.push_back(std::move(record));
    return store;
}

FitResult refit(const HistoryStore& store, std::string_view key, std::span<const Family> families,
                bool include_atypical) {
    const std::vector<double> values = store.records_for(key, include_atypical);
    if (values.size() < kMinFitPoints) {
        throw InsufficientDataError("key '" + normalize_key(key) + "' has " + std::to_string(values.size()) +
                                    " record(s); fitting needs at least " + std::to_string(kMinFitPoints));
    }
    return best_fit(values, families).front();
}

ImportOutcome import_csv(HistoryStore store, std::string_view document) {
    const std::vector<CsvRow> rows = split_csv(document);
    if (rows.empty()) throw ParseError("CSV document is empty; expected a header row");

    const CsvRow& header = rows.front();
    if (header.malformed) throw ParseError("CSV header is malformed");
    std::map<std::string, std::size_t, std::less<>> column;
    for (std::size_t i = 0; i < header.fields.size(); ++i) {
        const std::string name = lower(trim(header.fields[i]));
        if (std::find(kCsvColumns.begin(), kCsvColumns.end(), name) == kCsvColumns.end()) {
            throw ParseError("CSV header has unknown column '" + name + "'");
        }
        if (!column.emplace(name, i).second) throw ParseError("CSV header repeats column '" + name + "'");
    }
    for (std::string_view name : kCsvColumns) {
        if (!column.contains(name)) throw ParseError("CSV header is missing column '" + std::string(name) + "'");
    }

    ImportOutcome outcome{std::move(store), {}};
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const CsvRow& row = rows[r];
        const auto reject = [&](std::string reason) { outcome.report.rejected.push_back({row.line, std::move(reason)}); };
        if (row.malformed) {
            reject("malformed quoting");
            continue;
        }
        if (row.fields.size() != header.fields.size()) {
            reject("expected " + std::to_string(header.fields.size()) + " fields, got " +
                   std::to_string(row.fields.size()));
            continue;
        }
        const auto field = [&](std::string_view name) { return trim(row.fields[column.find(name)->second]); };

        HistoryRecord record;
        record.project_name = field("project_name");
        record.key = field("key");
        const auto actual = parse_number(field("actual"));
        if (!actual) {
            reject("actual '" + field("actual") + "' is not a number");
            continue;
        }
        record.actual = *actual;
        try {
            record.recorded_at = parse_date(field("recorded_at"));
        } catch (const ParseError& e) {
            reject(e.what());
            continue;
        }
        const auto typical = parse_flag(field("typical"));
        if (!typical) {
            reject("typical '" + field("typical") + "' is not a boolean");
            continue;
        }
        record.typical = *typical;
        try {
            outcome.store = add_record(std::move(outcome.store), std::move(record));
            ++outcome.report.imported;
        } catch (const ValidationError& e) {
            std::string reason;
            for (const auto& v : e.violations()) reason += (reason.empty() ? "" : "; ") + v;
            reject(reason);
        }
    }
    return outcome;
}

namespace {

HistoryRecord record_from_json(const Json& j) {
    detail::ObjectReader r(j, "");
    HistoryRecord record;
    record.project_name = r.string("project_name");
    record.key = r.string("key");
    record.actual = r.number("actual");
    record.recorded_at = parse_date(r.string("recorded_at"));
    record.typical = r.optional("typical") ? r.boolean("typical") : true;
    r.finish();
    auto violations = validate(record);
    if (!violations.empty()) throw ValidationError("invalid history record", std::move(violations));
    record.key = normalize_key(record.key);
    return record;
}

}  // namespace

HistoryRecord parse_record(std::string_view json) {
    return record_from_json(detail::parse_document(json, "history record"));
}

std::string serialize_record(const HistoryRecord& record) {
    return record_to_json(record).dump();
}

std::string serialize_history(const HistoryStore& store) {
    std::string out;
    for (const HistoryRecord& r : store.records()) {
        out += serialize_record(r);
        out += '\n';
    }
    return out;
}

HistoryStore parse_history(std::string_view document) {
    HistoryStore store;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < document.size()) {
        const auto end = document.find('\n', pos);
        const std::string_view line =
            document.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        pos = end == std::string_view::npos ? document.size() : end + 1;
        ++line_no;
        if (trim(line).empty()) continue;

        const std::string where = "history line " + std::to_string(line_no);
        try {
            store = add_record(std::move(store), parse_record(line));
        } catch (const ParseError& e) {
            throw ParseError(where + ": " + e.what());
        } catch (const ValidationError& e) {
            throw ValidationError(where + ": " + e.what());
        }
    }
    return store;
}

HistoryStore load_history(const std::filesystem::path& path) {
    return load_unlocked(path);
}

void save_history(const HistoryStore& store, const std::filesystem::path& path) {
    StoreLock lock(path);
    save_unlocked(store, path);
}

HistoryStore update_history(const std::filesystem::path& path,
                            const std::function<HistoryStore(HistoryStore)>& mutate) {
    StoreLock lock(path);
    HistoryStore next = mutate(load_unlocked(path));
    save_unlocked(next, path);
    return next;
}

}  // namespace durasim
