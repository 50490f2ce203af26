#include "durasim/export.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "json_codec.hpp"

namespace durasim {

using detail::child_path;
using detail::Json;
using detail::ObjectReader;

namespace {

std::string fixed(double v, int decimals = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string fixed(const std::optional<double>& v, int decimals = 2) {
    return v ? fixed(*v, decimals) : std::string("n/a");
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.insert(0, width - s.size(), ' ');
    return s;
}

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

Json change_to_json(const MetricChange& c) {
    Json j;
    j["before"] = detail::optional_number(c.before);
    j["after"] = detail::optional_number(c.after);
    j["delta"] = detail::optional_number(c.delta);
    if (c.verdict) j["verdict"] = std::string(verdict_name(*c.verdict));
    return j;
}

Json scope_to_json(const ScopeComparison& s) {
    Json j;
    j["scope"] = s.scope;
    j["mean"] = change_to_json(s.mean);
    j["sd"] = change_to_json(s.sd);
    j["excess_kurtosis"] = change_to_json(s.excess_kurtosis);
    j["iqr"] = change_to_json(s.iqr);
    return j;
}

Json names_json(const std::vector<std::string>& names) {
    Json j = Json::array();
    for (const auto& n : names) j.push_back(n);
    return j;
}

}  // namespace

std::string format_number(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

std::string result_to_json(const SimulationResult& result, bool include_samples) {
    Json root;
    root["project"] = result.project_name;
    Json config;
    config["iterations"] = result.config.iterations;
    config["seed"] = result.config.seed;
    config["min_history_points"] = result.config.min_history_points;
    root["config"] = std::move(config);
    root["total"] = detail::stats_to_json(result.total);
    Json phases = Json::array();
    for (const PhaseResult& p : result.phases) {
        Json jp;
        jp["name"] = p.name;
        jp["stats"] = detail::stats_to_json(p.stats);
        phases.push_back(std::move(jp));
    }
    root["phases"] = std::move(phases);
    Json items = Json::array();
    for (const ItemResult& it : result.items) {
        Json ji;
        ji["id"] = it.id;
        ji["phase"] = it.phase;
        ji["resolved"] = detail::distribution_to_json(it.resolved);
        ji["stats"] = detail::stats_to_json(it.stats);
        items.push_back(std::move(ji));
    }
    root["items"] = std::move(items);
    if (include_samples) root["total_samples"] = result.total_samples;
    return detail::dump_canonical(root);
}

SimulationResult result_from_json(std::string_view document) {
    const Json root = detail::parse_document(document, "result document");
    ObjectReader r(root, "");
    SimulationResult result;
    result.project_name = r.string("project");

    ObjectReader c(r.required("config"), "/config");
    for (auto [key, slot] : {std::pair{"iterations", &result.config.iterations},
                             std::pair{"min_history_points", &result.config.min_history_points}}) {
        const Json& v = c.required(key);
        if (!v.is_number_unsigned()) detail::fail(child_path("/config", key), "expected a non-negative integer");
        *slot = v.get<std::size_t>();
    }
    const Json& seed = c.required("seed");
    if (!seed.is_number_unsigned()) detail::fail("/config/seed", "expected a non-negative integer");
    result.config.seed = seed.get<std::uint64_t>();
    c.finish();

    result.total = detail::stats_from_json(r.required("total"), "/total");

    const Json& phases = detail::expect_array(r.required("phases"), "/phases");
    for (std::size_t i = 0; i < phases.size(); ++i) {
        const std::string path = child_path("/phases", i);
        ObjectReader p(phases[i], path);
        PhaseResult pr;
        pr.name = p.string("name");
        pr.stats = detail::stats_from_json(p.required("stats"), child_path(path, "stats"));
        p.finish();
        result.phases.push_back(std::move(pr));
    }
    const Json& items = detail::expect_array(r.required("items"), "/items");
    for (std::size_t i = 0; i < items.size(); ++i) {
        const std::string path = child_path("/items", i);
        ObjectReader it(items[i], path);
        ItemResult ir;
        ir.id = it.string("id");
        ir.phase = it.string("phase");
        ir.resolved = detail::distribution_from_json(it.required("resolved"), child_path(path, "resolved"));
        ir.stats = detail::stats_from_json(it.required("stats"), child_path(path, "stats"));
        it.finish();
        result.items.push_back(std::move(ir));
    }
    if (const Json* samples = r.optional("total_samples")) {
        detail::expect_array(*samples, "/total_samples");
        for (std::size_t i = 0; i < samples->size(); ++i) {
            result.total_samples.push_back(detail::expect_number((*samples)[i], child_path("/total_samples", i)));
        }
    }
    r.finish();
    return result;
}

std::string risk_report_to_json(const RiskReport& report) {
    Json root;
    Json phases = Json::array();
    for (const PhaseStats& p : report.phases) {
        Json jp;
        jp["name"] = p.name;
        jp["stats"] = detail::stats_to_json(p.stats);
        phases.push_back(std::move(jp));
    }
    root["phases"] = std::move(phases);
    root["spread_ranking"] = names_json(report.spread_ranking);
    root["overrun_ranking"] = names_json(report.overrun_ranking);
    root["degenerate"] = names_json(report.degenerate);
    return detail::dump_canonical(root);
}

std::string risk_report_to_csv(const RiskReport& report) {
    const auto row = [&](const PhaseStats& p) {
        const SummaryStats& s = p.stats;
        const auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
        return csv_cell(p.name) + "," + format_number(s.mean) + "," + format_number(s.sd) + "," +
               format_number(s.q1) + "," + format_number(s.q3) + "," + format_number(s.iqr) + "," +
               opt(s.skewness) + "," + opt(s.excess_kurtosis) + "\n";
    };
    const auto find = [&](const std::string& name) -> const PhaseStats& {
        for (const PhaseStats& p : report.phases) {
            if (p.name == name) return p;
        }
        throw Error("ranking names unknown phase '" + name + "'");
    };
    const std::string header = "phase,mean,sd,q1,q3,iqr,skewness,excess_kurtosis\n";

    std::string out = "# phases\n" + header;
    for (const PhaseStats& p : report.phases) out += row(p);
    out += "\n# spread_ranking\n" + header;
    for (const std::string& name : report.spread_ranking) out += row(find(name));
    out += "\n# overrun_ranking\n" + header;
    for (const std::string& name : report.overrun_ranking) out += row(find(name));
    return out;
}

std::string comparison_to_json(const RefinementReport& report) {
    Json root;
    root["project"] = report.project_name;
    root["iterations"] = report.iterations;
    root["total"] = scope_to_json(report.total);
    Json phases = Json::array();
    for (const ScopeComparison& s : report.phases) phases.push_back(scope_to_json(s));
    root["phases"] = std::move(phases);
    return detail::dump_canonical(root);
}

std::string fits_to_json(std::span<const FitResult> fits) {
    Json root = Json::array();
    for (const FitResult& f : fits) root.push_back(detail::fit_to_json(f));
    return detail::dump_canonical(root);
}

std::string history_to_json(std::span<const HistoryRecord> records) {
    Json root = Json::array();
    for (const HistoryRecord& r : records) {
        Json j;
        j["project_name"] = r.project_name;
        j["key"] = r.key;
        j["actual"] = r.actual;
        j["recorded_at"] = format_date(r.recorded_at);
        j["typical"] = r.typical;
        root.push_back(std::move(j));
    }
    return detail::dump_canonical(root);
}

std::string import_report_to_json(const ImportReport& report) {
    Json root;
    root["imported"] = report.imported;
    Json rejected = Json::array();
    for (const RejectedRow& row : report.rejected) {
        Json j;
        j["line"] = row.line;
        j["reason"] = row.reason;
        rejected.push_back(std::move(j));
    }
    root["rejected"] = std::move(rejected);
    return detail::dump_canonical(root);
}

std::string summary_table(const SummaryStats& s, std::string_view title) {
    std::ostringstream os;
    os << title << " (" << s.count << " iterations)\n";
    const auto line = [&](std::string_view label, const std::string& value) {
        os << "  " << label << std::string(18 - label.size(), ' ') << pad(value, 12) << "\n";
    };
    line("mean", fixed(s.mean));
    line("sd", fixed(s.sd));
    line("minimum", fixed(s.minimum));
    line("q1", fixed(s.q1));
    line("median", fixed(s.median));
    line("q3", fixed(s.q3));
    line("maximum", fixed(s.maximum));
    line("iqr", fixed(s.iqr));
    line("skewness", fixed(s.skewness, 4));
    line("excess kurtosis", fixed(s.excess_kurtosis, 4));
    return os.str();
}

std::string comparison_table(const RefinementReport& report) {
    std::ostringstream os;
    os << "What-if comparison for '" << report.project_name << "' (" << report.iterations << " iterations)\n";
    os << "  scope                        metric               before       after       delta  verdict\n";
    const auto scope = [&](const ScopeComparison& s) {
        const auto line = [&](std::string_view metric, const MetricChange& c) {
            std::string name = s.scope.substr(0, 28);
            os << "  " << name << std::string(29 - name.size(), ' ') << metric
               << std::string(16 - metric.size(), ' ') << pad(fixed(c.before, 4), 12) << pad(fixed(c.after, 4), 12)
               << pad(fixed(c.delta, 4), 12) << "  " << (c.verdict ? verdict_name(*c.verdict) : "") << "\n";
        };
        line("mean", s.mean);
        line("sd", s.sd);
        line("excess_kurtosis", s.excess_kurtosis);
        line("iqr", s.iqr);
    };
    scope(report.total);
    for (const ScopeComparison& s : report.phases) scope(s);
    return os.str();
}

std::string fits_table(std::span<const FitResult> fits) {
    std::ostringstream os;
    os << "  rank  family       ks_statistic  fitted\n";
    for (std::size_t i = 0; i < fits.size(); ++i) {
        const std::string fam(family_name(fits[i].family));
        os << pad(std::to_string(i + 1), 6) << "  " << fam << std::string(11 - fam.size(), ' ')
           << pad(fixed(fits[i].ks_statistic, 6), 14) << "  " << describe(fits[i].fitted) << "\n";
    }
    return os.str();
}

std::string risk_table(const RiskReport& report) {
    std::ostringstream os;
    os << "Spread risk (ascending excess kurtosis):\n";
    for (std::size_t i = 0; i < report.spread_ranking.size(); ++i) {
        os << "  " << i + 1 << ". " << report.spread_ranking[i] << "\n";
    }
    os << "Overrun risk (descending skewness):\n";
    for (std::size_t i = 0; i < report.overrun_ranking.size(); ++i) {
        os << "  " << i + 1 << ". " << report.overrun_ranking[i] << "\n";
    }
    if (!report.degenerate.empty()) {
        os << "Zero-spread phases:";
        for (const auto& n : report.degenerate) os << " " << n << ";";
        os << "\n";
    }
    return os.str();
}

}  // namespace durasim
