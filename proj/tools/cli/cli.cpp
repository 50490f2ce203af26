#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "durasim/error.hpp"
#include "durasim/export.hpp"
#include "durasim/history.hpp"
#include "durasim/project_io.hpp"
#include "durasim/simulation.hpp"
#include "durasim/wbs.hpp"

namespace durasim::cli {

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
    if (fs::is_directory(path)) throw Error("'" + path + "' is a directory");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    if (fs::is_directory(path)) throw Error("cannot write '" + path + "': it is a directory");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path + "'");
    out << content;
    if (!out.flush()) throw Error("cannot write '" + path + "'");
}

Project load_project(const std::string& path) {
    try {
        return parse_project(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

std::vector<Family> parse_families(const std::string& list) {
    std::vector<Family> out;
    std::stringstream ss(list);
    std::string name;
    while (std::getline(ss, name, ',')) {
        if (name.empty()) continue;
        const auto f = parse_family(name);
        if (!f) throw ValidationError("unknown distribution family '" + name + "'");
        out.push_back(*f);
    }
    if (out.empty()) throw ValidationError("family list is empty");
    return out;
}

FreezeOverride parse_freeze_flag(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) throw ValidationError("--freeze expects ID=ACTUAL, got '" + text + "'");
    FreezeOverride f;
    f.id = text.substr(0, eq);
    try {
        std::size_t used = 0;
        f.actual = std::stod(text.substr(eq + 1), &used);
        if (used != text.size() - eq - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw ValidationError("--freeze expects ID=ACTUAL, got '" + text + "'");
    }
    return f;
}

std::string default_result_path(const std::string& project_path) {
    fs::path p(project_path);
    p.replace_extension();
    return p.string() + ".result.json";
}

struct Options {
    // template
    std::string template_out;
    // simulate / whatif
    std::string project;
    std::size_t iterations = SimulationConfig{}.iterations;
    std::uint64_t seed = 1;
    std::size_t min_history = SimulationConfig{}.min_history_points;
    unsigned threads = 1;
    std::string history;
    std::string out;
    bool emit_samples = false;
    // report
    std::string result;
    std::string format;
    // freeze
    std::string item;
    double actual = 0.0;
    // whatif
    std::string before_file;
    std::string after_file;
    std::vector<std::string> freeze_flags;
    // history
    std::string store;
    std::string key;
    std::string project_name;
    std::string date;
    bool atypical = false;
    bool include_atypical = false;
    std::string families;
    std::string csv;
};

class Commands {
public:
    Commands(Options& o, std::ostream& out) : o_(o), out_(out) {}

    void template_cmd() {
        write_file(o_.template_out, serialize_project(default_template()));
        out_ << "wrote template to " << o_.template_out << "\n";
    }

    void simulate() {
        const Project project = load_project(o_.project);
        const SimulationResult result = run(project, config(), history(o_.history), run_options());
        const std::string path = o_.out.empty() ? default_result_path(o_.project) : o_.out;
        write_file(path, result_to_json(result, o_.emit_samples));
        out_ << summary_table(result.total, "Total project '" + result.project_name + "'");
        out_ << "wrote result to " << path << "\n";
    }

    void report() {
        const auto fmt = o_.format.empty() ? std::string("json") : o_.format;
        SimulationResult result;
        try {
            result = result_from_json(read_file(o_.result));
        } catch (const ParseError& e) {
            throw ParseError(o_.result + ": " + e.what());
        }
        const RiskReport report = risk_report(result);
        const std::string doc = fmt == "csv" ? risk_report_to_csv(report) : risk_report_to_json(report);
        if (o_.out.empty()) {
            out_ << doc;
        } else {
            write_file(o_.out, doc);
            out_ << risk_table(report);
            out_ << "wrote report to " << o_.out << "\n";
        }
    }

    void freeze_cmd() {
        const Project frozen = freeze(load_project(o_.project), o_.item, o_.actual);
        const std::string path = o_.out.empty() ? o_.project : o_.out;
        write_file(path, serialize_project(frozen));
        out_ << "froze " << o_.item << " at " << format_number(o_.actual) << "; wrote " << path << "\n";
    }

    void whatif() {
        const Project base = load_project(o_.project);
        Overrides before;
        Overrides after;
        if (!o_.before_file.empty()) before = parse_overrides(read_file(o_.before_file));
        if (!o_.after_file.empty()) after = parse_overrides(read_file(o_.after_file));
        for (const std::string& f : o_.freeze_flags) after.freeze.push_back(parse_freeze_flag(f));

        const HistoryStore store = history(o_.history);
        const SimulationConfig cfg = config();
        const SimulationResult r0 = run(apply_overrides(base, before), cfg, store, run_options());
        const SimulationResult r1 = run(apply_overrides(base, after), cfg, store, run_options());
        const RefinementReport report = compare(r0, r1);
        const std::string doc = o_.format == "json" ? comparison_to_json(report) : comparison_table(report);
        if (o_.out.empty()) {
            out_ << doc;
        } else {
            write_file(o_.out, doc);
            out_ << comparison_table(report) << "wrote comparison to " << o_.out << "\n";
        }
    }

    void history_add() {
        HistoryRecord record;
        record.project_name = o_.project_name;
        record.key = o_.key;
        record.actual = o_.actual;
        record.recorded_at = parse_date(o_.date);
        record.typical = !o_.atypical;
        const std::string path = store_path();
        const HistoryStore saved =
            update_history(path, [&](HistoryStore s) { return add_record(std::move(s), record); });
        out_ << "added " << normalize_key(o_.key) << " = " << format_number(o_.actual) << " (" << saved.size()
             << " records in " << path << ")\n";
    }

    void history_import() {
        const std::string doc = read_file(o_.csv);
        ImportReport report;
        const std::string path = store_path();
        update_history(path, [&](HistoryStore s) {
            ImportOutcome outcome = import_csv(std::move(s), doc);
            report = outcome.report;
            return std::move(outcome.store);
        });
        out_ << "imported " << report.imported << " row(s) into " << path << "\n";
        for (const RejectedRow& row : report.rejected) {
            out_ << "  rejected line " << row.line << ": " << row.reason << "\n";
        }
    }

    void history_fit() {
        const HistoryStore store = load_history(store_path());
        const std::vector<Family> families =
            o_.families.empty() ? std::vector<Family>(kAllFamilies.begin(), kAllFamilies.end())
                                : parse_families(o_.families);
        const std::vector<double> values = store.records_for(o_.key, o_.include_atypical);
        if (values.size() < kMinFitPoints) {
            throw InsufficientDataError("key '" + normalize_key(o_.key) + "' has " + std::to_string(values.size()) +
                                        " record(s); fitting needs at least " + std::to_string(kMinFitPoints));
        }
        const std::vector<FitResult> fits = best_fit(values, families);
        if (o_.format == "json") {
            out_ << fits_to_json(fits);
        } else {
            out_ << "Fits for '" << normalize_key(o_.key) << "' (" << values.size() << " records)\n"
                 << fits_table(fits);
        }
    }

    void history_list() {
        const HistoryStore store = load_history(store_path());
        std::vector<HistoryRecord> rows;
        for (const HistoryRecord& r : store.records()) {
            if (o_.key.empty() || r.key == normalize_key(o_.key)) rows.push_back(r);
        }
        out_ << history_to_json(rows);
    }

private:
    SimulationConfig config() const {
        return SimulationConfig{o_.iterations, o_.seed, o_.min_history};
    }

    RunOptions run_options() const {
        RunOptions r;
        r.threads = o_.threads;
        return r;
    }

    HistoryStore history(const std::string& flag) const {
        return load_history(flag.empty() ? default_history_path() : flag);
    }

    std::string store_path() const { return o_.store.empty() ? default_history_path() : o_.store; }

    Options& o_;
    std::ostream& out_;
};

}  // namespace

std::string default_history_path() {
    if (const char* env = std::getenv("DURASIM_HISTORY"); env && *env) return env;
    return "durasim-history.jsonl";
}

ExitStatus run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    Commands cmd(o, out);
    std::function<void()> action;

    CLI::App app{"durasim: Monte Carlo effort estimation over a work breakdown structure", "durasim"};
    app.require_subcommand(1);

    auto* tmpl = app.add_subcommand("template", "Write the default work breakdown structure");
    tmpl->add_option("output", o.template_out, "Project file to write")->required();
    tmpl->callback([&] { action = [&] { cmd.template_cmd(); }; });

    const auto add_sim_flags = [&](CLI::App* sub) {
        sub->add_option("project", o.project, "Project file")->required();
        sub->add_option("-n,--iterations", o.iterations, "Monte Carlo iterations")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("-s,--seed", o.seed, "Random seed")->capture_default_str();
        sub->add_option("--history", o.history, "History store (default $DURASIM_HISTORY)");
        sub->add_option("--min-history", o.min_history, "Records a historical estimate needs")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("-j,--threads", o.threads, "Worker threads (0 = all cores)")->capture_default_str();
    };

    auto* sim = app.add_subcommand("simulate", "Run the simulation and write a result file");
    add_sim_flags(sim);
    sim->add_option("-o,--out", o.out, "Result file (default <project>.result.json)");
    sim->add_flag("--emit-samples", o.emit_samples, "Include per-iteration totals in the result file");
    sim->callback([&] { action = [&] { cmd.simulate(); }; });

    auto* rep = app.add_subcommand("report", "Per-phase risk tables from a result file");
    rep->add_option("result", o.result, "Result file")->required();
    rep->add_option("-f,--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    rep->add_option("-o,--out", o.out, "Output file (default stdout)");
    rep->callback([&] { action = [&] { cmd.report(); }; });

    auto* frz = app.add_subcommand("freeze", "Mark a work package completed at its actual effort");
    frz->add_option("project", o.project, "Project file")->required();
    frz->add_option("id", o.item, "Work package id")->required();
    frz->add_option("actual", o.actual, "Actual effort")->required();
    frz->add_option("-o,--out", o.out, "Output file (default: rewrite the project file)");
    frz->callback([&] { action = [&] { cmd.freeze_cmd(); }; });

    auto* wif = app.add_subcommand("whatif", "Compare two scenarios of one project under a shared seed");
    add_sim_flags(wif);
    wif->add_option("--before", o.before_file, "Overrides applied to the baseline scenario");
    wif->add_option("--after", o.after_file, "Overrides applied to the alternative scenario");
    wif->add_option("--freeze", o.freeze_flags, "ID=ACTUAL freeze added to the alternative (repeatable)")
        ->expected(1)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    wif->add_option("-f,--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    wif->add_option("-o,--out", o.out, "Output file (default stdout)");
    wif->callback([&] { action = [&] { cmd.whatif(); }; });

    auto* hist = app.add_subcommand("history", "Manage the historical outcome store");
    hist->require_subcommand(1);
    hist->add_option("--store", o.store, "History store (default $DURASIM_HISTORY)");

    auto* hadd = hist->add_subcommand("add", "Append one actual outcome");
    hadd->add_option("--key", o.key, "Item or phase label")->required();
    hadd->add_option("--actual", o.actual, "Actual effort")->required();
    hadd->add_option("--project", o.project_name, "Project the outcome came from")->required();
    hadd->add_option("--date", o.date, "Recording date, YYYY-MM-DD")->required();
    hadd->add_flag("--atypical", o.atypical, "Mark the project atypical (excluded from fits by default)");
    hadd->add_option("--store", o.store, "History store (default $DURASIM_HISTORY)");
    hadd->callback([&] { action = [&] { cmd.history_add(); }; });

    auto* himp = hist->add_subcommand("import", "Import outcomes from CSV");
    himp->add_option("csv", o.csv, "CSV with header project_name,key,actual,recorded_at,typical")
        ->required();
    himp->add_option("--store", o.store, "History store (default $DURASIM_HISTORY)");
    himp->callback([&] { action = [&] { cmd.history_import(); }; });

    auto* hfit = hist->add_subcommand("fit", "Rank distribution fits for a key");
    hfit->add_option("key", o.key, "Item or phase label")->required();
    hfit->add_option("--families", o.families, "Comma-separated families (default all)");
    hfit->add_flag("--include-atypical", o.include_atypical, "Include atypical projects");
    hfit->add_option("-f,--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    hfit->add_option("--store", o.store, "History store (default $DURASIM_HISTORY)");
    hfit->callback([&] { action = [&] { cmd.history_fit(); }; });

    auto* hlist = hist->add_subcommand("list", "Print stored records as JSON");
    hlist->add_option("key", o.key, "Only records under this key");
    hlist->add_option("--store", o.store, "History store (default $DURASIM_HISTORY)");
    hlist->callback([&] { action = [&] { cmd.history_list(); }; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return ExitStatus::success;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return ExitStatus::success;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return ExitStatus::usage_error;
    }

    try {
        if (action) action();
        return ExitStatus::success;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return ExitStatus::domain_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return ExitStatus::domain_error;
    }
}

}  // namespace durasim::cli
