#include "durasim/simulation.hpp"

#include <algorithm>
#include <limits>
#include <thread>

#include "durasim/error.hpp"
#include "durasim/fitting.hpp"
#include "durasim/rng.hpp"
#include "overloaded.hpp"

namespace durasim {

namespace {

constexpr std::size_t kStreamChunk = 1 << 16;

struct Plan {
    std::vector<Distribution> items;
    std::vector<std::vector<std::size_t>> phase_items;  // item indices per nonempty phase

    std::size_t streams() const noexcept { return items.size() + phase_items.size() + 1; }
};

unsigned worker_count(unsigned requested, std::size_t work) {
    unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(work, 1)));
}

// Fills out[s][k] for iterations first..first+count. Every cell depends only
// on (seed, iteration, item), so the split across workers cannot change it.
void fill_block(const Plan& plan, std::uint64_t seed, std::size_t first, std::size_t count,
                const std::vector<double*>& out, unsigned threads) {
    const std::size_t n_items = plan.items.size();
    const std::size_t n_phases = plan.phase_items.size();
    const auto work = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
            const std::uint64_t iteration = first + k;
            for (std::size_t j = 0; j < n_items; ++j) {
                out[j][k] = sample(plan.items[j], substream_uniform(seed, iteration, j));
            }
            double total = 0.0;
            for (std::size_t p = 0; p < n_phases; ++p) {
                double phase = 0.0;
                for (std::size_t j : plan.phase_items[p]) phase += out[j][k];
                out[n_items + p][k] = phase;
                total += phase;
            }
            out[n_items + n_phases][k] = total;
        }
    };

    const unsigned workers = worker_count(threads, count);
    if (workers <= 1) {
        work(0, count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t per = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = std::min(count, w * per);
        const std::size_t hi = std::min(count, lo + per);
        if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (auto& t : pool) t.join();
}

// Two-pass streaming summary: pass one fixes mean and range, pass two
// accumulates central moments, histogram counts and a quartile reservoir.
class StreamSummary {
public:
    StreamSummary(std::uint64_t seed, std::uint64_t stream, std::size_t reservoir_size)
        : engine_(seed, stream), reservoir_size_(reservoir_size) {}

    void first_pass(const double* x, std::size_t count) {
        for (std::size_t k = 0; k < count; ++k) {
            sum_ += x[k];
            min_ = std::min(min_, x[k]);
            max_ = std::max(max_, x[k]);
        }
        n_ += count;
    }

    void begin_second_pass() {
        sums_.count = n_;
        sums_.mean = sum_ / static_cast<double>(n_);
        layout_.emplace(min_, max_, auto_bin_count(n_));
        counts_.assign(layout_->size(), 0);
        reservoir_.reserve(std::min(reservoir_size_, n_));
    }

    void second_pass(const double* x, std::size_t count) {
        for (std::size_t k = 0; k < count; ++k) {
            sums_.add(x[k]);
            ++counts_[layout_->index_of(x[k])];
            if (seen_ < reservoir_size_) {
                reservoir_.push_back(x[k]);
            } else {
                const std::uint64_t slot = engine_() % (seen_ + 1);
                if (slot < reservoir_size_) reservoir_[slot] = x[k];
            }
            ++seen_;
        }
    }

    SummaryStats finish() {
        std::sort(reservoir_.begin(), reservoir_.end());
        const Quartiles q{sorted_quantile(reservoir_, 0.25), sorted_quantile(reservoir_, 0.5),
                          sorted_quantile(reservoir_, 0.75)};
        return assemble_summary(sums_, min_, max_, q, layout_->with_counts(counts_));
    }

private:
    CounterEngine engine_;
    std::size_t reservoir_size_;
    std::size_t n_ = 0;
    std::size_t seen_ = 0;
    double sum_ = 0.0;
    double min_ = std::numeric_limits<double>::infinity();
    double max_ = -std::numeric_limits<double>::infinity();
    CentralSums sums_;
    std::optional<HistogramLayout> layout_;
    std::vector<std::size_t> counts_;
    std::vector<double> reservoir_;
};

std::vector<SummaryStats> streamed_summaries(const Plan& plan, const SimulationConfig& config,
                                             const RunOptions& options) {
    const std::size_t streams = plan.streams();
    std::vector<StreamSummary> acc;
    acc.reserve(streams);
    for (std::size_t s = 0; s < streams; ++s) acc.emplace_back(config.seed, s, std::max<std::size_t>(options.reservoir_size, 1));

    std::vector<std::vector<double>> buffer(streams, std::vector<double>(kStreamChunk));
    std::vector<double*> out;
    for (auto& b : buffer) out.push_back(b.data());

    for (int pass = 0; pass < 2; ++pass) {
        if (pass == 1) {
            for (auto& a : acc) a.begin_second_pass();
        }
        for (std::size_t first = 0; first < config.iterations; first += kStreamChunk) {
            const std::size_t count = std::min(kStreamChunk, config.iterations - first);
            fill_block(plan, config.seed, first, count, out, options.threads);
            for (std::size_t s = 0; s < streams; ++s) {
                if (pass == 0) acc[s].first_pass(out[s], count);
                else acc[s].second_pass(out[s], count);
            }
        }
    }
    std::vector<SummaryStats> stats;
    for (auto& a : acc) stats.push_back(a.finish());
    return stats;
}

MetricChange change(std::optional<double> before, std::optional<double> after, bool has_direction,
                    bool lower_is_better) {
    MetricChange c{before, after, std::nullopt, std::nullopt};
    if (before && after) c.delta = *after - *before;
    if (!has_direction) return c;
    if (!c.delta) {
        c.verdict = Verdict::not_available;
    } else if (*c.delta == 0.0) {
        c.verdict = Verdict::unchanged;
    } else {
        c.verdict = (*c.delta < 0.0) == lower_is_better ? Verdict::improved : Verdict::worsened;
    }
    return c;
}

ScopeComparison compare_scope(std::string scope, const SummaryStats* before, const SummaryStats* after) {
    const auto get = [](const SummaryStats* s, auto field) -> std::optional<double> {
        if (!s) return std::nullopt;
        return field(*s);
    };
    const auto mean = [](const SummaryStats& s) -> std::optional<double> { return s.mean; };
    const auto sd = [](const SummaryStats& s) -> std::optional<double> { return s.sd; };
    const auto kurt = [](const SummaryStats& s) -> std::optional<double> { return s.excess_kurtosis; };
    const auto iqr = [](const SummaryStats& s) -> std::optional<double> { return s.iqr; };
    ScopeComparison c;
    c.scope = std::move(scope);
    c.mean = change(get(before, mean), get(after, mean), false, false);
    c.sd = change(get(before, sd), get(after, sd), true, true);
    c.excess_kurtosis = change(get(before, kurt), get(after, kurt), true, false);
    c.iqr = change(get(before, iqr), get(after, iqr), true, true);
    return c;
}

}  // namespace

const ItemResult* SimulationResult::item(std::string_view id) const noexcept {
    for (const ItemResult& r : items) {
        if (r.id == id) return &r;
    }
    return nullptr;
}

const PhaseResult* SimulationResult::phase(std::string_view name) const noexcept {
    for (const PhaseResult& r : phases) {
        if (r.name == name) return &r;
    }
    return nullptr;
}

Distribution resolve_estimate(const EstimateSpec& spec, const HistoryStore& history, std::size_t min_history_points) {
    return std::visit(detail::Overloaded{
                          [](const ManualEstimate& m) {
                              if (!is_valid(m.distribution)) {
                                  throw ValidationError(describe(m.distribution), validate(m.distribution));
                              }
                              return m.distribution;
                          },
                          [&](const HistoricalEstimate& h) {
                              const std::vector<double> values = history.records_for(h.key);
                              const std::size_t required = std::max(min_history_points, kMinFitPoints);
                              if (values.size() < required) {
                                  throw InsufficientHistoryError(normalize_key(h.key), values.size(), required);
                              }
                              const std::span<const Family> families =
                                  h.families.empty() ? std::span<const Family>(kAllFamilies)
                                                     : std::span<const Family>(h.families);
                              return best_fit(values, families).front().fitted;
                          },
                      },
                      spec);
}

SimulationResult run(const Project& project, const SimulationConfig& config, const HistoryStore& history,
                     const RunOptions& options) {
    require_valid(project);
    if (config.iterations == 0) throw ValidationError("iterations must be at least 1");

    SimulationResult result;
    result.project_name = project.name;
    result.config = config;

    Plan plan;
    std::vector<std::string> phase_names;
    for (const Phase& phase : project.phases) {
        if (phase.work_packages.empty()) continue;
        std::vector<std::size_t> members;
        for (const WorkPackage& wp : phase.work_packages) {
            Distribution d;
            try {
                d = resolve_estimate(wp.estimate, history, config.min_history_points);
            } catch (const InsufficientHistoryError& e) {
                throw InsufficientHistoryError(e.key(), e.found(), e.required(), wp.id);
            }
            members.push_back(plan.items.size());
            plan.items.push_back(d);
            result.items.push_back({wp.id, phase.name, d, {}});
        }
        plan.phase_items.push_back(std::move(members));
        phase_names.push_back(phase.name);
    }

    const std::size_t n_items = plan.items.size();
    const std::size_t n_phases = plan.phase_items.size();
    const std::size_t n = config.iterations;

    if (n <= options.retain_limit) {
        std::vector<std::vector<double>> samples(plan.streams(), std::vector<double>(n));
        std::vector<double*> out;
        for (auto& s : samples) out.push_back(s.data());
        fill_block(plan, config.seed, 0, n, out, options.threads);

        for (std::size_t j = 0; j < n_items; ++j) result.items[j].stats = summarize(samples[j]);
        for (std::size_t p = 0; p < n_phases; ++p) {
            result.phases.push_back({phase_names[p], summarize(samples[n_items + p])});
        }
        result.total = summarize(samples.back());
        result.total_samples = std::move(samples.back());
        if (options.retain_component_samples) {
            result.item_samples.assign(std::make_move_iterator(samples.begin()),
                                       std::make_move_iterator(samples.begin() + static_cast<std::ptrdiff_t>(n_items)));
            result.phase_samples.assign(
                std::make_move_iterator(samples.begin() + static_cast<std::ptrdiff_t>(n_items)),
                std::make_move_iterator(samples.begin() + static_cast<std::ptrdiff_t>(n_items + n_phases)));
        }
    } else {
        std::vector<SummaryStats> stats = streamed_summaries(plan, config, options);
        for (std::size_t j = 0; j < n_items; ++j) result.items[j].stats = std::move(stats[j]);
        for (std::size_t p = 0; p < n_phases; ++p) {
            result.phases.push_back({phase_names[p], std::move(stats[n_items + p])});
        }
        result.total = std::move(stats.back());
    }
    return result;
}

RiskReport risk_report(const SimulationResult& result) {
    std::vector<PhaseStats> phases;
    for (const PhaseResult& p : result.phases) phases.push_back({p.name, p.stats});
    return rank_risks(std::move(phases));
}

std::string_view verdict_name(Verdict v) noexcept {
    switch (v) {
        case Verdict::improved: return "improved";
        case Verdict::worsened: return "worsened";
        case Verdict::unchanged: return "unchanged";
        case Verdict::not_available: return "n/a";
    }
    return "n/a";
}

RefinementReport compare(const SimulationResult& before, const SimulationResult& after) {
    if (before.project_name != after.project_name) {
        throw ValidationError("cannot compare runs of different projects ('" + before.project_name + "' vs '" +
                              after.project_name + "')");
    }
    if (before.config.iterations != after.config.iterations) {
        throw ValidationError("cannot compare runs with different iteration counts (" +
                              std::to_string(before.config.iterations) + " vs " +
                              std::to_string(after.config.iterations) + ")");
    }
    RefinementReport report;
    report.project_name = before.project_name;
    report.iterations = before.config.iterations;
    report.total = compare_scope("total", &before.total, &after.total);
    for (const PhaseResult& p : before.phases) {
        const PhaseResult* other = after.phase(p.name);
        report.phases.push_back(compare_scope(p.name, &p.stats, other ? &other->stats : nullptr));
    }
    for (const PhaseResult& p : after.phases) {
        if (!before.phase(p.name)) report.phases.push_back(compare_scope(p.name, nullptr, &p.stats));
    }
    return report;
}

}  // namespace durasim
