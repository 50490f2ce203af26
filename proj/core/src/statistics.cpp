#include "durasim/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "durasim/error.hpp"

namespace durasim {

namespace {

std::vector<HistogramBin> histogram_of(std::span<const double> samples, double minimum, double maximum,
                                       std::optional<std::size_t> bin_count) {
    if (bin_count && *bin_count == 0) throw ValidationError("bin_count must be positive");
    const HistogramLayout layout(minimum, maximum, bin_count.value_or(auto_bin_count(samples.size())));
    std::vector<std::size_t> counts(layout.size(), 0);
    for (double x : samples) ++counts[layout.index_of(x)];
    return layout.with_counts(counts);
}

}  // namespace

std::size_t auto_bin_count(std::size_t n) noexcept {
    const auto root = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    return std::clamp<std::size_t>(root, 10, 100);
}

HistogramLayout::HistogramLayout(double minimum, double maximum, std::size_t bins)
    : minimum_(minimum), maximum_(maximum), width_(0.0), bins_(bins) {
    if (!(maximum_ > minimum_)) {
        bins_ = 1;
        minimum_ -= 0.5;
        maximum_ += 0.5;
    }
    width_ = (maximum_ - minimum_) / static_cast<double>(bins_);
}

std::size_t HistogramLayout::index_of(double x) const noexcept {
    const double pos = (x - minimum_) / width_;
    if (!(pos > 0.0)) return 0;
    return std::min(static_cast<std::size_t>(pos), bins_ - 1);
}

std::vector<HistogramBin> HistogramLayout::with_counts(std::span<const std::size_t> counts) const {
    std::vector<HistogramBin> out(bins_);
    for (std::size_t k = 0; k < bins_; ++k) {
        out[k].lower = minimum_ + static_cast<double>(k) * width_;
        out[k].upper = k + 1 == bins_ ? maximum_ : minimum_ + static_cast<double>(k + 1) * width_;
        out[k].count = k < counts.size() ? counts[k] : 0;
    }
    return out;
}

std::vector<HistogramBin> histogram(std::span<const double> samples, std::optional<std::size_t> bin_count) {
    if (samples.empty()) throw ValidationError("histogram needs at least one sample");
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
    return histogram_of(samples, *lo, *hi, bin_count);
}

double sorted_quantile(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw ValidationError("quantile of an empty sample");
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

SummaryStats assemble_summary(const CentralSums& sums, double minimum, double maximum, const Quartiles& q,
                              std::vector<HistogramBin> bins) {
    SummaryStats s;
    s.count = sums.count;
    s.mean = sums.mean;
    s.minimum = minimum;
    s.maximum = maximum;
    s.q1 = q.q1;
    s.median = q.median;
    s.q3 = q.q3;
    s.iqr = q.q3 - q.q1;
    s.histogram = std::move(bins);
    if (maximum > minimum && sums.count > 1 && sums.m2 > 0.0) {
        const double n = static_cast<double>(sums.count);
        s.variance = sums.m2 / (n - 1.0);
        s.sd = std::sqrt(s.variance);
        const double c2 = sums.m2 / n;
        s.skewness = (sums.m3 / n) / std::pow(c2, 1.5);
        s.excess_kurtosis = (sums.m4 / n) / (c2 * c2) - 3.0;
    }
    return s;
}

SummaryStats summarize(std::span<const double> samples, std::optional<std::size_t> bin_count) {
    if (samples.empty()) throw ValidationError("summarize needs at least one sample");

    CentralSums sums;
    sums.count = samples.size();
    sums.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
    for (double x : samples) sums.add(x);

    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double minimum = sorted.front();
    const double maximum = sorted.back();
    const Quartiles q{sorted_quantile(sorted, 0.25), sorted_quantile(sorted, 0.5), sorted_quantile(sorted, 0.75)};

    return assemble_summary(sums, minimum, maximum, q, histogram_of(samples, minimum, maximum, bin_count));
}

RiskReport rank_risks(std::vector<PhaseStats> per_phase) {
    RiskReport report;
    report.phases = std::move(per_phase);

    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < report.phases.size(); ++i) {
        if (report.phases[i].stats.degenerate()) {
            report.degenerate.push_back(report.phases[i].name);
        } else {
            live.push_back(i);
        }
    }

    const auto ranking = [&](auto key_less) {
        std::vector<std::size_t> order = live;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const SummaryStats& sa = report.phases[a].stats;
            const SummaryStats& sb = report.phases[b].stats;
            if (key_less(sa, sb)) return true;
            if (key_less(sb, sa)) return false;
            return sa.iqr > sb.iqr;
        });
        std::vector<std::string> names;
        for (std::size_t i : order) names.push_back(report.phases[i].name);
        names.insert(names.end(), report.degenerate.begin(), report.degenerate.end());
        return names;
    };

    report.spread_ranking = ranking([](const SummaryStats& a, const SummaryStats& b) {
        return *a.excess_kurtosis < *b.excess_kurtosis;
    });
    report.overrun_ranking = ranking([](const SummaryStats& a, const SummaryStats& b) {
        return *a.skewness > *b.skewness;
    });
    return report;
}

}  // namespace durasim
