#include "durasim/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "durasim/error.hpp"

namespace durasim {

namespace {

constexpr double kSupportMargin = 1e-9;

struct SampleMoments {
    double mean = 0.0;
    double sd = 0.0;
    double min = 0.0;
    double max = 0.0;
};

SampleMoments moments_of(std::span<const double> data) {
    SampleMoments m;
    double sum = 0.0;
    for (double x : data) sum += x;
    m.mean = sum / static_cast<double>(data.size());
    double ss = 0.0;
    for (double x : data) ss += (x - m.mean) * (x - m.mean);
    m.sd = data.size() > 1 ? std::sqrt(ss / static_cast<double>(data.size() - 1)) : 0.0;
    const auto [lo, hi] = std::minmax_element(data.begin(), data.end());
    m.min = *lo;
    m.max = *hi;
    return m;
}

void require_points(std::span<const double> data) {
    if (data.size() < kMinFitPoints) {
        throw InsufficientDataError("fitting needs at least " + std::to_string(kMinFitPoints) +
                                    " data points, got " + std::to_string(data.size()));
    }
    for (double x : data) {
        if (!std::isfinite(x)) throw ValidationError("fit data must be finite");
    }
}

// Extends [lo, hi] so that every observation lies inside it.
std::pair<double, double> cover(double lo, double hi, const SampleMoments& m) {
    const double margin = kSupportMargin * std::max(hi - lo, m.max - m.min);
    if (m.min < lo) lo = m.min - margin;
    if (m.max > hi) hi = m.max + margin;
    return {lo, hi};
}

}  // namespace

Distribution fit_family(std::span<const double> data, Family family) {
    require_points(data);
    const SampleMoments m = moments_of(data);
    if (family != Family::point && !(m.max > m.min)) {
        throw ValidationError("zero-variance data admits only the point family, not " +
                              std::string(family_name(family)));
    }
    switch (family) {
        case Family::point: return PointValue{m.mean};
        case Family::normal: return Normal{m.mean, m.sd};
        case Family::uniform: {
            const double half = std::numbers::sqrt3 * m.sd;
            return Uniform{m.mean - half, m.mean + half};
        }
        case Family::triangular: {
            const double half = std::sqrt(6.0) * m.sd;
            return Triangular{m.mean - half, m.mean, m.mean + half};
        }
        case Family::logistic: return Logistic{m.mean, m.sd * std::numbers::sqrt3 / std::numbers::pi};
    }
    throw ValidationError("unknown distribution family");
}

double ks_statistic(std::span<const double> data, const Distribution& d) {
    if (data.empty()) throw InsufficientDataError("ks_statistic needs at least one data point");
    std::vector<double> sorted(data.begin(), data.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double above = static_cast<double>(i + 1) / n - cdf(d, sorted[i]);
        const double below = cdf_below(d, sorted[i]) - static_cast<double>(i) / n;
        worst = std::max({worst, above, below});
    }
    return std::clamp(worst, 0.0, 1.0);
}

std::vector<FitResult> best_fit(std::span<const double> data, std::span<const Family> families) {
    require_points(data);
    const SampleMoments m = moments_of(data);
    const bool degenerate = !(m.max > m.min);

    std::vector<Family> wanted(families.begin(), families.end());
    std::sort(wanted.begin(), wanted.end());
    wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());

    std::vector<FitResult> ranked;
    for (Family family : wanted) {
        if (degenerate && family != Family::point) continue;
        Distribution fitted = fit_family(data, family);
        if (auto* u = std::get_if<Uniform>(&fitted)) {
            std::tie(u->min, u->max) = cover(u->min, u->max, m);
        } else if (auto* t = std::get_if<Triangular>(&fitted)) {
            std::tie(t->min, t->max) = cover(t->min, t->max, m);
        }
        ranked.push_back({family, fitted, ks_statistic(data, fitted), data.size()});
    }
    if (ranked.empty()) {
        throw ValidationError("no feasible distribution family for the data (zero variance admits only point)");
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const FitResult& a, const FitResult& b) {
        if (a.ks_statistic != b.ks_statistic) return a.ks_statistic < b.ks_statistic;
        const int pa = parameter_count(a.family), pb = parameter_count(b.family);
        if (pa != pb) return pa < pb;
        return a.family < b.family;
    });
    return ranked;
}

}  // namespace durasim
