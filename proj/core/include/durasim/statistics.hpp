#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace durasim {

struct HistogramBin {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t count = 0;
    friend bool operator==(const HistogramBin&, const HistogramBin&) = default;
};

/// Summary of one output stream.
///
/// sd/variance use the n-1 denominator. skewness is g1 = m3 / m2^1.5 and
/// excess_kurtosis is g2 = m4 / m2^2 - 3, both from n-denominator central
/// moments (a normal distribution has excess kurtosis 0, a uniform -1.2).
/// Quartiles interpolate linearly between order statistics (Hyndman-Fan
/// type 7, the R/NumPy default). Zero-spread streams (minimum == maximum)
/// report sd 0 and no skewness/kurtosis.
struct SummaryStats {
    std::size_t count = 0;
    double mean = 0.0;
    double sd = 0.0;
    double variance = 0.0;
    double minimum = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double maximum = 0.0;
    double iqr = 0.0;
    std::optional<double> skewness;
    std::optional<double> excess_kurtosis;
    std::vector<HistogramBin> histogram;

    bool degenerate() const noexcept { return !skewness.has_value(); }
    friend bool operator==(const SummaryStats&, const SummaryStats&) = default;
};

/// Throws ValidationError for an empty sample list or bin_count == 0.
SummaryStats summarize(std::span<const double> samples, std::optional<std::size_t> bin_count = std::nullopt);

/// Equal-width bins over [min, max]; the maximum falls in the last bin.
/// Without bin_count, uses ceil(sqrt(n)) clamped to [10, 100]. A zero-width
/// range yields one unit-width bin centred on the value.
std::vector<HistogramBin> histogram(std::span<const double> samples,
                                    std::optional<std::size_t> bin_count = std::nullopt);

std::size_t auto_bin_count(std::size_t n) noexcept;

/// Type-7 quantile of already sorted data.
double sorted_quantile(std::span<const double> sorted, double p);

// Building blocks shared with streaming aggregation.

class HistogramLayout {
public:
    HistogramLayout(double minimum, double maximum, std::size_t bins);

    std::size_t size() const noexcept { return bins_; }
    std::size_t index_of(double x) const noexcept;
    std::vector<HistogramBin> with_counts(std::span<const std::size_t> counts) const;

private:
    double minimum_;
    double maximum_;
    double width_;
    std::size_t bins_;
};

/// Sums of powers of deviations from the mean: m_k = sum (x - mean)^k.
struct CentralSums {
    std::size_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;

    void add(double x) noexcept {
        const double d = x - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
};

struct Quartiles {
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
};

SummaryStats assemble_summary(const CentralSums& sums, double minimum, double maximum, const Quartiles& q,
                              std::vector<HistogramBin> bins);

// Risk ranking across phases.

struct PhaseStats {
    std::string name;
    SummaryStats stats;
};

struct RiskReport {
    std::vector<PhaseStats> phases;
    /// Ascending excess kurtosis: flattest (widest spread) first.
    std::vector<std::string> spread_ranking;
    /// Descending skewness: heaviest right tail (overrun-prone) first.
    std::vector<std::string> overrun_ranking;
    /// Zero-spread phases, in phase order; they rank last in both lists.
    std::vector<std::string> degenerate;
};

/// Ties break on larger IQR first, then phase order.
RiskReport rank_risks(std::vector<PhaseStats> per_phase);

}  // namespace durasim
