#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace durasim {

// Effort values are dimensionless "effort units" (person-days by convention).

struct PointValue {
    double value = 0.0;
    friend bool operator==(const PointValue&, const PointValue&) = default;
};

struct Normal {
    double mean = 0.0;
    double sd = 1.0;
    friend bool operator==(const Normal&, const Normal&) = default;
};

struct Triangular {
    double min = 0.0;
    double mode = 0.0;
    double max = 0.0;
    friend bool operator==(const Triangular&, const Triangular&) = default;
};

struct Uniform {
    double min = 0.0;
    double max = 1.0;
    friend bool operator==(const Uniform&, const Uniform&) = default;
};

struct Logistic {
    double location = 0.0;
    double scale = 1.0;
    friend bool operator==(const Logistic&, const Logistic&) = default;
};

/// One work package's effort model. Alternative order matches Family.
using Distribution = std::variant<PointValue, Normal, Triangular, Uniform, Logistic>;

enum class Family { point, normal, triangular, uniform, logistic };

inline constexpr std::array<Family, 5> kAllFamilies{
    Family::point, Family::normal, Family::triangular, Family::uniform, Family::logistic};

std::string_view family_name(Family family) noexcept;
std::optional<Family> parse_family(std::string_view name) noexcept;
/// Free parameters of the family; used to break goodness-of-fit ties.
int parameter_count(Family family) noexcept;

Family family_of(const Distribution& d) noexcept;

/// Every invariant the distribution breaks; empty means valid.
std::vector<std::string> validate(const Distribution& d);
bool is_valid(const Distribution& d) noexcept;

// The functions below throw ValidationError for an invalid distribution.

double mean(const Distribution& d);
double variance(const Distribution& d);

/// P(X <= x).
double cdf(const Distribution& d, double x);
/// P(X < x). Differs from cdf only at the atom of a PointValue.
double cdf_below(const Distribution& d, double x);

/// Smallest x with cdf(x) >= p. Normal and Logistic map 0 and 1 to -inf/+inf.
/// Throws ValidationError for p outside [0, 1].
double quantile(const Distribution& d, double p);

/// Inverse-transform draw: quantile(d, u) for a uniform variate u in [0, 1).
double sample(const Distribution& d, double u);

/// Closed support [lower, upper]; infinite bounds for unbounded families.
std::pair<double, double> support(const Distribution& d);

/// Short human-readable form, e.g. "Triangular{25, 50, 60}".
std::string describe(const Distribution& d);

/// Standard normal CDF and its inverse (rational approximation refined by one
/// Halley step; |relative error| well below 1e-12 on (0, 1)).
double standard_normal_cdf(double z) noexcept;
double standard_normal_quantile(double p) noexcept;

}  // namespace durasim
