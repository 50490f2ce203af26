#include "durasim/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "durasim/error.hpp"
#include "overloaded.hpp"

namespace durasim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using detail::Overloaded;

void require_valid(const Distribution& d) {
    if (!is_valid(d)) {
        throw ValidationError(describe(d), validate(d));
    }
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

std::string_view family_name(Family family) noexcept {
    switch (family) {
        case Family::point: return "point";
        case Family::normal: return "normal";
        case Family::triangular: return "triangular";
        case Family::uniform: return "uniform";
        case Family::logistic: return "logistic";
    }
    return "unknown";
}

std::optional<Family> parse_family(std::string_view name) noexcept {
    for (Family f : kAllFamilies) {
        if (family_name(f) == name) return f;
    }
    return std::nullopt;
}

int parameter_count(Family family) noexcept {
    switch (family) {
        case Family::point: return 1;
        case Family::triangular: return 3;
        default: return 2;
    }
}

Family family_of(const Distribution& d) noexcept {
    return static_cast<Family>(d.index());
}

std::vector<std::string> validate(const Distribution& d) {
    std::vector<std::string> out;
    std::visit(Overloaded{
                   [&](const PointValue& p) {
                       if (!finite(p.value)) out.emplace_back("value must be finite");
                   },
                   [&](const Normal& n) {
                       if (!finite(n.mean)) out.emplace_back("mean must be finite");
                       if (!(n.sd > 0.0) || !finite(n.sd)) out.emplace_back("sd > 0");
                   },
                   [&](const Triangular& t) {
                       if (!finite(t.min) || !finite(t.mode) || !finite(t.max)) {
                           out.emplace_back("parameters must be finite");
                           return;
                       }
                       if (!(t.min < t.max)) out.emplace_back("min < max");
                       if (!(t.min <= t.mode && t.mode <= t.max)) out.emplace_back("min <= mode <= max");
                   },
                   [&](const Uniform& u) {
                       if (!finite(u.min) || !finite(u.max)) {
                           out.emplace_back("parameters must be finite");
                           return;
                       }
                       if (!(u.min < u.max)) out.emplace_back("min < max");
                   },
                   [&](const Logistic& l) {
                       if (!finite(l.location)) out.emplace_back("location must be finite");
                       if (!(l.scale > 0.0) || !finite(l.scale)) out.emplace_back("scale > 0");
                   },
               },
               d);
    return out;
}

bool is_valid(const Distribution& d) noexcept {
    return std::visit(Overloaded{
                          [](const PointValue& p) { return finite(p.value); },
                          [](const Normal& n) { return finite(n.mean) && finite(n.sd) && n.sd > 0.0; },
                          [](const Triangular& t) {
                              return finite(t.min) && finite(t.max) && finite(t.mode) && t.min < t.max &&
                                     t.min <= t.mode && t.mode <= t.max;
                          },
                          [](const Uniform& u) { return finite(u.min) && finite(u.max) && u.min < u.max; },
                          [](const Logistic& l) {
                              return finite(l.location) && finite(l.scale) && l.scale > 0.0;
                          },
                      },
                      d);
}

double mean(const Distribution& d) {
    require_valid(d);
    return std::visit(Overloaded{
                          [](const PointValue& p) { return p.value; },
                          [](const Normal& n) { return n.mean; },
                          [](const Triangular& t) { return (t.min + t.mode + t.max) / 3.0; },
                          [](const Uniform& u) { return 0.5 * (u.min + u.max); },
                          [](const Logistic& l) { return l.location; },
                      },
                      d);
}

double variance(const Distribution& d) {
    require_valid(d);
    return std::visit(Overloaded{
                          [](const PointValue&) { return 0.0; },
                          [](const Normal& n) { return n.sd * n.sd; },
                          [](const Triangular& t) {
                              const double a = t.min, c = t.mode, b = t.max;
                              return (a * a + b * b + c * c - a * b - a * c - b * c) / 18.0;
                          },
                          [](const Uniform& u) {
                              const double w = u.max - u.min;
                              return w * w / 12.0;
                          },
                          [](const Logistic& l) {
                              return l.scale * l.scale * std::numbers::pi * std::numbers::pi / 3.0;
                          },
                      },
                      d);
}

double standard_normal_cdf(double z) noexcept {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double standard_normal_quantile(double p) noexcept {
    if (!(p > 0.0)) return p == 0.0 ? -kInf : std::numeric_limits<double>::quiet_NaN();
    if (!(p < 1.0)) return p == 1.0 ? kInf : std::numeric_limits<double>::quiet_NaN();
    // 1 - p is exact for p >= 0.5; refine in the lower tail where the CDF has full relative precision.
    if (p > 0.5) return -standard_normal_quantile(1.0 - p);

    // Acklam's rational approximation.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }

    // One Halley step against the erfc-based CDF.
    const double e = standard_normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

double cdf(const Distribution& d, double x) {
    require_valid(d);
    return std::visit(Overloaded{
                          [x](const PointValue& p) { return x >= p.value ? 1.0 : 0.0; },
                          [x](const Normal& n) { return standard_normal_cdf((x - n.mean) / n.sd); },
                          [x](const Triangular& t) {
                              const double a = t.min, c = t.mode, b = t.max;
                              if (x <= a) return 0.0;
                              if (x >= b) return 1.0;
                              if (x <= c) return (x - a) * (x - a) / ((b - a) * (c - a));
                              return 1.0 - (b - x) * (b - x) / ((b - a) * (b - c));
                          },
                          [x](const Uniform& u) {
                              if (x <= u.min) return 0.0;
                              if (x >= u.max) return 1.0;
                              return (x - u.min) / (u.max - u.min);
                          },
                          [x](const Logistic& l) {
                              return 1.0 / (1.0 + std::exp(-(x - l.location) / l.scale));
                          },
                      },
                      d);
}

double cdf_below(const Distribution& d, double x) {
    if (const auto* p = std::get_if<PointValue>(&d)) {
        require_valid(d);
        return x > p->value ? 1.0 : 0.0;
    }
    return cdf(d, x);
}

double quantile(const Distribution& d, double p) {
    require_valid(d);
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError("probability must lie in [0, 1], got " + std::to_string(p));
    }
    return std::visit(Overloaded{
                          [](const PointValue& pv) { return pv.value; },
                          [p](const Normal& n) { return n.mean + n.sd * standard_normal_quantile(p); },
                          [p](const Triangular& t) {
                              const double a = t.min, c = t.mode, b = t.max;
                              const double split = (c - a) / (b - a);
                              if (p < split) return a + std::sqrt(p * (b - a) * (c - a));
                              return b - std::sqrt((1.0 - p) * (b - a) * (b - c));
                          },
                          [p](const Uniform& u) { return u.min + p * (u.max - u.min); },
                          [p](const Logistic& l) {
                              if (p == 0.0) return -kInf;
                              if (p == 1.0) return kInf;
                              return l.location + l.scale * std::log(p / (1.0 - p));
                          },
                      },
                      d);
}

double sample(const Distribution& d, double u) {
    if (!(u >= 0.0 && u < 1.0)) {
        throw ValidationError("uniform variate must lie in [0, 1), got " + std::to_string(u));
    }
    return quantile(d, u);
}

std::pair<double, double> support(const Distribution& d) {
    require_valid(d);
    return std::visit(Overloaded{
                          [](const PointValue& p) { return std::pair{p.value, p.value}; },
                          [](const Normal&) { return std::pair{-kInf, kInf}; },
                          [](const Triangular& t) { return std::pair{t.min, t.max}; },
                          [](const Uniform& u) { return std::pair{u.min, u.max}; },
                          [](const Logistic&) { return std::pair{-kInf, kInf}; },
                      },
                      d);
}

std::string describe(const Distribution& d) {
    std::ostringstream os;
    os.precision(10);
    std::visit(Overloaded{
                   [&](const PointValue& p) { os << "PointValue{" << p.value << "}"; },
                   [&](const Normal& n) { os << "Normal{" << n.mean << ", " << n.sd << "}"; },
                   [&](const Triangular& t) {
                       os << "Triangular{" << t.min << ", " << t.mode << ", " << t.max << "}";
                   },
                   [&](const Uniform& u) { os << "Uniform{" << u.min << ", " << u.max << "}"; },
                   [&](const Logistic& l) { os << "Logistic{" << l.location << ", " << l.scale << "}"; },
               },
               d);
    return os.str();
}

}  // namespace durasim
