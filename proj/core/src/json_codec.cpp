#include "json_codec.hpp"

#include <cmath>

#include "overloaded.hpp"

namespace durasim::detail {

Json parse_document(std::string_view document, std::string_view what) {
    try {
        return Json::parse(document.begin(), document.end());
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string(what) + " is not valid JSON (byte " + std::to_string(e.byte) + "): " +
                         e.what());
    }
}

std::string dump_canonical(const Json& j) {
    return j.dump(2) + "\n";
}

std::string child_path(const std::string& parent, std::string_view key) {
    std::string out = parent + "/";
    for (char c : key) {
        if (c == '~') out += "~0";
        else if (c == '/') out += "~1";
        else out += c;
    }
    return out;
}

std::string child_path(const std::string& parent, std::size_t index) {
    return parent + "/" + std::to_string(index);
}

void fail(const std::string& path, const std::string& message) {
    throw ParseError("at " + (path.empty() ? std::string("/") : path) + ": " + message);
}

std::string expect_string(const Json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

double expect_number(const Json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "expected a finite number");
    return v;
}

const Json& expect_array(const Json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array");
    return j;
}

ObjectReader::ObjectReader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
}

bool ObjectReader::has(std::string_view key) const {
    return j_.find(std::string(key)) != j_.end();
}

const Json& ObjectReader::required(std::string_view key) {
    const auto it = j_.find(std::string(key));
    if (it == j_.end()) fail(path_, "missing required field '" + std::string(key) + "'");
    seen_.emplace(key);
    return *it;
}

const Json* ObjectReader::optional(std::string_view key) {
    const auto it = j_.find(std::string(key));
    if (it == j_.end()) return nullptr;
    seen_.emplace(key);
    return &*it;
}

std::string ObjectReader::string(std::string_view key) {
    return expect_string(required(key), child_path(path_, key));
}

double ObjectReader::number(std::string_view key) {
    return expect_number(required(key), child_path(path_, key));
}

bool ObjectReader::boolean(std::string_view key) {
    const Json& v = required(key);
    if (!v.is_boolean()) fail(child_path(path_, key), "expected true or false");
    return v.get<bool>();
}

void ObjectReader::finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
        if (!seen_.contains(it.key())) fail(child_path(path_, it.key()), "unknown field '" + it.key() + "'");
    }
}

Json distribution_to_json(const Distribution& d) {
    Json j;
    j["type"] = std::string(family_name(family_of(d)));
    Json params = Json::object();
    std::visit(Overloaded{
                   [&](const PointValue& p) { params["value"] = p.value; },
                   [&](const Normal& n) {
                       params["mean"] = n.mean;
                       params["sd"] = n.sd;
                   },
                   [&](const Triangular& t) {
                       params["min"] = t.min;
                       params["mode"] = t.mode;
                       params["max"] = t.max;
                   },
                   [&](const Uniform& u) {
                       params["min"] = u.min;
                       params["max"] = u.max;
                   },
                   [&](const Logistic& l) {
                       params["location"] = l.location;
                       params["scale"] = l.scale;
                   },
               },
               d);
    j["params"] = std::move(params);
    return j;
}

namespace {

Distribution distribution_params(Family family, const Json& params, const std::string& path) {
    ObjectReader r(params, path);
    Distribution d;
    switch (family) {
        case Family::point: d = PointValue{r.number("value")}; break;
        case Family::normal: {
            const double m = r.number("mean");
            d = Normal{m, r.number("sd")};
            break;
        }
        case Family::triangular: {
            const double lo = r.number("min");
            const double mode = r.number("mode");
            d = Triangular{lo, mode, r.number("max")};
            break;
        }
        case Family::uniform: {
            const double lo = r.number("min");
            d = Uniform{lo, r.number("max")};
            break;
        }
        case Family::logistic: {
            const double loc = r.number("location");
            d = Logistic{loc, r.number("scale")};
            break;
        }
    }
    r.finish();
    return d;
}

}  // namespace

Distribution distribution_from_json(const Json& j, const std::string& path) {
    ObjectReader r(j, path);
    const std::string type = r.string("type");
    const auto family = parse_family(type);
    if (!family) fail(child_path(path, "type"), "unknown distribution type '" + type + "'");
    Distribution d = distribution_params(*family, r.required("params"), child_path(path, "params"));
    r.finish();
    return d;
}

Json estimate_to_json(const EstimateSpec& spec) {
    return std::visit(Overloaded{
                          [](const ManualEstimate& m) { return distribution_to_json(m.distribution); },
                          [](const HistoricalEstimate& h) {
                              Json j;
                              j["type"] = "historical";
                              j["key"] = h.key;
                              if (!h.families.empty()) {
                                  Json fams = Json::array();
                                  for (Family f : h.families) fams.push_back(std::string(family_name(f)));
                                  j["families"] = std::move(fams);
                              }
                              return j;
                          },
                      },
                      spec);
}

EstimateSpec estimate_from_json(const Json& j, const std::string& path) {
    if (j.is_object()) {
        const auto it = j.find("type");
        if (it != j.end() && it->is_string() && it->get<std::string>() == "historical") {
            ObjectReader r(j, path);
            r.string("type");
            HistoricalEstimate h;
            h.key = r.string("key");
            if (const Json* fams = r.optional("families")) {
                const std::string fpath = child_path(path, "families");
                expect_array(*fams, fpath);
                for (std::size_t i = 0; i < fams->size(); ++i) {
                    const std::string name = expect_string((*fams)[i], child_path(fpath, i));
                    const auto f = parse_family(name);
                    if (!f) fail(child_path(fpath, i), "unknown distribution family '" + name + "'");
                    h.families.push_back(*f);
                }
            }
            r.finish();
            return h;
        }
    }
    return ManualEstimate{distribution_from_json(j, path)};
}

Json optional_number(const std::optional<double>& v) {
    return v ? Json(*v) : Json(nullptr);
}

Json stats_to_json(const SummaryStats& s) {
    Json j;
    j["count"] = s.count;
    j["mean"] = s.mean;
    j["sd"] = s.sd;
    j["variance"] = s.variance;
    j["minimum"] = s.minimum;
    j["q1"] = s.q1;
    j["median"] = s.median;
    j["q3"] = s.q3;
    j["maximum"] = s.maximum;
    j["iqr"] = s.iqr;
    j["skewness"] = optional_number(s.skewness);
    j["excess_kurtosis"] = optional_number(s.excess_kurtosis);
    Json bins = Json::array();
    for (const HistogramBin& b : s.histogram) {
        Json jb;
        jb["lower"] = b.lower;
        jb["upper"] = b.upper;
        jb["count"] = b.count;
        bins.push_back(std::move(jb));
    }
    j["histogram"] = std::move(bins);
    return j;
}

SummaryStats stats_from_json(const Json& j, const std::string& path) {
    ObjectReader r(j, path);
    SummaryStats s;
    const Json& count = r.required("count");
    if (!count.is_number_unsigned()) fail(child_path(path, "count"), "expected a non-negative integer");
    s.count = count.get<std::size_t>();
    s.mean = r.number("mean");
    s.sd = r.number("sd");
    s.variance = r.number("variance");
    s.minimum = r.number("minimum");
    s.q1 = r.number("q1");
    s.median = r.number("median");
    s.q3 = r.number("q3");
    s.maximum = r.number("maximum");
    s.iqr = r.number("iqr");
    for (auto [key, slot] : {std::pair{"skewness", &s.skewness}, std::pair{"excess_kurtosis", &s.excess_kurtosis}}) {
        const Json& v = r.required(key);
        if (!v.is_null()) *slot = expect_number(v, child_path(path, key));
    }
    const std::string hpath = child_path(path, "histogram");
    const Json& bins = expect_array(r.required("histogram"), hpath);
    for (std::size_t i = 0; i < bins.size(); ++i) {
        ObjectReader b(bins[i], child_path(hpath, i));
        HistogramBin bin;
        bin.lower = b.number("lower");
        bin.upper = b.number("upper");
        const Json& c = b.required("count");
        if (!c.is_number_unsigned()) fail(child_path(b.path(), "count"), "expected a non-negative integer");
        bin.count = c.get<std::size_t>();
        b.finish();
        s.histogram.push_back(bin);
    }
    r.finish();
    return s;
}

Json fit_to_json(const FitResult& fit) {
    Json j;
    j["family"] = std::string(family_name(fit.family));
    j["fitted"] = distribution_to_json(fit.fitted);
    j["ks_statistic"] = fit.ks_statistic;
    j["sample_count"] = fit.sample_count;
    return j;
}

}  // namespace durasim::detail
