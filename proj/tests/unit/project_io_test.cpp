#include <gtest/gtest.h>

#include "durasim/error.hpp"
#include "durasim/project_io.hpp"
#include "test_support.hpp"

using namespace durasim;

namespace {

const char* kMinimal = R"({
  "name": "Demo",
  "phases": [
    {
      "name": "Design",
      "work_packages": [
        {
          "id": "A",
          "name": "Alpha",
          "status": "pending",
          "estimate": {
            "type": "uniform",
            "params": {
              "min": 30.0,
              "max": 100.0
            }
          }
        },
        {
          "id": "B",
          "name": "Beta",
          "status": "completed",
          "actual": 12.5,
          "estimate": {
            "type": "point",
            "params": {
              "value": 12.5
            }
          },
          "original_estimate": {
            "type": "triangular",
            "params": {
              "min": 5.0,
              "mode": 10.0,
              "max": 20.0
            }
          }
        },
        {
          "id": "C",
          "name": "Gamma",
          "status": "pending",
          "estimate": {
            "type": "historical",
            "key": "gamma",
            "families": [
              "normal",
              "logistic"
            ]
          }
        }
      ]
    }
  ]
}
)";

std::string replace(std::string s, const std::string& from, const std::string& to) {
    const auto at = s.find(from);
    EXPECT_NE(at, std::string::npos) << from;
    if (at != std::string::npos) s.replace(at, from.size(), to);
    return s;
}

template <typename E>
std::string message_of(const std::string& doc) {
    try {
        parse_project(doc);
    } catch (const E& e) {
        return e.what();
    }
    ADD_FAILURE() << "expected an exception";
    return {};
}

}  // namespace

TEST(ProjectIo, CanonicalDocumentRoundTripsByteForByte) {
    const Project p = parse_project(kMinimal);
    EXPECT_EQ(serialize_project(p), kMinimal);
    EXPECT_EQ(p.find("C")->estimate,
              (EstimateSpec{HistoricalEstimate{"gamma", {Family::normal, Family::logistic}}}));
    EXPECT_EQ(*p.find("B")->actual, 12.5);
}

TEST(ProjectIo, TemplateRoundTrips) {
    const Project t = default_template();
    const std::string once = serialize_project(t);
    EXPECT_EQ(parse_project(once), t);
    EXPECT_EQ(serialize_project(parse_project(once)), once);
    EXPECT_EQ(once.back(), '\n');
}

TEST(ProjectIo, FrozenProjectRoundTrips) {
    const Project p = freeze(freeze(default_template(), "CR", 44.25), "PS", 18);
    EXPECT_EQ(parse_project(serialize_project(p)), p);
}

TEST(ProjectIo, NonCanonicalInputNormalizes) {
    const std::string messy =
        R"({"phases":[{"work_packages":[{"estimate":{"params":{"max":2,"min":1},"type":"uniform"},"status":"pending","name":"N","id":"I"}],"name":"P"}],"name":"X"})";
    const Project p = parse_project(messy);
    const std::string canonical = serialize_project(p);
    EXPECT_EQ(serialize_project(parse_project(canonical)), canonical);
    EXPECT_LT(canonical.find("\"name\": \"X\""), canonical.find("\"phases\""));
}

TEST(ProjectIo, InvertedUniformNamesTheItem) {
    const std::string doc = replace(replace(kMinimal, "\"min\": 30.0", "\"min\": 100.0"), "\"max\": 100.0", "\"max\": 30.0");
    const std::string msg = message_of<ValidationError>(doc);
    EXPECT_NE(msg.find("item 'A'"), std::string::npos) << msg;
    EXPECT_NE(msg.find("min < max"), std::string::npos) << msg;
}

TEST(ProjectIo, TriangularModeOutsideRangeIsInvalid) {
    const std::string doc = replace(kMinimal, "\"mode\": 10.0", "\"mode\": 25.0");
    const std::string msg = message_of<ValidationError>(doc);
    EXPECT_NE(msg.find("item 'B'"), std::string::npos) << msg;
}

TEST(ProjectIo, DuplicateIdIsReported) {
    const std::string doc = replace(replace(kMinimal, "\"id\": \"A\"", "\"id\": \"CE\""), "\"id\": \"C\"", "\"id\": \"CE\"");
    const std::string msg = message_of<ValidationError>(doc);
    EXPECT_NE(msg.find("duplicate work package id 'CE'"), std::string::npos) << msg;
}

TEST(ProjectIo, UnknownFieldsCarryTheirLocation) {
    const std::string doc = replace(kMinimal, "\"name\": \"Alpha\",", "\"name\": \"Alpha\", \"colour\": \"red\",");
    const std::string msg = message_of<ParseError>(doc);
    EXPECT_NE(msg.find("/phases/0/work_packages/0"), std::string::npos) << msg;
    EXPECT_NE(msg.find("colour"), std::string::npos) << msg;
}

TEST(ProjectIo, TypeErrorsCarryTheirLocation) {
    const std::string msg = message_of<ParseError>(replace(kMinimal, "\"min\": 30.0", "\"min\": \"30\""));
    EXPECT_NE(msg.find("/phases/0/work_packages/0/estimate/params/min"), std::string::npos) << msg;
}

TEST(ProjectIo, SyntaxErrors) {
    EXPECT_THROW(parse_project("{\"name\": "), ParseError);
    EXPECT_THROW(parse_project(""), ParseError);
    EXPECT_THROW(parse_project("[]"), ParseError);
}

TEST(ProjectIo, StatusAndActualMustAgree) {
    EXPECT_THROW(parse_project(replace(kMinimal, "\"status\": \"completed\",", "\"status\": \"pending\",")), ParseError);
    EXPECT_THROW(parse_project(replace(kMinimal, "\"status\": \"completed\",", "\"status\": \"done\",")), ParseError);
}

TEST(ProjectIo, UnknownEstimateTypeAndFamily) {
    EXPECT_THROW(parse_project(replace(kMinimal, "\"type\": \"uniform\"", "\"type\": \"gamma\"")), ParseError);
    EXPECT_THROW(parse_project(replace(kMinimal, "\"logistic\"", "\"cauchy\"")), ParseError);
}

TEST(OverridesIo, RoundTrip) {
    const std::string doc = R"({"estimates": [{"id": "CR", "estimate": {"type": "normal", "params": {"mean": 60, "sd": 5}}}],
                               "freeze": [{"id": "RO", "actual": 14}]})";
    const Overrides o = parse_overrides(doc);
    ASSERT_EQ(o.estimates.size(), 1u);
    EXPECT_EQ(o.estimates[0].estimate, (EstimateSpec{ManualEstimate{Normal{60, 5}}}));
    ASSERT_EQ(o.freeze.size(), 1u);
    EXPECT_EQ(o.freeze[0].actual, 14.0);
    EXPECT_EQ(parse_overrides(serialize_overrides(o)), o);
    EXPECT_TRUE(parse_overrides("{}").empty());
    EXPECT_THROW(parse_overrides(R"({"freze": []})"), ParseError);
}
