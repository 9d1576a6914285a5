#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "case_studies.hpp"
#include "certain_trust/io.hpp"

using namespace ctm;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string schema_where(const std::string& text) {
  try {
    io::parse_scenario(text);
  } catch (const io::SchemaError& e) {
    return e.where();
  }
  return "<accepted>";
}

}  // namespace

TEST(Scenario, BundledFilesMatchEmbeddedText) {
  const std::string dir = CTM_SCENARIO_DIR;
  EXPECT_EQ(read_file(dir + "/case1.json"), cases::kCase1);
  EXPECT_EQ(read_file(dir + "/case1_s1.json"), cases::kCase1S1);
  EXPECT_EQ(read_file(dir + "/case1_s2.json"), cases::kCase1S2);
  EXPECT_EQ(read_file(dir + "/case1_s.json"), cases::kCase1S);
  EXPECT_EQ(read_file(dir + "/case2.json"), cases::kCase2);
}

TEST(Scenario, ParsesBothComponentForms) {
  const Scenario s = io::parse_scenario(
      R"({"formula": "A | B", "defaults": {"N": 10, "scale": 10},
          "components": {"A": {"r": 3, "s": 1}, "B": {"t": 0.4, "c": 0.2, "f": 0.7}}})");
  EXPECT_TRUE(std::holds_alternative<EvidenceComponent>(s.components.at("A")));
  EXPECT_EQ(std::get<DirectComponent>(s.components.at("B")).initial_expectation, 0.7);
  EXPECT_EQ(s.defaults.scale, 10);
  EXPECT_EQ(s.defaults.max_evidence, 10);
}

TEST(Scenario, SchemaErrorsPointAtTheProblem) {
  EXPECT_EQ(schema_where(R"({"formula": "A & Z", "components": {"A": {"t": 0.5, "c": 0.5}}})"), "/formula");
  EXPECT_EQ(schema_where(R"({"formula": "A", "components": {}})"), "/components");
  EXPECT_EQ(schema_where(R"({"formula": "A", "components": {"A": {"t": 0.5}}})"), "/components/A");
  EXPECT_EQ(schema_where(R"({"formula": "A", "components": {"A": {"t": 0.5, "c": 0.5, "r": 1}}})"),
            "/components/A");
  EXPECT_EQ(schema_where(R"({"formula": "A", "components": {"A": {"t": 0.5, "c": "x"}}})"), "/components/A/c");
  EXPECT_EQ(schema_where(R"({"formula": "A", "components": {"A": {"t": 0.5, "c": 0.5, "q": 1}}})"),
            "/components/A/q");
  EXPECT_EQ(schema_where(R"({"formula": "A", "extra": 1, "components": {"A": {"t": 0.5, "c": 0.5}}})"), "/extra");
  EXPECT_EQ(schema_where(R"({"formula": "A &", "components": {"A": {"t": 0.5, "c": 0.5}}})"), "/formula");
  EXPECT_EQ(schema_where(R"({"formula": "A", "components": {"1A": {"t": 0.5, "c": 0.5}}})"), "/components/1A");
  EXPECT_EQ(schema_where(R"({"formula": "A", "components": {"and": {"t": 0.5, "c": 0.5}}})"), "/components/and");
  EXPECT_EQ(schema_where(R"({"formula": "A", "defaults": {"w": 0}, "components": {"A": {"t": 0.5, "c": 0.5}}})"),
            "/defaults");
  EXPECT_EQ(schema_where("{\n  \"formula\": \"A\",\n  oops\n}"), "line 3, column 3");
  EXPECT_EQ(schema_where("[1, 2]"), "/");
}

TEST(Scenario, UnboundMessageNamesTheVariable) {
  try {
    io::parse_scenario(R"({"formula": "A & Zed", "components": {"A": {"t": 0.5, "c": 0.5}}})");
    FAIL();
  } catch (const io::SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("'Zed'"), std::string::npos);
  }
}

TEST(Report, JsonShape) {
  const SystemReport r = assess_system(io::parse_scenario(cases::kCase1));
  const io::Json j = io::report_json(r);
  EXPECT_EQ(j["formula"], "(A1 | A2) & (B1 | B2)");
  EXPECT_EQ(j["not_mode"], "paper");
  ASSERT_EQ(j["components"].size(), 4u);
  EXPECT_EQ(j["components"][0]["id"], "A1");
  EXPECT_EQ(j["components"][0]["source"], "direct");
  EXPECT_EQ(j["components"][0]["T"], 51.69);
  EXPECT_EQ(j["components"][0]["P"], 3.39);
  EXPECT_EQ(j["components"][0]["direction"], "higher");
  EXPECT_EQ(j["nodes"].size(), 7u);
  EXPECT_EQ(j["nodes"][6]["path"], "$");
  EXPECT_EQ(j["root"]["f"], 0.563);
  EXPECT_EQ(j["root"]["E"], 0.727);
}

TEST(Report, JsonIsStableAcrossRoundTrip) {
  const SystemReport r = assess_system(io::parse_scenario(cases::kCase1));
  const std::string once = io::report_json(r).dump(2);
  EXPECT_EQ(io::Json::parse(once).dump(2), once);
  EXPECT_EQ(io::report_json(assess_system(io::parse_scenario(cases::kCase1))).dump(2), once);
}

TEST(Report, NullsWhenBehaviorUndefined) {
  // Component with f = 0 inside an OR keeps the root well defined.
  const SystemReport r = assess_system(io::parse_scenario(
      R"({"formula": "A | B", "components": {"A": {"t": 0.5, "c": 0.5, "f": 0}, "B": {"t": 0.5, "c": 0.5}}})"));
  const io::Json j = io::report_json(r);
  EXPECT_TRUE(j["components"][0]["P"].is_null());
  EXPECT_FALSE(j["root"]["P"].is_null());
  EXPECT_NE(io::report_table(r).find(" - "), std::string::npos);
}

TEST(Report, CsvAndTableRows) {
  const SystemReport r = assess_system(io::parse_scenario(cases::kCase1));
  const std::string csv = io::report_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "system,t,c,f,E,T,class,P,direction,behavior");
  EXPECT_NE(csv.find("A1,0.714,0.724,0.500,0.655,51.69,average,3.39,higher,high\n"), std::string::npos);
  EXPECT_NE(csv.find("(A1 | A2) & (B1 | B2),"), std::string::npos);
  const std::string table = io::report_table(r);
  EXPECT_EQ(table.rfind("formula: (A1 | A2) & (B1 | B2)\n", 0), 0u);
  EXPECT_NE(table.find("63.64"), std::string::npos);
}

TEST(Format, Rounding) {
  EXPECT_EQ(io::fixed(-0.0001, 2), "0.00");
  EXPECT_EQ(io::fixed(51.6936, 2), "51.69");
  EXPECT_EQ(io::round_to(0.5625, 3), 0.563);
}
