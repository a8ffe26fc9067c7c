#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "ugmt/descriptors.hpp"
#include "ugmt/harness.hpp"

using namespace ugmt;
using nlohmann::json;

namespace {

// Validator for the JSON Schema keywords used by report_schema().
class MiniValidator {
 public:
  explicit MiniValidator(json schema) : root_(std::move(schema)) {}

  std::vector<std::string> errors(const json& doc) const {
    std::vector<std::string> out;
    check(root_, doc, "$", out);
    return out;
  }

 private:
  const json& deref(const json& s) const {
    if (!s.contains("$ref")) return s;
    const std::string ref = s["$ref"];
    const std::string prefix = "#/$defs/";
    return root_["$defs"][ref.substr(prefix.size())];
  }

  static bool has_type(const json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "boolean") return v.is_boolean();
    if (t == "integer") return v.is_number_integer();
    if (t == "number") return v.is_number();
    return false;
  }

  void check(const json& schema, const json& v, const std::string& path, std::vector<std::string>& out) const {
    const json& s = deref(schema);
    if (s.contains("oneOf")) {
      int matches = 0;
      for (const auto& alt : s["oneOf"]) {
        std::vector<std::string> e;
        check(alt, v, path, e);
        if (e.empty()) ++matches;
      }
      if (matches != 1) out.push_back(path + ": oneOf matched " + std::to_string(matches));
    }
    if (s.contains("type") && !has_type(v, s["type"])) {
      out.push_back(path + ": expected " + s["type"].get<std::string>());
      return;
    }
    if (s.contains("const") && v != s["const"]) out.push_back(path + ": const mismatch");
    if (s.contains("enum") && std::find(s["enum"].begin(), s["enum"].end(), v) == s["enum"].end())
      out.push_back(path + ": not in enum");
    if (s.contains("minimum") && v.is_number() && v.get<double>() < s["minimum"].get<double>())
      out.push_back(path + ": below minimum");
    if (s.contains("maximum") && v.is_number() && v.get<double>() > s["maximum"].get<double>())
      out.push_back(path + ": above maximum");
    if (s.contains("minLength") && v.is_string() && v.get<std::string>().size() < s["minLength"].get<std::size_t>())
      out.push_back(path + ": too short");
    if (v.is_object()) {
      for (const auto& r : s.value("required", json::array()))
        if (!v.contains(r.get<std::string>())) out.push_back(path + ": missing " + r.get<std::string>());
      const json props = s.value("properties", json::object());
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (props.contains(it.key())) {
          check(props[it.key()], it.value(), path + "." + it.key(), out);
        } else if (s.contains("additionalProperties") && s["additionalProperties"] == false) {
          out.push_back(path + ": unexpected " + it.key());
        }
      }
    }
    if (v.is_array() && s.contains("items")) {
      for (std::size_t i = 0; i < v.size(); ++i) check(s["items"], v[i], path + "[" + std::to_string(i) + "]", out);
    }
  }

  json root_;
};

Report sample_report() {
  Report r;
  r.suite = "campbell";
  r.version = "1.0.0";
  r.seed = 7;
  r.samples = 0;
  r.workers = 1;
  r.timestamp = "2026-01-01T00:00:00Z";
  r.records.push_back({"a", "laplace_functional", 1, 1.25, 1.2, 0.02, "|value - target| <= 3 sigma", true, ""});
  r.records.push_back({"b", "de_giorgi_identity", 12, INFINITY, NAN, -INFINITY, "rule", false, "note, with comma"});
  r.series.push_back({"rho_vs_r", {"r", "rho"}, {{1.0, 0.5}, {2.0, NAN}}});
  return r;
}

std::filesystem::path temp_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("ugmt_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST(SuiteConfig, ParsesAllKeys) {
  const auto c = SuiteConfig::parse(
      "# comment\n"
      "suite = de-giorgi\n"
      "seed = 123\n"
      "samples = 5000   # trailing comment\n"
      "out = results\n"
      "battery = half_space\n"
      "battery = cosine_level_k3\n"
      "t_schedule = 0.001, 0.002,0.004\n"
      "r_schedule = 1, 2\n");
  EXPECT_EQ(c.suite, "de-giorgi");
  EXPECT_EQ(c.seed, 123u);
  EXPECT_TRUE(c.seed_set);
  EXPECT_EQ(c.samples, 5000u);
  EXPECT_EQ(c.out_dir, "results");
  EXPECT_EQ(c.batteries, (std::vector<std::string>{"half_space", "cosine_level_k3"}));
  EXPECT_EQ(c.t_schedule, (std::vector<double>{0.001, 0.002, 0.004}));
  EXPECT_EQ(c.r_schedule, (std::vector<double>{1.0, 2.0}));
  EXPECT_NO_THROW(c.validate());
}

TEST(SuiteConfig, TextRoundTrip) {
  auto c = SuiteConfig::parse("suite = coarea\nseed = 9\nbattery = cosine_star\n");
  const BatteryEntry custom{"my_star", "cylinder", "coarea_formula", BoxDomain::unit(1),
                            list_batteries().front().descriptor, "custom"};
  c.defined[custom.name] = custom;
  c.batteries.push_back(custom.name);
  const auto d = SuiteConfig::parse(c.to_text());
  EXPECT_EQ(d.to_text(), c.to_text());
  EXPECT_EQ(d.resolve("my_star"), custom);
}

TEST(SuiteConfig, RefusesTooFewSamples) {
  const auto c = SuiteConfig::parse("suite = campbell\nseed = 1\nsamples = 10\n");
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_THROW(run_suite(c), ConfigError);
}

TEST(SuiteConfig, RejectsInvalidInput) {
  EXPECT_THROW(SuiteConfig::parse("suite = campbell\nbogus = 1\n"), ConfigError);
  EXPECT_THROW(SuiteConfig::parse("no equals sign\n"), ConfigError);
  EXPECT_THROW(SuiteConfig::parse("seed = -4\n"), ConfigError);
  EXPECT_THROW(SuiteConfig::parse("suite = nope\nseed = 1\n").validate(), ConfigError);
  EXPECT_THROW(SuiteConfig::parse("suite = campbell\n").validate(), ConfigError);
  EXPECT_THROW(SuiteConfig::parse("suite = campbell\nseed = 1\nbattery = missing\n").validate(), ConfigError);
  EXPECT_THROW(SuiteConfig::parse("suite = campbell\nseed = 1\nt_schedule = 0.1, -1\n").validate(), ConfigError);
}

TEST(Catalog, EntriesAreUniqueAndParse) {
  std::set<std::string> names;
  for (const auto& e : list_batteries()) {
    EXPECT_TRUE(names.insert(e.name).second) << e.name;
    EXPECT_FALSE(e.anchor.empty());
    if (e.kind == "inner") EXPECT_NO_THROW(function_from_descriptor(e.descriptor));
    else if (e.kind == "cylinder") EXPECT_NO_THROW(cylinder_from_descriptor(e.descriptor));
    else if (e.kind == "set") EXPECT_NO_THROW(set_from_descriptor(e.descriptor));
    else if (e.kind == "field") EXPECT_NO_THROW(vector_field_from_descriptor(e.descriptor));
    else ADD_FAILURE() << "unknown kind " << e.kind;
    const auto c = SuiteConfig::parse(e.to_config_line() + "\n");
    EXPECT_EQ(c.resolve(e.name), e);
  }
  EXPECT_GE(names.size(), 20u);
}

TEST(Report, JsonRoundTripKeepsNonFiniteValues) {
  const Report r = sample_report();
  const Report s = Report::from_json(r.to_json());
  EXPECT_EQ(s.to_json(), r.to_json());
  EXPECT_TRUE(std::isinf(s.records[1].value));
  EXPECT_TRUE(std::isnan(s.records[1].target));
  EXPECT_FALSE(s.all_pass());
}

TEST(Report, NumericPayloadIgnoresEnvironment) {
  Report a = sample_report(), b = sample_report();
  b.timestamp = "2030-05-05T00:00:00Z";
  b.workers = 8;
  EXPECT_EQ(a.numeric_payload(), b.numeric_payload());
  b.records[0].value = 1.2500000001;
  EXPECT_NE(a.numeric_payload(), b.numeric_payload());
}

TEST(Report, ConformsToPublishedSchema) {
  const MiniValidator v(json::parse(report_schema()));
  const auto errs = v.errors(json::parse(sample_report().to_json()));
  EXPECT_TRUE(errs.empty()) << errs.front();
  json bad = json::parse(sample_report().to_json());
  bad["records"][0].erase("anchor");
  bad["records"][1]["value"] = "infinity";
  EXPECT_EQ(v.errors(bad).size(), 2u);
}

TEST(Report, WritesJsonCsvAndPlotData) {
  const auto dir = temp_dir("report");
  const auto written = write_report(sample_report(), dir.string());
  ASSERT_EQ(written.size(), 2u);
  for (const auto& p : written) EXPECT_TRUE(std::filesystem::exists(p));
  std::ifstream csv(dir / "campbell_summary.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "name,anchor,criterion,value,target,sigma,pass");
  const auto plots = emit_plot_data(sample_report(), dir.string());
  EXPECT_EQ(plots.size(), 2u);
  std::ifstream series(dir / "campbell_rho_vs_r.csv");
  std::stringstream ss;
  ss << series.rdbuf();
  EXPECT_EQ(ss.str(), "r,rho\n1,0.5\n2,nan\n");
  std::filesystem::remove_all(dir);
}

TEST(RunSuite, CampbellSmallRunIsDeterministicAndStamped) {
  auto c = SuiteConfig::parse("suite = campbell\nseed = 5\nsamples = 2000\nbattery = bump_a_1d\nbattery = half_space\n");
  const Report a = run_suite(c);
  const Report b = run_suite(c);
  EXPECT_EQ(a.numeric_payload(), b.numeric_payload());
  EXPECT_EQ(a.seed, 5u);
  EXPECT_GE(a.workers, 1u);
  EXPECT_FALSE(a.version.empty());
  const MiniValidator v(json::parse(report_schema()));
  EXPECT_TRUE(v.errors(json::parse(a.to_json())).empty());
  c.seed = 6;
  EXPECT_NE(run_suite(c).numeric_payload(), a.numeric_payload());
}
