#include "ugmt/harness.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "suites.hpp"
#include "ugmt/descriptors.hpp"
#include "ugmt/parallel.hpp"

#ifndef UGMT_VERSION
#define UGMT_VERSION "0.0.0"
#endif

namespace ugmt {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    double v = 0.0;
    const auto r = std::from_chars(item.data(), item.data() + item.size(), v);
    if (r.ec != std::errc() || r.ptr != item.data() + item.size()) {
      throw ConfigError("config: '" + key + "' expects comma-separated numbers, got '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("config: '" + key + "' is empty");
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  const auto r = std::from_chars(value.data(), value.data() + value.size(), v);
  if (r.ec != std::errc() || r.ptr != value.data() + value.size()) {
    throw ConfigError("config: '" + key + "' expects a nonnegative integer, got '" + value + "'");
  }
  return v;
}

json box_to_json(const BoxDomain& b) { return json::parse(to_descriptor(b)); }

BatteryEntry entry_from_json(const std::string& name, const json& j) {
  BatteryEntry e;
  e.name = name;
  try {
    e.kind = j.at("kind").get<std::string>();
    e.anchor = j.value("anchor", std::string("user_defined"));
    e.window = box_from_descriptor(j.at("window").dump());
    e.descriptor = j.at("descriptor").dump();
    e.note = j.value("note", std::string());
  } catch (const std::exception& ex) {
    throw ConfigError("config: battery '" + name + "': " + ex.what());
  }
  return e;
}

// Parses the descriptor according to the entry's kind; throws ConfigError.
void check_entry(const BatteryEntry& e) {
  try {
    if (e.kind == "inner") {
      (void)function_from_descriptor(e.descriptor);
    } else if (e.kind == "cylinder") {
      (void)cylinder_from_descriptor(e.descriptor);
    } else if (e.kind == "set") {
      (void)set_from_descriptor(e.descriptor);
    } else if (e.kind == "field") {
      (void)vector_field_from_descriptor(e.descriptor);
    } else {
      throw std::invalid_argument("unknown kind '" + e.kind + "'");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ConfigError("battery '" + e.name + "': " + ex.what());
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Non-finite numbers have no JSON literal; they are written as strings.
ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double read_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw std::invalid_argument("report: expected a number");
}

ordered_json records_json(const Report& r) {
  ordered_json recs = ordered_json::array();
  for (const auto& c : r.records) {
    recs.push_back({{"name", c.name},
                    {"anchor", c.anchor},
                    {"criterion", c.criterion},
                    {"value", number(c.value)},
                    {"target", number(c.target)},
                    {"sigma", number(c.sigma)},
                    {"rule", c.rule},
                    {"pass", c.pass},
                    {"note", c.note}});
  }
  return recs;
}

ordered_json series_json(const Report& r) {
  ordered_json out = ordered_json::array();
  for (const auto& s : r.series) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : s.rows) {
      ordered_json jr = ordered_json::array();
      for (double v : row) jr.push_back(number(v));
      rows.push_back(std::move(jr));
    }
    out.push_back({{"name", s.name}, {"columns", s.columns}, {"rows", std::move(rows)}});
  }
  return out;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
  if (!f) throw std::runtime_error("write failed: " + p.string());
}

}  // namespace

std::string BatteryEntry::to_config_line() const {
  ordered_json j = {{"kind", kind},
                    {"anchor", anchor},
                    {"window", box_to_json(window)},
                    {"descriptor", json::parse(descriptor)},
                    {"note", note}};
  return "define." + name + " = " + j.dump();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"campbell", "monotonicity", "intertwine",   "bakry-emery",
                                                 "tv-equivalence", "de-giorgi", "gauss-green", "coarea",
                                                 "sobolev",  "capacity"};
  return names;
}

SuiteConfig SuiteConfig::parse(const std::string& text) {
  SuiteConfig c;
  std::stringstream ss(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    // Inline JSON of define lines may contain '#'; other values end at one.
    if (key.rfind("define.", 0) != 0) value = trim(value.substr(0, value.find('#')));
    if (key == "suite") {
      c.suite = value;
    } else if (key == "seed") {
      c.seed = parse_u64(key, value);
      c.seed_set = true;
    } else if (key == "samples") {
      c.samples = parse_u64(key, value);
    } else if (key == "out") {
      c.out_dir = value;
    } else if (key == "battery") {
      c.batteries.push_back(value);
    } else if (key == "t_schedule") {
      c.t_schedule = parse_list(key, value);
    } else if (key == "r_schedule") {
      c.r_schedule = parse_list(key, value);
    } else if (key.rfind("define.", 0) == 0 && key.size() > 7) {
      const std::string name = key.substr(7);
      json j;
      try {
        j = json::parse(value);
      } catch (const json::exception& e) {
        throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
      }
      c.defined[name] = entry_from_json(name, j);
    } else {
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  return c;
}

SuiteConfig SuiteConfig::from_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

std::string SuiteConfig::to_text() const {
  std::ostringstream os;
  auto list = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
    return s;
  };
  if (!suite.empty()) os << "suite = " << suite << "\n";
  if (seed_set) os << "seed = " << seed << "\n";
  if (samples) os << "samples = " << samples << "\n";
  if (!out_dir.empty()) os << "out = " << out_dir << "\n";
  if (!t_schedule.empty()) os << "t_schedule = " << list(t_schedule) << "\n";
  if (!r_schedule.empty()) os << "r_schedule = " << list(r_schedule) << "\n";
  for (const auto& [name, e] : defined) os << e.to_config_line() << "\n";
  for (const auto& b : batteries) os << "battery = " << b << "\n";
  return os.str();
}

BatteryEntry SuiteConfig::resolve(const std::string& name) const {
  if (auto it = defined.find(name); it != defined.end()) return it->second;
  for (const auto& e : list_batteries()) {
    if (e.name == name) return e;
  }
  throw ConfigError("unresolvable battery '" + name + "'");
}

void SuiteConfig::validate() const {
  if (suite.empty()) throw ConfigError("config: no suite given");
  bool known = false;
  for (const auto& s : suite_names()) known = known || s == suite;
  if (!known) throw ConfigError("unknown suite '" + suite + "'");
  if (!seed_set) throw ConfigError("config: an explicit seed is required");
  if (samples != 0 && samples < kMinSamples) {
    throw ConfigError("config: samples = " + std::to_string(samples) + " is below the minimum of " +
                      std::to_string(kMinSamples));
  }
  for (const auto& [name, e] : defined) check_entry(e);
  for (const auto& b : batteries) check_entry(resolve(b));
  for (double t : t_schedule) {
    if (!(t > 0.0)) throw ConfigError("config: t_schedule entries must be positive");
  }
  for (double r : r_schedule) {
    if (!(r > 0.0)) throw ConfigError("config: r_schedule entries must be positive");
  }
}

bool Report::all_pass() const {
  for (const auto& r : records) {
    if (!r.pass) return false;
  }
  return true;
}

std::string Report::to_json() const {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["suite"] = suite;
  j["environment"] = {{"version", version},
                      {"seed", seed},
                      {"samples", samples},
                      {"workers", workers},
                      {"timestamp", timestamp}};
  j["pass"] = all_pass();
  j["records"] = records_json(*this);
  j["series"] = series_json(*this);
  return j.dump(2) + "\n";
}

std::string Report::numeric_payload() const {
  ordered_json j;
  j["suite"] = suite;
  j["records"] = records_json(*this);
  j["series"] = series_json(*this);
  return j.dump();
}

Report Report::from_json(const std::string& text) {
  Report r;
  try {
    const json j = json::parse(text);
    if (j.at("schema_version").get<int>() != kSchemaVersion) {
      throw std::invalid_argument("unsupported schema_version");
    }
    r.suite = j.at("suite").get<std::string>();
    const json& env = j.at("environment");
    r.version = env.at("version").get<std::string>();
    r.seed = env.at("seed").get<std::uint64_t>();
    r.samples = env.at("samples").get<std::size_t>();
    r.workers = env.at("workers").get<std::size_t>();
    r.timestamp = env.at("timestamp").get<std::string>();
    for (const json& c : j.at("records")) {
      CheckRecord rec;
      rec.name = c.at("name").get<std::string>();
      rec.anchor = c.at("anchor").get<std::string>();
      rec.criterion = c.at("criterion").get<int>();
      rec.value = read_number(c.at("value"));
      rec.target = read_number(c.at("target"));
      rec.sigma = read_number(c.at("sigma"));
      rec.rule = c.at("rule").get<std::string>();
      rec.pass = c.at("pass").get<bool>();
      rec.note = c.value("note", std::string());
      r.records.push_back(std::move(rec));
    }
    for (const json& s : j.at("series")) {
      Series ser;
      ser.name = s.at("name").get<std::string>();
      ser.columns = s.at("columns").get<std::vector<std::string>>();
      for (const json& row : s.at("rows")) {
        std::vector<double> vals;
        for (const json& v : row) vals.push_back(read_number(v));
        ser.rows.push_back(std::move(vals));
      }
      r.series.push_back(std::move(ser));
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("report: ") + e.what());
  }
  return r;
}

std::string Report::summary_csv() const {
  std::string out = "name,anchor,criterion,value,target,sigma,pass\n";
  for (const auto& c : records) {
    out += csv_escape(c.name) + "," + csv_escape(c.anchor) + "," + std::to_string(c.criterion) + "," +
           format_double(c.value) + "," + format_double(c.target) + "," + format_double(c.sigma) + "," +
           (c.pass ? "true" : "false") + "\n";
  }
  return out;
}

Report run_suite(const SuiteConfig& config) {
  config.validate();
  Report report;
  report.suite = config.suite;
  report.version = UGMT_VERSION;
  report.seed = config.seed;
  report.samples = config.samples;
  report.workers = worker_count();
  report.timestamp = utc_timestamp();
  SuiteContext ctx(config, report);
  run_named_suite(ctx);
  return report;
}

std::vector<std::string> write_report(const Report& report, const std::string& out_dir) {
  const std::filesystem::path dir(out_dir.empty() ? "." : out_dir);
  std::filesystem::create_directories(dir);
  const auto json_path = dir / (report.suite + "_report.json");
  const auto csv_path = dir / (report.suite + "_summary.csv");
  write_file(json_path, report.to_json());
  write_file(csv_path, report.summary_csv());
  return {json_path.string(), csv_path.string()};
}

std::vector<std::string> emit_plot_data(const Report& report, const std::string& dir) {
  const std::filesystem::path d(dir.empty() ? "." : dir);
  std::filesystem::create_directories(d);
  std::vector<std::string> paths;
  const std::string stem = report.suite.empty() ? "report" : report.suite;
  const auto summary = d / (stem + "_summary.csv");
  write_file(summary, report.summary_csv());
  paths.push_back(summary.string());
  for (const auto& s : report.series) {
    std::string text;
    for (std::size_t i = 0; i < s.columns.size(); ++i) text += (i ? "," : "") + csv_escape(s.columns[i]);
    text += "\n";
    for (const auto& row : s.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) text += (i ? "," : "") + format_double(row[i]);
      text += "\n";
    }
    const auto p = d / (stem + "_" + s.name + ".csv");
    write_file(p, text);
    paths.push_back(p.string());
  }
  return paths;
}

const std::string& report_schema() {
  static const std::string schema = R"({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "ugmt report",
  "type": "object",
  "required": ["schema_version", "suite", "environment", "pass", "records", "series"],
  "additionalProperties": false,
  "properties": {
    "schema_version": {"const": 1},
    "suite": {"type": "string"},
    "environment": {
      "type": "object",
      "required": ["version", "seed", "samples", "workers", "timestamp"],
      "additionalProperties": false,
      "properties": {
        "version": {"type": "string"},
        "seed": {"type": "integer", "minimum": 0},
        "samples": {"type": "integer", "minimum": 0},
        "workers": {"type": "integer", "minimum": 1},
        "timestamp": {"type": "string"}
      }
    },
    "pass": {"type": "boolean"},
    "records": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["name", "anchor", "criterion", "value", "target", "sigma", "rule", "pass", "note"],
        "additionalProperties": false,
        "properties": {
          "name": {"type": "string", "minLength": 1},
          "anchor": {"type": "string", "minLength": 1},
          "criterion": {"type": "integer", "minimum": 1, "maximum": 17},
          "value": {"$ref": "#/$defs/number"},
          "target": {"$ref": "#/$defs/number"},
          "sigma": {"$ref": "#/$defs/number"},
          "rule": {"type": "string"},
          "pass": {"type": "boolean"},
          "note": {"type": "string"}
        }
      }
    },
    "series": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["name", "columns", "rows"],
        "additionalProperties": false,
        "properties": {
          "name": {"type": "string"},
          "columns": {"type": "array", "items": {"type": "string"}},
          "rows": {"type": "array", "items": {"type": "array", "items": {"$ref": "#/$defs/number"}}}
        }
      }
    }
  },
  "$defs": {
    "number": {"oneOf": [{"type": "number"}, {"enum": ["inf", "-inf", "nan"]}]}
  }
}
)";
  return schema;
}

}  // namespace ugmt
