#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ugmt/box.hpp"

namespace ugmt {

/// Raised for invalid configurations: unknown suite or key, unresolvable
/// battery, sample counts below the minimum. The CLI maps it to exit code 2.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A named entry of the built-in battery catalog.
struct BatteryEntry {
  std::string name;
  /// "inner" (SmoothFunction), "cylinder", "set" or "field".
  std::string kind;
  /// Name of the result the entry exercises, e.g. "de_giorgi_identity".
  std::string anchor;
  BoxDomain window;
  /// JSON descriptor of the object (see descriptors.hpp).
  std::string descriptor;
  std::string note;

  /// One config line `define.<name> = {...}` that parses back to this entry.
  std::string to_config_line() const;
  bool operator==(const BatteryEntry&) const = default;
};

/// The built-in catalog.
const std::vector<BatteryEntry>& list_batteries();

/// Suite configuration read from flat `key = value` text.
///
/// Keys: suite, seed (required), samples, out, battery (repeatable; names
/// from the catalog or from define lines), define.<name> (inline battery as
/// a JSON object with kind, anchor, window, descriptor), t_schedule and
/// r_schedule (comma-separated). `#` starts a comment.
struct SuiteConfig {
  std::string suite;
  std::uint64_t seed = 0;
  bool seed_set = false;
  /// 0 keeps each check's default sample count.
  std::size_t samples = 0;
  std::string out_dir;
  std::vector<std::string> batteries;
  std::map<std::string, BatteryEntry> defined;
  std::vector<double> t_schedule;
  std::vector<double> r_schedule;

  static SuiteConfig parse(const std::string& text);
  static SuiteConfig from_file(const std::string& path);
  std::string to_text() const;

  /// Throws ConfigError unless the suite is known, the seed is explicit,
  /// samples is 0 or at least 100 and every battery resolves.
  void validate() const;
  /// Catalog or inline entry with the given name.
  BatteryEntry resolve(const std::string& name) const;
};

/// Names accepted by run_suite.
const std::vector<std::string>& suite_names();

/// Minimum Monte Carlo sample count accepted from a configuration.
inline constexpr std::size_t kMinSamples = 100;

struct CheckRecord {
  std::string name;
  std::string anchor;
  /// Acceptance criterion the check belongs to (1-17).
  int criterion = 0;
  double value = 0.0;
  double target = 0.0;
  double sigma = 0.0;
  /// Pass rule in words, e.g. "|value - target| <= 3 sigma".
  std::string rule;
  bool pass = false;
  std::string note;
};

/// A table for external plotting.
struct Series {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Report {
  static constexpr int kSchemaVersion = 1;
  std::string suite;
  std::string version;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::size_t workers = 0;
  std::string timestamp;
  std::vector<CheckRecord> records;
  std::vector<Series> series;

  bool all_pass() const;
  /// Deterministic JSON; only "timestamp" depends on the wall clock.
  std::string to_json() const;
  /// JSON without the timestamp and environment fields.
  std::string numeric_payload() const;
  static Report from_json(const std::string& text);
  /// One row per record: name,anchor,criterion,value,target,sigma,pass.
  std::string summary_csv() const;
};

/// Runs the configured suite. Throws ConfigError for invalid configs; a
/// numerical failure inside a check is recorded as a failing record.
Report run_suite(const SuiteConfig& config);

/// Writes report.json and summary.csv into out_dir (created if needed) and
/// returns the paths written.
std::vector<std::string> write_report(const Report& report, const std::string& out_dir);

/// Writes summary.csv and one CSV per series into dir; returns the paths.
std::vector<std::string> emit_plot_data(const Report& report, const std::string& dir);

/// JSON Schema (draft 2020-12) of the report format.
const std::string& report_schema();

}  // namespace ugmt
