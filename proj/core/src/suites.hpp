#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ugmt/harness.hpp"

namespace ugmt {

// Shared state of one suite run.
class SuiteContext {
 public:
  SuiteContext(const SuiteConfig& config, Report& report) : config_(config), report_(report) {}

  const SuiteConfig& config() const { return config_; }
  std::size_t samples(std::size_t fallback) const { return config_.samples ? config_.samples : fallback; }
  /// Seed for a named check, derived from the configured seed.
  std::uint64_t seed(const std::string& label) const;
  /// Batteries of the given kind listed in the config, or `defaults` when
  /// the config lists none of that kind.
  std::vector<BatteryEntry> batteries(const std::string& kind, const std::vector<std::string>& defaults) const;

  void add(CheckRecord record) { report_.records.push_back(std::move(record)); }
  void add(Series series) { report_.series.push_back(std::move(series)); }
  /// Runs body; an exception becomes a failing record with the message.
  void guarded(const std::string& name, const std::string& anchor, int criterion, const std::function<void()>& body);

 private:
  const SuiteConfig& config_;
  Report& report_;
};

void run_named_suite(SuiteContext& ctx);

}  // namespace ugmt
