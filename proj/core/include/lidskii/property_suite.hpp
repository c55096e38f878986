#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace lidskii {

enum class SuiteScale { small, medium };

SuiteScale parse_suite_scale(std::string_view text);
std::string to_string(SuiteScale s);

struct PropertyOutcome {
  std::string name;
  int instances = 0;
  int passed = 0;
  /// Smallest margin seen (tolerance minus error, or the majorization
  /// margin); pass/fail follows each property's own tolerance.
  double worst_margin = 0.0;
};

struct SuiteSummary {
  std::uint64_t seed = 0;
  SuiteScale scale = SuiteScale::small;
  std::vector<PropertyOutcome> properties;
  /// Schatten-4 descent runs whose converged points were checked for the
  /// Frobenius structure; recorded, never counted as failures.
  nlohmann::json findings;

  bool all_passed() const;
};

/// Runs every fuzzed invariant of the library. medium multiplies all
/// instance counts by 10. The summary holds no timings, so equal seeds give
/// byte-identical output.
SuiteSummary property_suite(std::uint64_t seed, SuiteScale scale);

nlohmann::json to_json(const SuiteSummary& s);

}  // namespace lidskii
