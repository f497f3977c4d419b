#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "mtk/integer.hpp"
#include "mtk/tangent_iso.hpp"

namespace mtk {

inline constexpr const char* kToolVersion = "1.0.0";

enum class Suite { Theorem, Lemmas, All };
enum class OutputFormat { Text, Json };

struct RunConfig {
  std::string command;               // ring-info | compute | verify
  std::vector<std::string> rings;    // expanded catalog or the single --ring
  std::optional<std::string> catalog;
  std::size_t n = 1;
  std::string target;                // compute only
  std::string policy = "compact";    // compute --target omega only
  Suite suite = Suite::All;
  std::uint64_t seed = 42;
  std::size_t samples = 500;
  std::size_t generator_bound = kDefaultGeneratorBound;
  std::size_t carrier_cap = 0;
  OutputFormat format = OutputFormat::Text;
  std::optional<std::string> output;
  bool extended = false;
  std::size_t jobs = 1;

  /// Echo written into reports. Excludes jobs and output path, which do not affect content.
  nlohmann::ordered_json to_json() const;
};

const char* suite_name(Suite suite) noexcept;
Suite parse_suite(const std::string& text);

struct GroupSummary {
  std::vector<Integer> factors;
  std::size_t free_rank = 0;

  bool operator==(const GroupSummary&) const = default;
};

struct RingInfo {
  std::size_t size = 0;
  std::size_t units = 0;
  GroupSummary unit_group;
  std::int64_t characteristic = 0;
  bool has_half = false;

  bool operator==(const RingInfo&) const = default;
};

struct RingResult {
  std::string ring;
  std::optional<std::size_t> n;
  std::optional<RingInfo> info;
  std::map<int, bool> weak_stability;
  std::optional<std::map<int, bool>> full_stability;
  std::map<std::string, GroupSummary> groups;  // keys K, TK, Omega
  std::vector<LemmaVerdict> verdicts;
  double timing_ms = 0;
};

struct Report {
  std::string version = kToolVersion;
  nlohmann::ordered_json config;
  std::vector<RingResult> results;

  bool has_red_flag() const;
  nlohmann::ordered_json to_json() const;
  static Report from_json(const nlohmann::ordered_json& j);
  std::string to_text() const;
};

/// The rings behind "--catalog default".
const std::vector<std::string>& default_catalog();
/// Rings rerun at n = 2 under --extended.
const std::vector<std::string>& extended_catalog();

GroupSummary summarize(const FpAbelianGroup& group);

RingResult ring_info(const std::string& spec, std::size_t carrier_cap);
RingResult compute(const RunConfig& config, const std::string& spec);
/// One result per (ring, n) pair; catalog entries run on up to config.jobs threads and
/// come back in catalog order.
Report run(const RunConfig& config);

/// Drops every "timing_ms" key, recursively.
nlohmann::ordered_json strip_timings(nlohmann::ordered_json j);

}  // namespace mtk
