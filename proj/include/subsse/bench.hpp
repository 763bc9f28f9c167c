#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

// Desk-scale experiment harness: index size and build time against
// dictionary size, query time against dictionary size and match count,
// insertion time against keyword length.
namespace subsse::bench {

struct LengthDistribution {
  std::size_t min_len = 2;
  std::size_t max_len = 20;
  /// Success probability of the geometric tail above min_len; draws past
  /// max_len are redrawn.
  double geometric_p = 0.3;
};

struct BenchConfig {
  std::vector<std::size_t> dictionary_sizes{5000, 40000};
  LengthDistribution keyword_lengths;
  /// Substring lengths considered when picking controlled-d_s queries.
  std::size_t query_min_len = 2;
  std::size_t query_max_len = 6;
  std::vector<std::size_t> matched_keyword_targets{5, 20};
  std::vector<std::size_t> insert_lengths{2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20};
  std::size_t insert_dictionary_size = 5000;
  std::size_t repetitions = 30;
  std::size_t warmup = 5;
  std::uint64_t seed = 1;
  /// Time through a loopback HTTP server instead of in process.
  bool over_wire = false;

  /// Missing fields keep their defaults. Throws ValidationError when
  /// repetitions < 30.
  static BenchConfig from_json(const nlohmann::json& j);
};

/// `m` distinct lowercase keywords, deterministic in `seed`.
std::vector<std::string> generate_dictionary(std::size_t m, std::uint64_t seed, const LengthDistribution& lengths = {});

/// Number of keywords in `dictionary` containing `substring`.
std::size_t count_matches(const std::vector<std::string>& dictionary, const std::string& substring);

/// Up to `count` distinct substrings (lengths in [min_len, max_len]) each
/// contained in exactly `target` keywords, shuffled by `seed`. Throws
/// ValidationError for target 0 and TargetUnachievable when none exist.
std::vector<std::string> controlled_ds_queries(const std::vector<std::string>& dictionary, std::size_t target,
                                               std::size_t count, std::uint64_t seed, std::size_t min_len = 1,
                                               std::size_t max_len = 6);

struct Row {
  std::string phase;
  std::size_t m = 0;
  std::size_t d_s = 0;
  std::size_t keyword_len = 0;
  std::string metric;
  double value = 0;
  std::string unit;
};

struct Summary {
  double mean = 0;
  double stddev = 0;
  std::size_t samples = 0;
};

/// Runs `op` warmup + repetitions times and summarizes the timed runs in
/// milliseconds. `op` receives the repetition index.
Summary time_ms(std::size_t warmup, std::size_t repetitions, const std::function<void(std::size_t)>& op);

std::vector<Row> run_suite(const BenchConfig& cfg);

/// Header "phase,m,d_s,keyword_len,metric,value,unit", one line per row.
std::string to_csv(const std::vector<Row>& rows);

}  // namespace subsse::bench
