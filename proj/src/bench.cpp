#include "subsse/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "subsse/client.hpp"
#include "subsse/dictionary_index.hpp"
#include "subsse/index_builder.hpp"
#include "subsse/server.hpp"

namespace subsse::bench {

BenchConfig BenchConfig::from_json(const nlohmann::json& j) {
  BenchConfig c;
  try {
    c.dictionary_sizes = j.value("dictionary_sizes", c.dictionary_sizes);
    if (j.contains("keyword_lengths")) {
      const auto& k = j.at("keyword_lengths");
      c.keyword_lengths.min_len = k.value("min_len", c.keyword_lengths.min_len);
      c.keyword_lengths.max_len = k.value("max_len", c.keyword_lengths.max_len);
      c.keyword_lengths.geometric_p = k.value("geometric_p", c.keyword_lengths.geometric_p);
    }
    c.query_min_len = j.value("query_min_len", c.query_min_len);
    c.query_max_len = j.value("query_max_len", c.query_max_len);
    c.matched_keyword_targets = j.value("matched_keyword_targets", c.matched_keyword_targets);
    c.insert_lengths = j.value("insert_lengths", c.insert_lengths);
    c.insert_dictionary_size = j.value("insert_dictionary_size", c.insert_dictionary_size);
    c.repetitions = j.value("repetitions", c.repetitions);
    c.warmup = j.value("warmup", c.warmup);
    c.seed = j.value("seed", c.seed);
    c.over_wire = j.value("over_wire", c.over_wire);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ValidationError, std::string("bad bench config: ") + e.what());
  }
  if (c.repetitions < 30) throw Error(ErrorCode::ValidationError, "timing rows need at least 30 repetitions");
  if (c.keyword_lengths.min_len < 1 || c.keyword_lengths.max_len < c.keyword_lengths.min_len) {
    throw Error(ErrorCode::ValidationError, "bad keyword length range");
  }
  return c;
}

namespace {

std::string random_word(std::mt19937_64& rng, std::size_t len) {
  std::uniform_int_distribution<int> letter('a', 'z');
  std::string w(len, 'a');
  for (auto& c : w) c = static_cast<char>(letter(rng));
  return w;
}

// Client and server wired either in process or over loopback HTTP.
struct Rig {
  CloudServer server;
  ServerApi api{server};
  std::unique_ptr<HttpServer> http;
  std::thread http_thread;
  std::unique_ptr<UserClient> client;

  Rig(bool over_wire, std::uint64_t expected_nodes) {
    std::shared_ptr<Transport> transport;
    std::string url = "in-process";
    if (over_wire) {
      http = std::make_unique<HttpServer>(api, "127.0.0.1", 0);
      const int port = http->bind();
      http_thread = std::thread([this] { http->listen(); });
      http->wait_until_ready();
      url = "http://127.0.0.1:" + std::to_string(port);
      transport = std::make_shared<HttpTransport>(url);
    } else {
      transport = std::make_shared<InProcessTransport>(api);
    }
    ClientState state;
    state.keys = keygen(128, expected_nodes);
    state.server_url = url;
    client = std::make_unique<UserClient>(std::move(state), std::move(transport));
  }

  ~Rig() {
    if (http) {
      http->stop();
      http_thread.join();
    }
  }
};

std::size_t total_length(const std::vector<std::string>& words) {
  std::size_t n = 0;
  for (const auto& w : words) n += w.size();
  return n;
}

void push_summary(std::vector<Row>& rows, const std::string& phase, std::size_t m, std::size_t d_s, std::size_t len,
                  const Summary& s) {
  rows.push_back({phase, m, d_s, len, "mean", s.mean, "ms"});
  rows.push_back({phase, m, d_s, len, "stddev", s.stddev, "ms"});
  rows.push_back({phase, m, d_s, len, "samples", static_cast<double>(s.samples), "count"});
}

}  // namespace

std::vector<std::string> generate_dictionary(std::size_t m, std::uint64_t seed, const LengthDistribution& lengths) {
  std::mt19937_64 rng(seed);
  std::geometric_distribution<std::size_t> tail(lengths.geometric_p);
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  out.reserve(m);
  while (out.size() < m) {
    std::size_t len = 0;
    do {
      len = lengths.min_len + tail(rng);
    } while (len > lengths.max_len);
    std::string w = random_word(rng, len);
    if (seen.insert(w).second) out.push_back(std::move(w));
  }
  return out;
}

std::size_t count_matches(const std::vector<std::string>& dictionary, const std::string& substring) {
  return static_cast<std::size_t>(std::count_if(dictionary.begin(), dictionary.end(), [&](const std::string& w) {
    return w.find(substring) != std::string::npos;
  }));
}

std::vector<std::string> controlled_ds_queries(const std::vector<std::string>& dictionary, std::size_t target,
                                               std::size_t count, std::uint64_t seed, std::size_t min_len,
                                               std::size_t max_len) {
  if (target == 0) throw Error(ErrorCode::ValidationError, "queries must match at least one keyword");
  // Keyword count per distinct substring, each keyword counted once.
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& w : dictionary) {
    std::unordered_set<std::string_view> mine;
    for (std::size_t len = min_len; len <= max_len && len <= w.size(); ++len) {
      for (std::size_t i = 0; i + len <= w.size(); ++i) mine.insert(std::string_view(w).substr(i, len));
    }
    for (const auto sv : mine) ++counts[std::string(sv)];
  }
  std::vector<std::string> hits;
  for (const auto& [s, n] : counts) {
    if (n == target) hits.push_back(s);
  }
  if (hits.empty()) throw Error(ErrorCode::TargetUnachievable, "no substring matches exactly " + std::to_string(target));
  std::sort(hits.begin(), hits.end());
  std::mt19937_64 rng(seed);
  std::shuffle(hits.begin(), hits.end(), rng);
  if (hits.size() > count) hits.resize(count);
  return hits;
}

Summary time_ms(std::size_t warmup, std::size_t repetitions, const std::function<void(std::size_t)>& op) {
  using clock = std::chrono::steady_clock;
  for (std::size_t i = 0; i < warmup; ++i) op(i);
  std::vector<double> samples;
  samples.reserve(repetitions);
  for (std::size_t i = 0; i < repetitions; ++i) {
    const auto t0 = clock::now();
    op(warmup + i);
    samples.push_back(std::chrono::duration<double, std::milli>(clock::now() - t0).count());
  }
  Summary s;
  s.samples = samples.size();
  if (samples.empty()) return s;
  for (double x : samples) s.mean += x;
  s.mean /= static_cast<double>(samples.size());
  double var = 0;
  for (double x : samples) var += (x - s.mean) * (x - s.mean);
  s.stddev = samples.size() > 1 ? std::sqrt(var / static_cast<double>(samples.size() - 1)) : 0.0;
  return s;
}

std::vector<Row> run_suite(const BenchConfig& cfg) {
  std::vector<Row> rows;

  for (const std::size_t m : cfg.dictionary_sizes) {
    const auto dict = generate_dictionary(m, cfg.seed, cfg.keyword_lengths);
    const std::size_t nodes = 1 + total_length(dict);
    Rig rig(cfg.over_wire, nodes * 2);

    const Summary build = time_ms(cfg.warmup == 0 ? 0 : 1, cfg.repetitions,
                                  [&](std::size_t) { rig.client->outsource(dict, {}, {}); });
    push_summary(rows, "outsource_time", m, 0, 0, build);

    const KeyBundle& keys = rig.client->state().keys;
    const SecureIndex iw = encrypt_index(ModifiedPositionHeap::build(dict), keys);
    rows.push_back({"index_bytes", m, 0, 0, "iw_nodes", static_cast<double>(iw.node_count()), "count"});
    rows.push_back({"index_bytes", m, 0, 0, "iw_serialized", static_cast<double>(iw.to_json().dump().size()), "bytes"});

    for (const std::size_t target : cfg.matched_keyword_targets) {
      std::vector<std::string> queries;
      try {
        queries = controlled_ds_queries(dict, target, cfg.repetitions, cfg.seed + target, cfg.query_min_len,
                                        cfg.query_max_len);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::TargetUnachievable) throw;
        continue;
      }
      const Summary q = time_ms(cfg.warmup, cfg.repetitions, [&](std::size_t i) {
        const auto& s = queries[i % queries.size()];
        if (rig.client->suggest(s).size() != target) throw std::logic_error("controlled query returned wrong d_s");
      });
      push_summary(rows, "query_time", m, target, 0, q);
    }
  }

  if (!cfg.insert_lengths.empty()) {
    const auto dict = generate_dictionary(cfg.insert_dictionary_size, cfg.seed, cfg.keyword_lengths);
    Rig rig(cfg.over_wire, (1 + total_length(dict)) * 4);
    rig.client->outsource(dict, {}, {});
    std::mt19937_64 rng(cfg.seed ^ 0x5eed);
    for (const std::size_t z : cfg.insert_lengths) {
      std::vector<std::string> fresh;
      while (fresh.size() < cfg.warmup + cfg.repetitions) fresh.push_back(random_word(rng, z));
      const Summary ins =
          time_ms(cfg.warmup, cfg.repetitions, [&](std::size_t i) { rig.client->insert_keyword(fresh[i]); });
      push_summary(rows, "insert_time", cfg.insert_dictionary_size, 0, z, ins);
    }
  }
  return rows;
}

std::string to_csv(const std::vector<Row>& rows) {
  std::ostringstream out;
  out << "phase,m,d_s,keyword_len,metric,value,unit\n";
  out << std::setprecision(9);
  for (const auto& r : rows) {
    out << r.phase << ',' << r.m << ',' << r.d_s << ',' << r.keyword_len << ',' << r.metric << ',' << r.value << ','
        << r.unit << '\n';
  }
  return out.str();
}

}  // namespace subsse::bench
