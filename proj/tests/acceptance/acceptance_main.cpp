// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "subsse/bench.hpp"
#include "subsse/client.hpp"
#include "subsse/position_heap.hpp"
#include "subsse/server.hpp"
#include "test_util.hpp"

namespace {

using namespace subsse;
using Clock = std::chrono::steady_clock;
using testing::containing;
using testing::leaks;
using testing::random_string;

const std::vector<std::string> kWorked = {"bbab", "bba", "aba"};

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Server, router and a recording in-process transport wired to a client
// with fresh keys.
struct Rig {
  CloudServer server;
  ServerApi api{server};
  std::shared_ptr<RecordingTransport> wire;
  UserClient client;

  explicit Rig(bool tracing = false, bool record = true)
      : server(ServerOptions{{}, tracing}),
        wire(std::make_shared<RecordingTransport>(std::make_shared<InProcessTransport>(api))),
        client(make_state(), record ? std::shared_ptr<Transport>(wire) : std::make_shared<InProcessTransport>(api)) {}

  static ClientState make_state() {
    ClientState s;
    s.keys = keygen(128, std::uint64_t{1} << 24);
    s.server_url = "in-process";
    return s;
  }
};

template <typename T>
std::string join(const T& items) {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (const auto& x : items) {
    out << (first ? "" : ",") << x;
    first = false;
  }
  out << '}';
  return out.str();
}

Outcome heap_worked_example() {
  const auto t0 = Clock::now();
  const auto heap = PositionHeap::build("bbabbbaaba");
  const auto c = heap.search_candidates("bb");
  const auto found = heap.search("bb");
  const double secs = seconds_since(t0);
  const bool ok = c.l1 == std::vector<std::size_t>{9} && c.l2 == std::vector<std::size_t>{5, 1, 4} &&
                  found == std::set<std::size_t>{1, 4, 5} && secs < 1.0;
  return {ok, "L1=" + join(c.l1) + " L2=" + join(c.l2) + " search=" + join(found) + " in " +
                  std::to_string(secs * 1000) + " ms"};
}

Outcome dictionary_worked_example() {
  Rig rig;
  const auto stats = rig.client.outsource(kWorked, {}, {});
  const auto suggestions = rig.client.suggest_keywords("ab");
  const auto token = rig.client.make_query_token("ab");
  const auto raw = rig.wire->post("/v1/query/substring", wire::to_json(token).dump());
  const auto response = wire::substring_response_from_json(nlohmann::json::parse(raw.body));
  const std::size_t total =
      response.main.l1.size() + response.main.l2.size() + response.revoked.l1.size() + response.revoked.l2.size();
  const bool ok = stats.iw_nodes == 11 && suggestions == std::vector<std::string>{"aba", "bbab"} &&
                  response.main.l1.size() == 1 && response.main.l2.size() == 2 && total == 3;
  return {ok, "iw_nodes=" + std::to_string(stats.iw_nodes) + " suggest(ab)=" + join(suggestions) +
                  " l1=" + std::to_string(response.main.l1.size()) + " l2=" + std::to_string(response.main.l2.size()) +
                  " ciphertexts=" + std::to_string(total)};
}

Outcome insert_worked_example() {
  Rig rig;
  rig.client.outsource(kWorked, {}, {});
  rig.wire->clear();
  const auto before = rig.client.stats().iw_nodes;
  const std::size_t added = rig.client.insert_keyword("ba");
  const auto after = rig.client.stats().iw_nodes;

  std::size_t labels = 0;
  std::size_t ciphertexts = 0;
  for (const auto& m : rig.wire->messages()) {
    if (m.target != "/v1/update/keyword") continue;
    const auto update = wire::keyword_update_from_json(nlohmann::json::parse(m.body));
    labels += update.request.label_count();
    ciphertexts += update.request.enc_keyword.empty() ? 0 : 1;
  }
  const auto suggestions = rig.client.suggest_keywords("ba");
  const bool has_ba = std::find(suggestions.begin(), suggestions.end(), "ba") != suggestions.end();
  const bool ok = labels == 7 && ciphertexts == 1 && added == 2 && after - before == 2 && has_ba;
  return {ok, "labels=" + std::to_string(labels) + " ciphertexts=" + std::to_string(ciphertexts) +
                  " nodes_added=" + std::to_string(added) + " suggest(ba)=" + join(suggestions)};
}

struct CampaignResult {
  Outcome equivalence;
  Outcome privacy;
};

CampaignResult oracle_campaign() {
  constexpr int kTrials = 1000;
  const std::string abc = "abc";
  std::size_t queries = 0;
  std::size_t mismatches = 0;
  std::size_t leaked = 0;
  std::size_t scanned = 0;
  std::size_t min_short_queries = SIZE_MAX;
  std::string first_mismatch;
  const auto t0 = Clock::now();

  for (int trial = 0; trial < kTrials; ++trial) {
    std::mt19937_64 rng(0x5eed0000ULL + static_cast<std::uint64_t>(trial));
    // Planted values: long enough that no label or ciphertext encoding
    // contains them by chance.
    std::vector<std::string> planted;
    for (int i = 0; i < 4; ++i) planted.push_back(random_string(rng, 24, abc));
    const std::string content_secret = planted[3];

    auto dict = testing::random_dictionary(rng, 198, 1, 10, abc);
    dict.push_back(planted[0]);
    dict.push_back(planted[1]);
    std::shuffle(dict.begin(), dict.end(), rng);

    Rig rig;
    const std::vector<PlainFile> files = {
        {"f0", to_bytes("meeting notes " + content_secret)},
        {"f1", to_bytes("misc")},
    };
    rig.client.outsource(dict, {{planted[0], {"f0"}}, {dict.front(), {"f1"}}}, files);

    std::set<std::string> live(dict.begin(), dict.end());
    std::uniform_int_distribution<int> n_ins(0, 10);
    std::uniform_int_distribution<int> n_del(0, 5);
    std::uniform_int_distribution<int> n_q(20, 30);
    std::uniform_int_distribution<std::size_t> qlen(1, 6);
    std::uniform_int_distribution<std::size_t> wlen(1, 10);

    enum class Op { Insert, Delete, Query, PlantedQuery };
    std::vector<Op> ops;
    ops.insert(ops.end(), static_cast<std::size_t>(n_ins(rng)), Op::Insert);
    ops.insert(ops.end(), static_cast<std::size_t>(n_del(rng)), Op::Delete);
    const int short_queries = n_q(rng);
    ops.insert(ops.end(), static_cast<std::size_t>(short_queries), Op::Query);
    ops.insert(ops.end(), 2, Op::PlantedQuery);
    std::shuffle(ops.begin(), ops.end(), rng);
    min_short_queries = std::min(min_short_queries, static_cast<std::size_t>(short_queries));

    bool planted_insert_done = false;
    auto check = [&](const std::string& s) {
      const std::vector<std::string> live_vec(live.begin(), live.end());
      const auto expected = containing(live_vec, s);
      const auto got = rig.client.suggest_keywords(s);
      ++queries;
      if (got != std::vector<std::string>(expected.begin(), expected.end())) {
        if (mismatches++ == 0) {
          first_mismatch = "trial " + std::to_string(trial) + " query " + s + " got " + join(got) + " want " +
                           join(expected);
        }
      }
    };

    for (const Op op : ops) {
      switch (op) {
        case Op::Insert: {
          std::string w;
          if (!planted_insert_done) {
            w = planted[2];
            planted_insert_done = true;
          } else {
            do {
              w = random_string(rng, wlen(rng), abc);
            } while (live.count(w) != 0 || rig.client.state().revoked_keywords.count(w) != 0);
          }
          if (live.count(w) != 0 || rig.client.state().revoked_keywords.count(w) != 0) break;
          rig.client.insert_keyword(w);
          live.insert(w);
          break;
        }
        case Op::Delete: {
          if (live.empty()) break;
          auto it = live.begin();
          std::advance(it, static_cast<std::ptrdiff_t>(rng() % live.size()));
          rig.client.delete_keyword(*it);
          live.erase(it);
          break;
        }
        case Op::Query:
          check(random_string(rng, qlen(rng), abc));
          break;
        case Op::PlantedQuery: {
          const std::string& src = planted[rng() % 3];
          check(src.substr(rng() % 12, 12));
          break;
        }
      }
    }
    rig.client.files_for(planted[0]);
    rig.client.fetch_and_decrypt("f0");

    // Scan every outbound message for the planted values and for the
    // 12-symbol windows of planted keywords that queries may have used.
    std::vector<std::string> secrets = planted;
    for (int i = 0; i < 3; ++i) {
      for (std::size_t k = 0; k + 12 <= planted[i].size(); ++k) secrets.push_back(planted[i].substr(k, 12));
    }
    for (const auto& m : rig.wire->messages()) {
      ++scanned;
      const std::string bytes = m.target + '\n' + m.body;
      for (const auto& s : secrets) {
        if (leaks(bytes, s)) {
          ++leaked;
          break;
        }
      }
    }
  }

  const double secs = seconds_since(t0);
  CampaignResult r;
  r.equivalence.pass = mismatches == 0 && secs < 60.0 && min_short_queries >= 20;
  r.equivalence.detail = std::to_string(kTrials) + " trials, " + std::to_string(queries) + " queries, " +
                         std::to_string(mismatches) + " mismatches, " + std::to_string(secs) + " s";
  if (!first_mismatch.empty()) r.equivalence.detail += "; first: " + first_mismatch;
  r.privacy.pass = leaked == 0 && scanned > 0;
  r.privacy.detail = std::to_string(scanned) + " outbound messages scanned, " + std::to_string(leaked) + " with plaintext";
  return r;
}

Outcome node_count_law() {
  std::mt19937_64 rng(4242);
  std::size_t failures = 0;
  std::size_t largest = 0;
  for (int i = 0; i < 100; ++i) {
    std::vector<std::string> dict;
    if (i % 2 == 0) {
      dict = testing::random_dictionary(rng, 300, 1, 12, "abc");
    } else {
      dict = bench::generate_dictionary(1 + rng() % 3000, rng());
    }
    std::size_t total = 0;
    for (const auto& w : dict) total += w.size();
    Rig rig(false, false);
    const auto stats = rig.client.outsource(dict, {}, {});
    largest = std::max(largest, dict.size());
    if (stats.iw_nodes != 1 + total) ++failures;
  }
  return {failures == 0, "100 dictionaries (up to " + std::to_string(largest) + " keywords), " +
                             std::to_string(failures) + " violations"};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

Outcome scaling_shape() {
  const auto t0 = Clock::now();
  constexpr std::size_t kDs = 5;
  struct Setup {
    std::size_t m;
    std::unique_ptr<Rig> rig;
    std::vector<std::string> queries;
    std::vector<double> rounds;
  };
  std::vector<Setup> setups;
  for (const std::size_t m : {std::size_t{5000}, std::size_t{40000}}) {
    Setup s{m, std::make_unique<Rig>(false, false), {}, {}};
    const auto dict = bench::generate_dictionary(m, 1000 + m);
    s.rig->client.outsource(dict, {}, {});
    s.queries = bench::controlled_ds_queries(dict, kDs, 100, 7, 2, 6);
    setups.push_back(std::move(s));
  }
  bool counts_ok = true;
  for (auto& s : setups) {
    for (const auto& q : s.queries) counts_ok = counts_ok && s.rig->client.suggest(q).size() == kDs;  // also warms up
  }
  // Alternate between the two sizes so drift hits both equally.
  for (int round = 0; round < 40; ++round) {
    for (auto& s : setups) {
      const auto r0 = Clock::now();
      for (const auto& q : s.queries) s.rig->client.suggest(q);
      s.rounds.push_back(seconds_since(r0) * 1000.0 / static_cast<double>(s.queries.size()));
    }
  }
  const double small = median(setups[0].rounds);
  const double large = median(setups[1].rounds);
  const double ratio = large / small;
  const double secs = seconds_since(t0);
  char buf[256];
  std::snprintf(buf, sizeof(buf), "d_s=5 mean latency m=5000: %.4f ms, m=40000: %.4f ms, ratio %.2f (%zu/%zu queries), %.0f s",
                small, large, ratio, setups[0].queries.size(), setups[1].queries.size(), secs);
  return {counts_ok && ratio <= 2.0 && secs < 600 && !setups[0].queries.empty() && !setups[1].queries.empty(), buf};
}

Outcome insertion_scaling() {
  Rig rig(false, false);
  rig.client.outsource(bench::generate_dictionary(5000, 77), {}, {});
  std::mt19937_64 rng(99);
  const std::string letters = "abcdefghijklmnopqrstuvwxyz";
  std::vector<std::size_t> zs;
  for (std::size_t z = 2; z <= 20; ++z) zs.push_back(z);
  std::map<std::size_t, std::vector<double>> samples;
  constexpr int kBatch = 10;
  for (int round = 0; round < 42; ++round) {
    std::vector<std::size_t> order = zs;
    std::shuffle(order.begin(), order.end(), rng);
    for (const auto z : order) {
      std::vector<std::string> words;
      for (int i = 0; i < kBatch; ++i) words.push_back(random_string(rng, z, letters));
      const auto r0 = Clock::now();
      for (const auto& w : words) rig.client.insert_keyword(w);
      if (round >= 2) samples[z].push_back(seconds_since(r0) * 1000.0 / kBatch);  // first rounds warm up
    }
  }
  std::vector<double> x;
  std::vector<double> y;
  for (const auto z : zs) {
    x.push_back(static_cast<double>(z * (z + 5) / 2));
    y.push_back(median(samples[z]));
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0;
  double sxx = 0;
  double syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  const double r2 = syy == 0 ? 0 : (sxy * sxy) / (sxx * syy);
  char buf[256];
  std::snprintf(buf, sizeof(buf), "R^2=%.4f, slope %.5f ms/label, z=2: %.4f ms, z=20: %.4f ms", r2, slope, y.front(),
                y.back());
  return {r2 >= 0.9, buf};
}

Outcome leakage_determinism() {
  Rig rig(true);
  auto dict = kWorked;
  const auto extra = bench::generate_dictionary(500, 5);
  dict.insert(dict.end(), extra.begin(), extra.end());
  rig.client.outsource(dict, {}, {});

  auto traces_after = [&](const std::string& s) {
    const std::size_t since = rig.server.leakage_traces().size();
    rig.wire->clear();
    rig.client.suggest(s);
    std::vector<std::pair<std::string, std::vector<NodeId>>> paths;
    for (const auto& t : rig.server.leakage_traces(since)) {
      if (t.kind == TraceKind::QueryPath) paths.emplace_back(t.index, t.node_ids);
    }
    return std::make_pair(rig.wire->messages().at(0).body, paths);
  };

  bool ok = true;
  std::size_t checked = 0;
  for (const std::string s : {"ab", "bba", "e", "ing", "zq"}) {
    const auto a = traces_after(s);
    const auto b = traces_after(s);
    ok = ok && a.first == b.first && a.second == b.second && a.second.size() == 2;

    const auto c = traces_after(s + "a");
    const auto la = nlohmann::json::parse(a.first).at("tokens");
    const auto lc = nlohmann::json::parse(c.first).at("tokens");
    ok = ok && lc.size() == s.size() + 1 && std::equal(la.begin(), la.end(), lc.begin());
    // The longer query's walk starts with the shorter one's.
    const auto& pa = a.second.at(0).second;
    const auto& pc = c.second.at(0).second;
    ok = ok && pc.size() >= pa.size() && std::equal(pa.begin(), pa.end(), pc.begin());
    ++checked;
  }
  return {ok, std::to_string(checked) + " substrings: identical bodies and query_path traces on repeat, prefix labels shared"};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](const char* name, const Outcome& o) {
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
    failures += o.pass ? 0 : 1;
  };
  auto guarded = [&](const char* name, const std::function<Outcome()>& f) {
    try {
      report(name, f());
    } catch (const std::exception& e) {
      report(name, Outcome{false, std::string("exception: ") + e.what()});
    }
  };

  guarded("heap_worked_example", heap_worked_example);
  guarded("dictionary_index_worked_example", dictionary_worked_example);
  guarded("insert_worked_example", insert_worked_example);
  CampaignResult campaign;
  try {
    campaign = oracle_campaign();
  } catch (const std::exception& e) {
    campaign.equivalence = {false, std::string("exception: ") + e.what()};
    campaign.privacy = campaign.equivalence;
  }
  report("oracle_equivalence_campaign", campaign.equivalence);
  guarded("node_count_law", node_count_law);
  guarded("scaling_shape", scaling_shape);
  guarded("insertion_scaling", insertion_scaling);
  guarded("leakage_determinism", leakage_determinism);
  report("privacy_hygiene", campaign.privacy);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
