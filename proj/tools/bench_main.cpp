#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "subsse/bench.hpp"
#include "subsse/types.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Desk-scale benchmark harness"};
  app.require_subcommand(1);
  auto* run = app.add_subcommand("run", "run the benchmark suite and write CSV");
  std::string config_path;
  std::string out_path = "results.csv";
  run->add_option("--config", config_path, "JSON config file (defaults apply when omitted)");
  run->add_option("--out", out_path, "CSV output path");
  CLI11_PARSE(app, argc, argv);

  try {
    nlohmann::json j = nlohmann::json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "cannot read " << config_path << '\n';
        return 1;
      }
      j = nlohmann::json::parse(in);
    }
    const auto cfg = subsse::bench::BenchConfig::from_json(j);
    const auto rows = subsse::bench::run_suite(cfg);
    std::ofstream out(out_path);
    out << subsse::bench::to_csv(rows);
    if (!out) {
      std::cerr << "cannot write " << out_path << '\n';
      return 2;
    }
    std::cout << rows.size() << " rows written to " << out_path << '\n';
  } catch (const subsse::Error& e) {
    std::cerr << e.what() << '\n';
    return e.code() == subsse::ErrorCode::ServerUnreachable ? 3 : 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "bad config: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
