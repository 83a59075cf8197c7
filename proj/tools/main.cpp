#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vodsim/errors.hpp"
#include "vodsim/metrics.hpp"
#include "vodsim/report_io.hpp"
#include "vodsim/scenario_io.hpp"
#include "vodsim/sim.hpp"
#include "vodsim/sweep.hpp"

namespace {

using vodsim::Report;
using vodsim::Scenario;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw vodsim::ConfigError("cannot open output file: " + path);
  out << text;
  if (!out) throw vodsim::ConfigError("failed writing " + path);
}

void print_summary(const Report& r) {
  const auto& g = r.global;
  std::cout << "mode=" << vodsim::to_string(r.mode) << " seed=" << r.seed
            << " nodes=" << r.nodes.size() << " server_bytes=" << g.server_bytes
            << " peer_bytes=" << g.peer_bytes << " improvement=";
  if (g.improvement) {
    std::cout << *g.improvement;
  } else {
    std::cout << "n/a";
  }
  std::cout << " duration_s=" << g.duration_s
            << (g.truncated ? " (truncated)" : "") << '\n';
}

int cmd_run(const std::string& scenario_path, std::optional<std::uint64_t> seed,
            const std::string& out_path, const std::string& format) {
  Scenario scenario = vodsim::load_scenario(scenario_path);
  if (seed) scenario.seed = *seed;
  const Report report = vodsim::run(scenario);
  if (format == "csv") {
    write_text(out_path, vodsim::report_to_csv(report));
  } else {
    vodsim::write_report(report, out_path);
  }
  print_summary(report);
  std::cout << "report written to " << out_path << '\n';
  return 0;
}

int cmd_sweep(const std::string& scenario_path, const std::vector<std::uint32_t>& counts,
              std::uint32_t seeds, const std::string& out_path,
              const std::string& format, unsigned threads) {
  const Scenario base = vodsim::load_scenario(scenario_path);
  const vodsim::SweepResult result = vodsim::run_sweep(base, counts, seeds, threads);

  if (format == "csv") {
    write_text(out_path, vodsim::sweep_to_csv(result));
  } else {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["scenario"] = vodsim::scenario_to_json(base);
    j["rows"] = nlohmann::json::array();
    for (const auto& r : result.rows) {
      j["rows"].push_back({{"node_count", r.node_count},
                           {"seed", r.seed},
                           {"improvement", r.improvement},
                           {"mean_startup_s", r.mean_startup_s},
                           {"mean_stall_s", r.mean_stall_s},
                           {"truncated", r.truncated}});
    }
    j["by_count"] = nlohmann::json::array();
    for (const auto& m : result.by_count) {
      j["by_count"].push_back({{"node_count", m.node_count},
                               {"mean_improvement", m.mean_improvement},
                               {"mean_startup_s", m.mean_startup_s},
                               {"mean_stall_s", m.mean_stall_s}});
    }
    write_text(out_path, j.dump(2) + "\n");
  }

  for (const auto& m : result.by_count) {
    std::cout << "nodes=" << m.node_count
              << " mean_improvement=" << m.mean_improvement
              << " mean_startup_s=" << m.mean_startup_s
              << " mean_stall_s=" << m.mean_stall_s << '\n';
  }
  std::cout << "sweep written to " << out_path << '\n';
  return 0;
}

int cmd_compare(const std::string& scenario_path, std::optional<std::uint64_t> seed,
                const std::string& out_path) {
  Scenario scenario = vodsim::load_scenario(scenario_path);
  if (seed) scenario.seed = *seed;

  Scenario server_only = scenario;
  server_only.mode = vodsim::Mode::kServerOnly;
  Scenario p2p = scenario;
  p2p.mode = vodsim::Mode::kP2p;

  const Report a = vodsim::run(server_only);
  const Report b = vodsim::run(p2p);
  const vodsim::CompareSummary c = vodsim::compare(a, b);

  write_text(out_path, vodsim::compare_to_json(c, scenario).dump(2) + "\n");
  print_summary(a);
  print_summary(b);
  std::cout << "improvement delta=" << c.improvement_delta << '\n';
  std::cout << "comparison written to " << out_path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic simulator for server-coordinated P2P video-on-demand "
               "streaming over cellular and ad-hoc Wi-Fi"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::string format = "json";
  std::vector<std::uint32_t> counts;
  std::uint32_t seeds = 1;
  unsigned threads = 0;

  CLI::App* run_cmd = app.add_subcommand("run", "Run one scenario and write its report");
  run_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  run_cmd->add_option("--seed", seed, "Override the scenario seed");
  run_cmd->add_option("--out", out_path, "Output path")->default_val("report.json");
  run_cmd->add_option("--format", format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Run a node-count sweep and write the summary table");
  sweep_cmd->add_option("--scenario", scenario_path, "Base scenario JSON file")->required();
  sweep_cmd->add_option("--nodes", counts, "Comma-separated node counts")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--seeds", seeds, "Seeds per point")->default_val(1);
  sweep_cmd->add_option("--out", out_path, "Output path")->default_val("sweep.json");
  sweep_cmd->add_option("--format", format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  sweep_cmd->add_option("--threads", threads, "Worker threads (0 = auto)");

  CLI::App* compare_cmd = app.add_subcommand(
      "compare", "Run the scenario in server-only and p2p modes and diff the results");
  compare_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  compare_cmd->add_option("--seed", seed, "Override the scenario seed");
  compare_cmd->add_option("--out", out_path, "Output path")->default_val("compare.json");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(scenario_path, seed, out_path, format);
    if (sweep_cmd->parsed()) {
      return cmd_sweep(scenario_path, counts, seeds, out_path, format, threads);
    }
    if (compare_cmd->parsed()) return cmd_compare(scenario_path, seed, out_path);
  } catch (const vodsim::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const vodsim::ProtocolError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
