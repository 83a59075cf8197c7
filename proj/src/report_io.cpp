#include "vodsim/report_io.hpp"

#include <fstream>
#include <sstream>

#include "vodsim/errors.hpp"
#include "vodsim/scenario_io.hpp"

namespace vodsim {

namespace {

using nlohmann::json;

json source_to_json(const PieceSource& s) {
  if (s.is_server()) return json("server");
  return json(s.peer);
}

PieceSource source_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "server") {
      throw ConfigError("transfer/decision source must be \"server\" or a node id");
    }
    return PieceSource::from_server();
  }
  return PieceSource::from_peer(j.get<NodeId>());
}

json opt_to_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<double> opt_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

json report_to_json(const Report& r) {
  json j;
  j["schema_version"] = r.schema_version;
  j["mode"] = to_string(r.mode);
  j["seed"] = r.seed;
  j["scenario"] = scenario_to_json(r.scenario);

  j["global"] = {{"server_bytes", r.global.server_bytes},
                 {"peer_bytes", r.global.peer_bytes},
                 {"improvement", opt_to_json(r.global.improvement)},
                 {"duration_s", r.global.duration_s},
                 {"truncated", r.global.truncated}};

  json nodes = json::array();
  for (const NodeStats& n : r.nodes) {
    nodes.push_back({{"node", n.node},
                     {"join_s", n.join_s},
                     {"bytes_from_server", n.bytes_from_server},
                     {"bytes_from_peers", n.bytes_from_peers},
                     {"startup_delay_s", opt_to_json(n.startup_delay_s)},
                     {"stall_count", n.stall_count},
                     {"stall_total_s", n.stall_total_s},
                     {"completed", n.completed},
                     {"completed_at_s", opt_to_json(n.completed_at_s)}});
  }
  j["nodes"] = nodes;

  json decisions = json::array();
  for (const ScheduleDecision& d : r.decisions) {
    json cands = json::array();
    for (const CandidateSnapshot& c : d.candidates) {
      cands.push_back({{"node", c.node},
                       {"rssi_dbm", c.rssi_dbm},
                       {"has_piece", c.has_piece},
                       {"schedulable", c.schedulable},
                       {"busy", c.busy},
                       {"rbt_s", c.rbt_s}});
    }
    decisions.push_back({{"at_s", d.at_s},
                         {"requester", d.requester},
                         {"piece", d.piece},
                         {"source", source_to_json(d.source)},
                         {"audit",
                          {{"neighbors", d.audit.neighbors},
                           {"have_piece", d.audit.have_piece},
                           {"trusted", d.audit.trusted},
                           {"rssi_ok", d.audit.rssi_ok},
                           {"idle", d.audit.idle}}},
                         {"chosen_rbt_s", d.chosen_rbt_s},
                         {"candidates", cands}});
  }
  j["decisions"] = decisions;

  json transfers = json::array();
  for (const TransferRecord& t : r.transfers) {
    transfers.push_back({{"id", t.id},
                         {"source", source_to_json(t.source)},
                         {"dest", t.dest},
                         {"piece", t.piece},
                         {"started_s", t.started_s},
                         {"finished_s", t.finished_s},
                         {"rate_bps", t.rate_bps},
                         {"bytes", t.bytes}});
  }
  j["transfers"] = transfers;
  return j;
}

Report report_from_json(const json& j) {
  try {
    Report r;
    r.schema_version = j.at("schema_version").get<std::uint32_t>();
    r.mode = mode_from_string(j.at("mode").get<std::string>());
    r.seed = j.at("seed").get<std::uint64_t>();
    r.scenario = scenario_from_json(j.at("scenario"));

    const json& g = j.at("global");
    r.global.server_bytes = g.at("server_bytes").get<std::uint64_t>();
    r.global.peer_bytes = g.at("peer_bytes").get<std::uint64_t>();
    r.global.improvement = opt_from_json(g.at("improvement"));
    r.global.duration_s = g.at("duration_s").get<double>();
    r.global.truncated = g.at("truncated").get<bool>();

    for (const json& n : j.at("nodes")) {
      NodeStats ns;
      ns.node = n.at("node").get<NodeId>();
      ns.join_s = n.at("join_s").get<double>();
      ns.bytes_from_server = n.at("bytes_from_server").get<std::uint64_t>();
      ns.bytes_from_peers = n.at("bytes_from_peers").get<std::uint64_t>();
      ns.startup_delay_s = opt_from_json(n.at("startup_delay_s"));
      ns.stall_count = n.at("stall_count").get<std::uint32_t>();
      ns.stall_total_s = n.at("stall_total_s").get<double>();
      ns.completed = n.at("completed").get<bool>();
      ns.completed_at_s = opt_from_json(n.at("completed_at_s"));
      r.nodes.push_back(ns);
    }

    for (const json& d : j.at("decisions")) {
      ScheduleDecision sd;
      sd.at_s = d.at("at_s").get<double>();
      sd.requester = d.at("requester").get<NodeId>();
      sd.piece = d.at("piece").get<PieceId>();
      sd.source = source_from_json(d.at("source"));
      const json& a = d.at("audit");
      sd.audit.neighbors = a.at("neighbors").get<std::uint32_t>();
      sd.audit.have_piece = a.at("have_piece").get<std::uint32_t>();
      sd.audit.trusted = a.at("trusted").get<std::uint32_t>();
      sd.audit.rssi_ok = a.at("rssi_ok").get<std::uint32_t>();
      sd.audit.idle = a.at("idle").get<std::uint32_t>();
      sd.chosen_rbt_s = d.at("chosen_rbt_s").get<double>();
      for (const json& c : d.at("candidates")) {
        CandidateSnapshot cs;
        cs.node = c.at("node").get<NodeId>();
        cs.rssi_dbm = c.at("rssi_dbm").get<double>();
        cs.has_piece = c.at("has_piece").get<bool>();
        cs.schedulable = c.at("schedulable").get<bool>();
        cs.busy = c.at("busy").get<bool>();
        cs.rbt_s = c.at("rbt_s").get<double>();
        sd.candidates.push_back(cs);
      }
      r.decisions.push_back(std::move(sd));
    }

    for (const json& t : j.at("transfers")) {
      TransferRecord tr;
      tr.id = t.at("id").get<std::uint64_t>();
      tr.source = source_from_json(t.at("source"));
      tr.dest = t.at("dest").get<NodeId>();
      tr.piece = t.at("piece").get<PieceId>();
      tr.started_s = t.at("started_s").get<double>();
      tr.finished_s = t.at("finished_s").get<double>();
      tr.rate_bps = t.at("rate_bps").get<double>();
      tr.bytes = t.at("bytes").get<std::uint64_t>();
      r.transfers.push_back(tr);
    }
    return r;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
}

void write_report(const Report& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << report_to_json(report).dump(2) << '\n';
  if (!out) throw ConfigError("failed writing report to " + path);
}

Report read_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open report file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("report file " + path + " is not valid JSON: " + e.what());
  }
  return report_from_json(j);
}

std::string report_to_csv(const Report& r) {
  std::ostringstream out;
  out << "node,join_s,bytes_from_server,bytes_from_peers,startup_delay_s,"
         "stall_count,stall_total_s,completed\n";
  for (const NodeStats& n : r.nodes) {
    out << n.node << ',' << n.join_s << ',' << n.bytes_from_server << ','
        << n.bytes_from_peers << ',';
    if (n.startup_delay_s) out << *n.startup_delay_s;
    out << ',' << n.stall_count << ',' << n.stall_total_s << ','
        << (n.completed ? 1 : 0) << '\n';
  }
  return out.str();
}

nlohmann::json compare_to_json(const CompareSummary& c, const Scenario& scenario) {
  auto side = [](const RunSummary& s) {
    return json{{"mode", to_string(s.mode)},
                {"seed", s.seed},
                {"server_bytes", s.server_bytes},
                {"peer_bytes", s.peer_bytes},
                {"improvement", s.improvement ? json(*s.improvement) : json(nullptr)},
                {"mean_startup_s", s.mean_startup_s},
                {"mean_stall_total_s", s.mean_stall_total_s}};
  };
  json j;
  j["schema_version"] = 1;
  j["scenario"] = scenario_to_json(scenario);
  j["a"] = side(c.a);
  j["b"] = side(c.b);
  j["deltas"] = {{"server_bytes", c.server_bytes_delta},
                 {"improvement", c.improvement_delta},
                 {"mean_startup_s", c.mean_startup_delta_s},
                 {"mean_stall_total_s", c.mean_stall_delta_s}};
  return j;
}

}  // namespace vodsim
