// Copyright 2026 The cdpmap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cdpmap/export.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace cdpmap {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::int64_t to_ms(std::chrono::nanoseconds d) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(d).count();
}

ordered_json document_json(const TopologyDocument& doc, bool with_timings) {
  ordered_json root;
  root["schemaVersion"] = doc.schema_version;
  root["root"] = doc.root.to_string();
  root["nodes"] = ordered_json::array();
  for (const DeviceNode& n : doc.nodes) {
    ordered_json j;
    j["ip"] = n.management_ip.to_string();
    j["deviceId"] = n.device_id;
    j["level"] = n.level;
    j["queryStatus"] = std::string(to_string(n.status));
    root["nodes"].push_back(std::move(j));
  }
  root["edges"] = ordered_json::array();
  for (const TopologyEdge& e : doc.edges) {
    ordered_json j;
    j["a"] = ordered_json{{"ip", e.a.ip.to_string()}, {"port", e.a.port}};
    j["b"] = ordered_json{{"ip", e.b.ip.to_string()}, {"port", e.b.port}};
    j["state"] = std::string(to_string(e.state));
    j["reportedBy"] = ordered_json::array();
    if (e.reported_by_a) j["reportedBy"].push_back("a");
    if (e.reported_by_b) j["reportedBy"].push_back("b");
    root["edges"].push_back(std::move(j));
  }
  ordered_json stats;
  stats["nodeCount"] = doc.stats.node_count;
  stats["edgeCount"] = doc.stats.edge_count;
  stats["blockedCount"] = doc.stats.blocked_count;
  if (with_timings) {
    stats["retrievalMs"] = doc.stats.retrieval_ms;
    stats["assemblyMs"] = doc.stats.assembly_ms;
  }
  root["stats"] = std::move(stats);
  return root;
}

[[noreturn]] void schema_fail(const std::string& where, const std::string& what) {
  throw SchemaError("topology document " + where + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) schema_fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_fail(where, std::string("missing '") + key + "'");
  return *it;
}

std::string string_field(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_string()) schema_fail(where + "." + key, "expected a string");
  return v.get<std::string>();
}

Ipv4 ip_field(const json& obj, const char* key, const std::string& where) {
  auto ip = Ipv4::parse(string_field(obj, key, where));
  if (!ip) schema_fail(where + "." + key, "invalid IPv4 address");
  return *ip;
}

std::uint64_t count_field(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_number_unsigned()) schema_fail(where + "." + key, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

PortRef port_ref(const json& obj, const char* key, const std::string& where) {
  const json& j = field(obj, key, where);
  const std::string sub = where + "." + key;
  return PortRef{ip_field(j, "ip", sub), string_field(j, "port", sub)};
}

std::string dot_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

TopologyDocument make_document(const DiscoveryReport& report) {
  TopologyDocument doc;
  doc.root = report.graph.root();
  for (const auto& [ip, node] : report.graph.nodes()) doc.nodes.push_back(node);
  for (const auto& [key, edge] : report.graph.edges()) doc.edges.push_back(edge);
  doc.stats.node_count = doc.nodes.size();
  doc.stats.edge_count = doc.edges.size();
  doc.stats.blocked_count = report.graph.blocked_count();
  doc.stats.retrieval_ms = to_ms(report.retrieval_duration);
  doc.stats.assembly_ms = to_ms(report.assembly_duration);
  return doc;
}

std::string to_json(const TopologyDocument& document) { return document_json(document, true).dump(2) + "\n"; }

std::string to_json(const DiscoveryReport& report) { return to_json(make_document(report)); }

std::string to_canonical_json(const DiscoveryReport& report) {
  return document_json(make_document(report), false).dump(2) + "\n";
}

TopologyDocument parse_topology_json(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("topology document is not valid JSON: ") + e.what());
  }

  TopologyDocument doc;
  doc.schema_version = string_field(root, "schemaVersion", "$");
  if (doc.schema_version != "1") schema_fail("$.schemaVersion", "unsupported version '" + doc.schema_version + "'");
  doc.root = ip_field(root, "root", "$");

  const json& nodes = field(root, "nodes", "$");
  if (!nodes.is_array()) schema_fail("$.nodes", "expected an array");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string where = "$.nodes[" + std::to_string(i) + "]";
    DeviceNode n;
    n.management_ip = ip_field(nodes[i], "ip", where);
    n.device_id = string_field(nodes[i], "deviceId", where);
    const std::uint64_t level = count_field(nodes[i], "level", where);
    if (level < 1) schema_fail(where + ".level", "must be >= 1");
    n.level = static_cast<unsigned>(level);
    const std::string status = string_field(nodes[i], "queryStatus", where);
    if (status == "queried") n.status = QueryStatus::queried;
    else if (status == "unreachable") n.status = QueryStatus::unreachable;
    else if (status == "not-queried") n.status = QueryStatus::not_queried;
    else schema_fail(where + ".queryStatus", "unknown status '" + status + "'");
    if (!doc.nodes.empty() && !(doc.nodes.back().management_ip < n.management_ip))
      schema_fail(where, "nodes must be sorted by ip without duplicates");
    doc.nodes.push_back(std::move(n));
  }

  const json& edges = field(root, "edges", "$");
  if (!edges.is_array()) schema_fail("$.edges", "expected an array");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string where = "$.edges[" + std::to_string(i) + "]";
    TopologyEdge e;
    e.a = port_ref(edges[i], "a", where);
    e.b = port_ref(edges[i], "b", where);
    if (!(e.a < e.b)) schema_fail(where, "endpoints must satisfy a < b");
    const std::string state = string_field(edges[i], "state", where);
    if (state == "forwarding") e.state = LinkState::forwarding;
    else if (state == "stp-blocked") e.state = LinkState::stp_blocked;
    else schema_fail(where + ".state", "unknown state '" + state + "'");
    const json& by = field(edges[i], "reportedBy", where);
    if (!by.is_array() || by.empty() || by.size() > 2) schema_fail(where + ".reportedBy", "expected [\"a\"], [\"b\"] or [\"a\",\"b\"]");
    for (const json& side : by) {
      if (side == "a" && !e.reported_by_a && !e.reported_by_b) e.reported_by_a = true;
      else if (side == "b" && !e.reported_by_b) e.reported_by_b = true;
      else schema_fail(where + ".reportedBy", "expected [\"a\"], [\"b\"] or [\"a\",\"b\"]");
    }
    if (!doc.edges.empty() && !(std::tie(doc.edges.back().a, doc.edges.back().b) < std::tie(e.a, e.b)))
      schema_fail(where, "edges must be sorted without duplicates");
    auto known = [&](Ipv4 ip) {
      return std::binary_search(doc.nodes.begin(), doc.nodes.end(), DeviceNode{ip, {}, 1, {}},
                                [](const DeviceNode& x, const DeviceNode& y) { return x.management_ip < y.management_ip; });
    };
    if (!known(e.a.ip) || !known(e.b.ip)) schema_fail(where, "endpoint ip missing from nodes");
    doc.edges.push_back(std::move(e));
  }

  const json& stats = field(root, "stats", "$");
  doc.stats.node_count = count_field(stats, "nodeCount", "$.stats");
  doc.stats.edge_count = count_field(stats, "edgeCount", "$.stats");
  doc.stats.blocked_count = count_field(stats, "blockedCount", "$.stats");
  // Timing fields are absent from canonical documents.
  if (stats.contains("retrievalMs") || stats.contains("assemblyMs")) {
    doc.stats.retrieval_ms = static_cast<std::int64_t>(count_field(stats, "retrievalMs", "$.stats"));
    doc.stats.assembly_ms = static_cast<std::int64_t>(count_field(stats, "assemblyMs", "$.stats"));
  }
  if (doc.stats.node_count != doc.nodes.size()) schema_fail("$.stats.nodeCount", "does not match nodes");
  if (doc.stats.edge_count != doc.edges.size()) schema_fail("$.stats.edgeCount", "does not match edges");
  const auto blocked = static_cast<std::size_t>(std::count_if(
      doc.edges.begin(), doc.edges.end(), [](const TopologyEdge& e) { return e.state == LinkState::stp_blocked; }));
  if (doc.stats.blocked_count != blocked) schema_fail("$.stats.blockedCount", "does not match stp-blocked edges");
  return doc;
}

std::string to_dot(const TopologyGraph& graph) {
  std::ostringstream out;
  out << "graph topology {\n";
  out << "  node [shape=box];\n";
  for (const auto& [ip, node] : graph.nodes()) {
    const std::string id = node.device_id.empty() ? "?" : node.device_id;
    out << "  \"" << ip.to_string() << "\" [label=\"" << dot_escape(id) << "\\n" << ip.to_string() << " (L"
        << node.level << ")\"];\n";
  }
  for (const auto& [key, edge] : graph.edges()) {
    out << "  \"" << edge.a.ip.to_string() << "\" -- \"" << edge.b.ip.to_string() << "\" [taillabel=\""
        << dot_escape(edge.a.port) << "\", headlabel=\"" << dot_escape(edge.b.port) << "\"";
    if (edge.state == LinkState::stp_blocked) out << ", style=dashed, label=\"blocked\"";
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string to_table(const DiscoveryReport& report) {
  std::ostringstream out;
  auto join = [](const std::vector<Ipv4>& ips) {
    std::string s;
    for (Ipv4 ip : ips) s += (s.empty() ? "" : " ") + ip.to_string();
    return s.empty() ? std::string("-") : s;
  };

  out << "Discovery steps\n";
  out << std::left << std::setw(6) << "step" << std::setw(48) << "queried" << "neighbors\n";
  for (const DiscoveryStep& step : report.steps) {
    out << std::left << std::setw(6) << step.level << std::setw(48) << join(step.queried) << join(step.neighbors)
        << "\n";
  }

  out << "\nDevices\n";
  out << std::left << std::setw(17) << "ip" << std::setw(24) << "deviceId" << std::setw(7) << "level"
      << "status\n";
  for (const auto& [ip, node] : report.graph.nodes()) {
    out << std::left << std::setw(17) << ip.to_string() << std::setw(24) << (node.device_id.empty() ? "?" : node.device_id)
        << std::setw(7) << node.level << to_string(node.status) << "\n";
  }

  out << "\nLinks\n";
  for (const auto& [key, edge] : report.graph.edges()) {
    std::string by = edge.reported_by_a && edge.reported_by_b ? "both" : edge.reported_by_a ? "a" : "b";
    out << "  " << edge.a.ip.to_string() << " " << edge.a.port << "  <->  " << edge.b.ip.to_string() << " "
        << edge.b.port << "  [" << to_string(edge.state) << ", reported by " << by << "]\n";
  }

  out << "\n"
      << report.graph.nodes().size() << " devices, " << report.graph.edges().size() << " links ("
      << report.graph.blocked_count() << " stp-blocked); retrieval " << to_ms(report.retrieval_duration)
      << " ms, assembly " << to_ms(report.assembly_duration) << " ms\n";
  return out.str();
}

}  // namespace cdpmap
