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

#include "cdpmap/discovery.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <set>
#include <stdexcept>
#include <thread>
#include <variant>

#include "cdpmap/error.hpp"

namespace cdpmap {

std::string_view to_string(QueryStatus status) {
  switch (status) {
    case QueryStatus::queried: return "queried";
    case QueryStatus::unreachable: return "unreachable";
    case QueryStatus::not_queried: return "not-queried";
  }
  return "not-queried";
}

std::string_view to_string(LinkState state) {
  return state == LinkState::stp_blocked ? "stp-blocked" : "forwarding";
}

DeviceNode* TopologyGraph::find(Ipv4 ip) {
  auto it = nodes_.find(ip);
  return it == nodes_.end() ? nullptr : &it->second;
}

const DeviceNode* TopologyGraph::find(Ipv4 ip) const {
  auto it = nodes_.find(ip);
  return it == nodes_.end() ? nullptr : &it->second;
}

DeviceNode& TopologyGraph::add_node(DeviceNode node) {
  if (node.level < 1) throw std::invalid_argument("node level must be >= 1");
  const Ipv4 ip = node.management_ip;
  return nodes_.try_emplace(ip, std::move(node)).first->second;
}

std::size_t TopologyGraph::blocked_count() const {
  return static_cast<std::size_t>(std::count_if(edges_.begin(), edges_.end(), [](const auto& kv) {
    return kv.second.state == LinkState::stp_blocked;
  }));
}

std::optional<EdgeKey> merge_edge(TopologyGraph& graph, const PortRef& local, const PortRef& remote,
                                  LinkState state, std::vector<std::string>* warnings) {
  const DeviceNode* local_node = graph.find(local.ip);
  if (!local_node) throw std::invalid_argument("merge_edge: local node " + local.ip.to_string() + " not in graph");
  if (local.ip == remote.ip) {
    if (warnings) {
      warnings->push_back("ignoring self-link on " + local.ip.to_string() + " (" + local.port + " -> " +
                          remote.port + ")");
    }
    return std::nullopt;
  }
  if (!graph.contains(remote.ip)) {
    graph.add_node(DeviceNode{remote.ip, {}, local_node->level + 1, QueryStatus::not_queried});
  }

  const bool local_is_a = local < remote;
  EdgeKey key = local_is_a ? EdgeKey{local, remote} : EdgeKey{remote, local};
  auto [it, inserted] = graph.edges_.try_emplace(key, TopologyEdge{key.first, key.second, state, false, false});
  TopologyEdge& edge = it->second;
  if (!inserted && state == LinkState::stp_blocked) edge.state = LinkState::stp_blocked;
  (local_is_a ? edge.reported_by_a : edge.reported_by_b) = true;
  return key;
}

// ---------------------------------------------------------------------------

std::vector<LocalNeighbor> fetch_neighbors(SnmpTransport& transport, const AgentAddress& device,
                                           const Credentials& creds, const TransportConfig& cfg,
                                           std::vector<std::string>* warnings) {
  const WalkResult cache = transport.walk(device, oids::cdp_cache_table(), creds, cfg);
  std::vector<std::string> row_warnings;
  std::vector<CdpNeighborEntry> entries;
  try {
    entries = decode_cdp_cache_rows(cache.varbinds, &row_warnings);
  } catch (const OrderingError& e) {
    throw ProtocolError("agent " + device.to_string() + ": " + e.what());
  }
  if (warnings) {
    for (auto& w : row_warnings) warnings->push_back(device.ip.to_string() + ": skipped CDP " + w);
  }
  if (entries.empty()) return {};

  std::map<std::uint32_t, std::string> port_names;
  for (const VarBind& vb : transport.walk(device, oids::if_descr(), creds, cfg).varbinds) {
    auto suffix = vb.oid.suffix_after(oids::if_descr());
    if (suffix.size() == 1 && vb.value.kind() == SnmpValue::Kind::octet_string) {
      port_names[suffix[0]] = vb.value.as_octets();
    }
  }

  std::vector<LocalNeighbor> out;
  for (CdpNeighborEntry& e : entries) {
    if (e.neighbor_address == device.ip) continue;
    auto it = port_names.find(e.local_if_index);
    std::string local_port;
    if (it != port_names.end()) {
      local_port = it->second;
    } else {
      local_port = "ifIndex" + std::to_string(e.local_if_index);
      if (warnings) {
        warnings->push_back(device.ip.to_string() + ": no ifDescr for ifIndex " + std::to_string(e.local_if_index));
      }
    }
    out.push_back(LocalNeighbor{std::move(e), std::move(local_port)});
  }
  return out;
}

StpPortTable StpPortTable::read(SnmpTransport& transport, const AgentAddress& device, const Credentials& creds,
                                const TransportConfig& cfg) {
  std::map<std::uint32_t, std::uint32_t> port_to_if;
  for (const VarBind& vb : transport.walk(device, oids::dot1d_base_port_if_index(), creds, cfg).varbinds) {
    auto suffix = vb.oid.suffix_after(oids::dot1d_base_port_if_index());
    if (suffix.size() == 1 && vb.value.kind() == SnmpValue::Kind::integer && vb.value.as_integer() > 0) {
      port_to_if[suffix[0]] = static_cast<std::uint32_t>(vb.value.as_integer());
    }
  }
  StpPortTable table;
  if (port_to_if.empty()) return table;
  for (const VarBind& vb : transport.walk(device, oids::dot1d_stp_port_state(), creds, cfg).varbinds) {
    auto suffix = vb.oid.suffix_after(oids::dot1d_stp_port_state());
    if (suffix.size() != 1 || vb.value.kind() != SnmpValue::Kind::integer) continue;
    auto it = port_to_if.find(suffix[0]);
    if (it != port_to_if.end()) table.set(it->second, vb.value.as_integer());
  }
  return table;
}

LinkState StpPortTable::state_of(std::uint32_t if_index, std::vector<std::string>* warnings) const {
  auto it = states_.find(if_index);
  if (it == states_.end()) {
    if (warnings) warnings->push_back("no STP state for ifIndex " + std::to_string(if_index) + ", assuming forwarding");
    return LinkState::forwarding;
  }
  return it->second == static_cast<std::int64_t>(StpPortState::forwarding) ? LinkState::forwarding
                                                                            : LinkState::stp_blocked;
}

LinkState link_state_of(SnmpTransport& transport, const AgentAddress& device, std::uint32_t if_index,
                        const Credentials& creds, const TransportConfig& cfg, std::vector<std::string>* warnings) {
  return StpPortTable::read(transport, device, creds, cfg).state_of(if_index, warnings);
}

// ---------------------------------------------------------------------------

namespace {

struct DeviceSnapshot {
  std::optional<std::string> sys_name;
  std::vector<LocalNeighbor> neighbors;
  StpPortTable stp;
  std::vector<std::string> warnings;
};

struct Unreachable {
  std::string reason;
};

using FetchOutcome = std::variant<DeviceSnapshot, Unreachable, std::exception_ptr>;

FetchOutcome fetch_device(SnmpTransport& transport, const AgentAddress& agent, const Credentials& creds,
                          const TransportConfig& cfg) {
  try {
    DeviceSnapshot snap;
    const Oid sys_name = oids::sys_name();
    auto name = transport.get(agent, std::span(&sys_name, 1), creds, cfg);
    if (name.front().value.kind() == SnmpValue::Kind::octet_string) snap.sys_name = name.front().value.as_octets();
    snap.neighbors = fetch_neighbors(transport, agent, creds, cfg, &snap.warnings);
    if (!snap.neighbors.empty()) snap.stp = StpPortTable::read(transport, agent, creds, cfg);
    return snap;
  } catch (const UnreachableError& e) {
    return Unreachable{e.what()};
  } catch (const ProtocolError& e) {
    return Unreachable{e.what()};
  } catch (...) {
    return std::current_exception();
  }
}

std::vector<FetchOutcome> fetch_all(SnmpTransport& transport, const std::vector<Ipv4>& frontier,
                                    std::uint16_t port, const Credentials& creds, const TransportConfig& cfg,
                                    unsigned parallelism) {
  std::vector<FetchOutcome> results(frontier.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < frontier.size(); i = next++) {
      results[i] = fetch_device(transport, AgentAddress(frontier[i], port), creds, cfg);
    }
  };
  const std::size_t helpers = std::min<std::size_t>(std::max(parallelism, 1u), frontier.size()) - 1;
  {
    std::vector<std::jthread> threads;
    threads.reserve(helpers);
    for (std::size_t k = 0; k < helpers; ++k) threads.emplace_back(worker);
    worker();
  }
  for (auto& r : results) {
    if (auto* ep = std::get_if<std::exception_ptr>(&r)) std::rethrow_exception(*ep);
  }
  return results;
}

}  // namespace

DiscoveryReport discover(const AgentAddress& root, SnmpTransport& transport, const Credentials& creds,
                         const DiscoveryConfig& cfg) {
  cfg.transport.validate();
  using Clock = std::chrono::steady_clock;

  DiscoveryReport report{TopologyGraph(root.ip), {}, {}, {}, {}, {}};
  TopologyGraph& graph = report.graph;
  graph.add_node(DeviceNode{root.ip, {}, 1, QueryStatus::not_queried});

  std::set<Ipv4> queried_before;
  std::vector<Ipv4> frontier{root.ip};
  for (unsigned level = 1; !frontier.empty(); ++level) {
    if (cfg.max_level != 0 && level > cfg.max_level) break;
    std::sort(frontier.begin(), frontier.end());

    const auto t0 = Clock::now();
    std::vector<FetchOutcome> results = fetch_all(transport, frontier, root.port, creds, cfg.transport, cfg.parallelism);
    const auto t1 = Clock::now();
    report.retrieval_duration += t1 - t0;

    DiscoveryStep step;
    step.level = level;
    step.queried = frontier;
    std::set<Ipv4> step_neighbors;
    std::vector<Ipv4> next;

    for (std::size_t i = 0; i < frontier.size(); ++i) {
      const Ipv4 ip = frontier[i];
      if (const auto* down = std::get_if<Unreachable>(&results[i])) {
        if (ip == root.ip) throw RootUnreachableError(root);
        graph.find(ip)->status = QueryStatus::unreachable;
        report.outcomes[ip] = QueryStatus::unreachable;
        report.warnings.push_back(down->reason);
        continue;
      }
      DeviceSnapshot& snap = std::get<DeviceSnapshot>(results[i]);
      DeviceNode& node = *graph.find(ip);
      node.status = QueryStatus::queried;
      if (snap.sys_name && !snap.sys_name->empty()) node.device_id = *snap.sys_name;
      report.outcomes[ip] = QueryStatus::queried;
      for (auto& w : snap.warnings) report.warnings.push_back(std::move(w));

      for (const LocalNeighbor& n : snap.neighbors) {
        const Ipv4 addr = n.entry.neighbor_address;
        if (!graph.contains(addr)) {
          graph.add_node(DeviceNode{addr, n.entry.neighbor_device_id, level + 1, QueryStatus::not_queried});
          next.push_back(addr);
          step.discovered.push_back(addr);
        } else if (DeviceNode* known = graph.find(addr); known->device_id.empty()) {
          known->device_id = n.entry.neighbor_device_id;
        }
        if (!queried_before.contains(addr)) step_neighbors.insert(addr);

        std::vector<std::string> stp_warnings;
        const LinkState state = snap.stp.state_of(n.entry.local_if_index, &stp_warnings);
        for (auto& w : stp_warnings) report.warnings.push_back(ip.to_string() + ": " + w);
        merge_edge(graph, PortRef{ip, n.local_port}, PortRef{addr, n.entry.neighbor_port}, state, &report.warnings);
      }
    }

    queried_before.insert(frontier.begin(), frontier.end());
    step.neighbors.assign(step_neighbors.begin(), step_neighbors.end());
    std::sort(step.discovered.begin(), step.discovered.end());
    report.steps.push_back(std::move(step));
    report.assembly_duration += Clock::now() - t1;
    frontier = std::move(next);
  }

  std::map<std::string, std::vector<Ipv4>> by_id;
  for (const auto& [ip, node] : graph.nodes()) {
    if (!node.device_id.empty()) by_id[node.device_id].push_back(ip);
  }
  for (const auto& [id, ips] : by_id) {
    if (ips.size() < 2) continue;
    std::string list;
    for (Ipv4 ip : ips) list += (list.empty() ? "" : ", ") + ip.to_string();
    report.warnings.push_back("device id '" + id + "' reported at several addresses (possible aliases): " + list);
  }
  return report;
}

}  // namespace cdpmap
