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

// Breadth-first CDP crawl.
//
// Starting from one root device, every device's CDP neighbor cache is read
// over SNMP; each neighbor address not seen before is queued one level
// deeper. Neighbor reports from both ends of a cable collapse into one
// edge, and each edge carries the STP state of its ports so redundant,
// currently blocked links show up alongside the active tree.

#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cdpmap/address.hpp"
#include "cdpmap/mib.hpp"
#include "cdpmap/transport.hpp"

namespace cdpmap {

enum class QueryStatus { queried, unreachable, not_queried };
enum class LinkState { forwarding, stp_blocked };

std::string_view to_string(QueryStatus status);
std::string_view to_string(LinkState state);

/// One end of a link: device management address and port name.
struct PortRef {
  Ipv4 ip;
  std::string port;

  friend auto operator<=>(const PortRef&, const PortRef&) = default;
};

struct DeviceNode {
  Ipv4 management_ip;
  std::string device_id;
  unsigned level = 1;
  QueryStatus status = QueryStatus::not_queried;

  friend bool operator==(const DeviceNode&, const DeviceNode&) = default;
};

/// Undirected link with canonically ordered endpoints (a < b).
struct TopologyEdge {
  PortRef a;
  PortRef b;
  LinkState state = LinkState::forwarding;
  bool reported_by_a = false;
  bool reported_by_b = false;

  friend bool operator==(const TopologyEdge&, const TopologyEdge&) = default;
};

using EdgeKey = std::pair<PortRef, PortRef>;

class TopologyGraph {
 public:
  explicit TopologyGraph(Ipv4 root) : root_(root) {}

  Ipv4 root() const { return root_; }
  const std::map<Ipv4, DeviceNode>& nodes() const { return nodes_; }
  const std::map<EdgeKey, TopologyEdge>& edges() const { return edges_; }

  bool contains(Ipv4 ip) const { return nodes_.contains(ip); }
  DeviceNode* find(Ipv4 ip);
  const DeviceNode* find(Ipv4 ip) const;
  /// Inserts a node if absent; returns the stored node either way.
  DeviceNode& add_node(DeviceNode node);

  std::size_t blocked_count() const;

  friend bool operator==(const TopologyGraph&, const TopologyGraph&) = default;

 private:
  friend std::optional<EdgeKey> merge_edge(TopologyGraph&, const PortRef&, const PortRef&, LinkState,
                                           std::vector<std::string>*);

  Ipv4 root_;
  std::map<Ipv4, DeviceNode> nodes_;
  std::map<EdgeKey, TopologyEdge> edges_;
};

/// Records one side's report of a link. The local node must exist; an unknown
/// remote node is created as not-queried one level below the local node.
/// A reversed report of an existing edge marks it as reported by both ends;
/// stp-blocked wins over forwarding. Self-edges are rejected (nullopt, with a
/// warning appended when `warnings` is set).
std::optional<EdgeKey> merge_edge(TopologyGraph& graph, const PortRef& local, const PortRef& remote,
                                  LinkState state, std::vector<std::string>* warnings = nullptr);

/// A CDP cache row together with the name of the local port it was heard on.
struct LocalNeighbor {
  CdpNeighborEntry entry;
  std::string local_port;

  friend bool operator==(const LocalNeighbor&, const LocalNeighbor&) = default;
};

/// Walks the device's CDP cache and interface descriptions. Rows pointing
/// back at the device itself are dropped; undecodable rows are skipped with
/// a warning. Throws UnreachableError.
std::vector<LocalNeighbor> fetch_neighbors(SnmpTransport& transport, const AgentAddress& device,
                                           const Credentials& creds, const TransportConfig& cfg,
                                           std::vector<std::string>* warnings = nullptr);

/// Bridge-MIB STP port states keyed by ifIndex.
class StpPortTable {
 public:
  static StpPortTable read(SnmpTransport& transport, const AgentAddress& device, const Credentials& creds,
                           const TransportConfig& cfg);

  void set(std::uint32_t if_index, std::int64_t port_state) { states_[if_index] = port_state; }
  /// Forwarding ports map to forwarding; blocking, listening, learning,
  /// disabled and broken map to stp-blocked. Ports absent from the bridge
  /// MIB (routed ports) default to forwarding with a warning.
  LinkState state_of(std::uint32_t if_index, std::vector<std::string>* warnings = nullptr) const;

 private:
  std::map<std::uint32_t, std::int64_t> states_;
};

/// Reads the STP state of one local interface.
LinkState link_state_of(SnmpTransport& transport, const AgentAddress& device, std::uint32_t if_index,
                        const Credentials& creds, const TransportConfig& cfg,
                        std::vector<std::string>* warnings = nullptr);

struct DiscoveryConfig {
  TransportConfig transport;
  /// Devices queried concurrently within one BFS level.
  unsigned parallelism = 8;
  /// Deepest level that is queried; 0 means unlimited.
  unsigned max_level = 0;
};

/// One BFS level of the crawl.
struct DiscoveryStep {
  unsigned level = 0;
  /// Devices queried at this step, ascending.
  std::vector<Ipv4> queried;
  /// Neighbor addresses reported at this step, excluding devices queried
  /// at earlier steps.
  std::vector<Ipv4> neighbors;
  /// Addresses first seen at this step (queued for the next one).
  std::vector<Ipv4> discovered;

  friend bool operator==(const DiscoveryStep&, const DiscoveryStep&) = default;
};

struct DiscoveryReport {
  TopologyGraph graph;
  /// Outcome per device that was actually polled.
  std::map<Ipv4, QueryStatus> outcomes;
  std::chrono::nanoseconds retrieval_duration{0};
  std::chrono::nanoseconds assembly_duration{0};
  std::vector<DiscoveryStep> steps;
  std::vector<std::string> warnings;
};

/// Crawls the network from `root`. Addresses within a level are polled in
/// ascending order (up to cfg.parallelism at once) and every level finishes
/// before the next starts, so the result does not depend on parallelism.
/// Throws RootUnreachableError when the root cannot be polled.
DiscoveryReport discover(const AgentAddress& root, SnmpTransport& transport, const Credentials& creds,
                         const DiscoveryConfig& cfg = {});

}  // namespace cdpmap
