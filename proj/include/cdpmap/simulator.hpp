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

// Ground-truth virtual networks and the SNMP agent views they imply.
//
// A fixture lists CDP-speaking devices, the point-to-point links between
// their interfaces, transparent hubs and non-CDP hosts. From it we derive
// what each device's agent would expose: sysName, the interface table, the
// bridge STP port states and the converged CDP neighbor cache.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cdpmap/address.hpp"
#include "cdpmap/mib.hpp"
#include "cdpmap/transport.hpp"

namespace cdpmap::sim {

enum class AdminStatus { up, down };

enum class LinkStp { forwarding, blocked, automatic };

std::string_view to_string(LinkStp state);

struct FixtureInterface {
  std::string name;
  std::uint32_t if_index = 0;
  AdminStatus admin = AdminStatus::up;
  /// Routed (layer-3) port: not a bridge port, so no STP state is published.
  bool routed = false;

  friend bool operator==(const FixtureInterface&, const FixtureInterface&) = default;
};

struct FixtureDevice {
  std::string id;
  Ipv4 management_ip;
  std::int64_t bridge_priority = 32768;
  std::vector<FixtureInterface> interfaces;
  bool cdp_enabled = true;

  const FixtureInterface* find_interface(std::string_view name) const;

  friend bool operator==(const FixtureDevice&, const FixtureDevice&) = default;
};

/// Reference to a device interface or a hub port.
struct Endpoint {
  std::string node;
  std::string port;

  friend auto operator<=>(const Endpoint&, const Endpoint&) = default;
};

struct FixtureLink {
  Endpoint a;
  Endpoint b;
  LinkStp stp = LinkStp::automatic;

  friend bool operator==(const FixtureLink&, const FixtureLink&) = default;
};

struct FixtureHub {
  std::string id;

  friend bool operator==(const FixtureHub&, const FixtureHub&) = default;
};

/// End station without CDP, attached to a device interface or hub port.
struct FixtureHost {
  std::string id;
  Ipv4 ip;
  Endpoint attach;

  friend bool operator==(const FixtureHost&, const FixtureHost&) = default;
};

struct NetworkFixture {
  std::vector<FixtureDevice> devices;
  std::vector<FixtureLink> links;
  std::vector<FixtureHost> hosts;
  std::vector<FixtureHub> hubs;

  const FixtureDevice* find_device(std::string_view id) const;
  const FixtureDevice* find_device(Ipv4 ip) const;
  bool is_hub(std::string_view id) const;

  friend bool operator==(const NetworkFixture&, const NetworkFixture&) = default;
};

/// Checks every fixture invariant; throws FixtureError naming the location.
void validate(const NetworkFixture& fixture);

/// Parses and validates a fixture document. `source` prefixes error
/// locations (usually the file path).
NetworkFixture parse_fixture(std::string_view text, const std::string& source = "fixture");

/// Reads and parses a fixture file. Throws FixtureError when the file is
/// missing or invalid.
NetworkFixture load_fixture(const std::filesystem::path& path);

/// Serializes a fixture in the same format parse_fixture reads.
std::string dump_fixture(const NetworkFixture& fixture);

/// Resolves every `automatic` link state with a simplified spanning tree.
///
/// Per connected component the root bridge is the device with the lowest
/// (bridge priority, management IP). Each other node picks the upstream
/// link on a least-cost path to the root, breaking ties on (upstream
/// priority, upstream IP, local interface name). Tree links forward, the
/// rest block. Hubs are folded in as half-cost relay points so a shared
/// segment costs the same as a direct link. Declared states are kept;
/// declared-blocked links, admin-down links and links touching a routed
/// port never join the tree (routed links resolve to forwarding,
/// admin-down links to blocked).
NetworkFixture compute_stp_states(NetworkFixture fixture);

/// Per-device agent views keyed by management IP. Links still in `auto`
/// state are resolved with compute_stp_states first.
std::map<Ipv4, MibView> build_agent_views(const NetworkFixture& fixture);

/// Resolves STP, builds every view and registers one simulated agent per
/// device on `port`.
void register_fixture(SimulatedTransport& registry, const NetworkFixture& fixture,
                      std::uint16_t port = AgentAddress::kDefaultPort);

/// Deterministic random network: a random spanning tree over `device_count`
/// devices plus `extra_link_count` distinct extra links, IPs assigned from
/// 10.0.0.1 upward. The extra count is capped at the complete-graph
/// remainder, with a note appended to `warnings` when that happens.
NetworkFixture generate_random_fixture(std::uint64_t seed, std::size_t device_count, std::size_t extra_link_count,
                                       std::vector<std::string>* warnings = nullptr);

}  // namespace cdpmap::sim
