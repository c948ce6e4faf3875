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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>
#include <set>

#include "cdpmap/error.hpp"
#include "cdpmap/simulator.hpp"

using namespace cdpmap;
using namespace cdpmap::sim;

namespace {

const std::string kFixtureDir = CDPMAP_FIXTURE_DIR;

std::vector<CdpNeighborEntry> cdp_rows(const MibView& view) {
  std::vector<VarBind> vbs;
  for (const auto& [oid, v] : view)
    if (oids::cdp_cache_table().contains(oid)) vbs.push_back({oid, v});
  return decode_cdp_cache_rows(vbs);
}

std::optional<std::string> if_name(const MibView& view, std::uint32_t if_index) {
  auto it = view.find(oids::if_descr().child({if_index}));
  if (it == view.end()) return std::nullopt;
  return it->second.as_octets();
}

std::optional<std::int64_t> stp_state(const MibView& view, std::uint32_t if_index) {
  for (const auto& [oid, v] : view) {
    if (!oids::dot1d_base_port_if_index().contains(oid)) continue;
    if (v.as_integer() != if_index) continue;
    auto s = view.find(oids::dot1d_stp_port_state().child(oid.suffix_after(oids::dot1d_base_port_if_index())));
    if (s != view.end()) return s->second.as_integer();
  }
  return std::nullopt;
}

std::uint32_t if_index_of(const NetworkFixture& f, const std::string& device, const std::string& port) {
  return f.find_device(device)->find_interface(port)->if_index;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

std::size_t index_of(const NetworkFixture& f, const std::string& id) {
  for (std::size_t i = 0; i < f.devices.size(); ++i)
    if (f.devices[i].id == id) return i;
  return f.devices.size();
}

bool connected(const NetworkFixture& f) {
  UnionFind uf(f.devices.size());
  std::size_t merges = 0;
  for (const auto& l : f.links) merges += uf.unite(index_of(f, l.a.node), index_of(f, l.b.node));
  return merges + 1 == f.devices.size();
}

const FixtureLink* link_between(const NetworkFixture& f, const std::string& x, const std::string& y) {
  for (const auto& l : f.links)
    if ((l.a.node == x && l.b.node == y) || (l.a.node == y && l.b.node == x)) return &l;
  return nullptr;
}

}  // namespace

TEST_CASE("figure1 fixture loads") {
  NetworkFixture f = load_fixture(kFixtureDir + "/figure1.fixture");
  CHECK(f.devices.size() == 6);
  CHECK(f.links.size() == 9);
  CHECK(f.find_device("SW1")->management_ip == Ipv4(192, 168, 10, 1));
  CHECK(f.find_device(Ipv4(192, 168, 10, 6))->id == "SW6");
  CHECK(f.find_device("SW2")->find_interface("Gi0/3")->if_index == 3);
}

TEST_CASE("fixture errors name what is wrong") {
  try {
    parse_fixture(R"({"devices": [{"deviceId": "SW1", "managementIp": "10.0.0.1", "interfaces": ["p"]}],
                      "links": [{"a": {"device": "SW1", "interface": "p"}, "b": {"device": "SW9", "interface": "p"}}]})");
    FAIL("expected FixtureError");
  } catch (const FixtureError& e) {
    CHECK(std::string(e.what()).find("SW9") != std::string::npos);
  }
  CHECK_THROWS_AS(load_fixture(kFixtureDir + "/does-not-exist.fixture"), FixtureError);
  CHECK_THROWS_AS(parse_fixture("{not json"), FixtureError);
  CHECK_THROWS_AS(parse_fixture(R"({"devices": [{"deviceId": "A", "managementIp": "10.0.0.1", "colour": 1}]})"),
                  FixtureError);
  CHECK_THROWS_AS(parse_fixture(R"({"devices": [{"deviceId": "A", "managementIp": "10.0.0.300"}]})"), FixtureError);
  CHECK_THROWS_AS(parse_fixture(R"({"devices": [{"deviceId": "A", "managementIp": "10.0.0.1"},
                                                {"deviceId": "A", "managementIp": "10.0.0.2"}]})"),
                  FixtureError);
  CHECK_THROWS_AS(parse_fixture(R"({"devices": [{"deviceId": "A", "managementIp": "10.0.0.1",
                                   "interfaces": [{"name": "p", "adminStatus": "sideways"}]}]})"),
                  FixtureError);
  CHECK_THROWS_AS(parse_fixture(R"({"devices": []})"), FixtureError);
}

TEST_CASE("a single isolated device is a valid fixture") {
  NetworkFixture f = parse_fixture(R"({"devices": [{"deviceId": "solo", "managementIp": "10.0.0.1"}]})");
  auto views = build_agent_views(f);
  REQUIRE(views.size() == 1);
  const MibView& v = views.at(Ipv4(10, 0, 0, 1));
  CHECK(v.at(oids::sys_name()).as_octets() == "solo");
  CHECK(cdp_rows(v).empty());
}

TEST_CASE("fixtures survive dump and parse") {
  NetworkFixture f = load_fixture(kFixtureDir + "/figure1.fixture");
  CHECK(parse_fixture(dump_fixture(f)) == f);
  NetworkFixture g = generate_random_fixture(3, 25, 6);
  CHECK(parse_fixture(dump_fixture(g)) == g);
}

TEST_CASE("triangle: the link away from the root bridge blocks") {
  NetworkFixture t = compute_stp_states(parse_fixture(R"({
    "devices": [
      {"deviceId": "A", "managementIp": "10.1.0.1", "interfaces": ["p1", "p2"]},
      {"deviceId": "B", "managementIp": "10.1.0.2", "interfaces": ["p1", "p2"]},
      {"deviceId": "C", "managementIp": "10.1.0.3", "interfaces": ["p1", "p2"]}
    ],
    "links": [
      {"a": {"device": "A", "interface": "p1"}, "b": {"device": "B", "interface": "p1"}},
      {"a": {"device": "A", "interface": "p2"}, "b": {"device": "C", "interface": "p1"}},
      {"a": {"device": "B", "interface": "p2"}, "b": {"device": "C", "interface": "p2"}}
    ]})"));
  CHECK(link_between(t, "A", "B")->stp == LinkStp::forwarding);
  CHECK(link_between(t, "A", "C")->stp == LinkStp::forwarding);
  CHECK(link_between(t, "B", "C")->stp == LinkStp::blocked);

  // A lower priority moves the root bridge to C.
  NetworkFixture u = parse_fixture(dump_fixture(t));
  for (auto& l : u.links) l.stp = LinkStp::automatic;
  for (auto& d : u.devices)
    if (d.id == "C") d.bridge_priority = 4096;
  u = compute_stp_states(u);
  CHECK(link_between(u, "A", "B")->stp == LinkStp::blocked);
}

TEST_CASE("a tree has nothing to block") {
  NetworkFixture f = compute_stp_states(generate_random_fixture(11, 30, 0));
  for (const auto& l : f.links) CHECK(l.stp == LinkStp::forwarding);
}

TEST_CASE("declared link states are kept") {
  NetworkFixture f = parse_fixture(R"({
    "devices": [
      {"deviceId": "A", "managementIp": "10.1.0.1", "interfaces": ["p1"]},
      {"deviceId": "B", "managementIp": "10.1.0.2", "interfaces": ["p1"]}
    ],
    "links": [{"a": {"device": "A", "interface": "p1"}, "b": {"device": "B", "interface": "p1"}, "stpState": "blocked"}]})");
  NetworkFixture r = compute_stp_states(f);
  CHECK(r.links[0].stp == LinkStp::blocked);
  auto views = build_agent_views(f);
  CHECK(stp_state(views.at(Ipv4(10, 1, 0, 1)), 1) == 2);
  CHECK(stp_state(views.at(Ipv4(10, 1, 0, 2)), 1) == 2);
  // CDP still runs across a blocked link.
  CHECK(cdp_rows(views.at(Ipv4(10, 1, 0, 1))).size() == 1);
}

TEST_CASE("random fixtures: forwarding links form a spanning tree") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    NetworkFixture f = compute_stp_states(generate_random_fixture(seed, 5 + seed % 20, seed % 9));
    UnionFind uf(f.devices.size());
    std::size_t forwarding = 0;
    bool acyclic = true;
    for (const auto& l : f.links) {
      CHECK(l.stp != LinkStp::automatic);
      if (l.stp != LinkStp::forwarding) continue;
      ++forwarding;
      acyclic &= uf.unite(index_of(f, l.a.node), index_of(f, l.b.node));
    }
    CAPTURE(seed);
    CHECK(acyclic);
    CHECK(forwarding + 1 == f.devices.size());
  }
}

TEST_CASE("generator: seed 7 with 92 devices and 20 extra links") {
  std::vector<std::string> warnings;
  NetworkFixture f = generate_random_fixture(7, 92, 20, &warnings);
  CHECK(warnings.empty());
  CHECK(f.devices.size() == 92);
  CHECK(f.links.size() == 111);
  CHECK(connected(f));
  CHECK(dump_fixture(f) == dump_fixture(generate_random_fixture(7, 92, 20)));
  CHECK(dump_fixture(f) != dump_fixture(generate_random_fixture(8, 92, 20)));
}

TEST_CASE("generator: minimal and capped fixtures") {
  NetworkFixture one = generate_random_fixture(1, 1, 0);
  CHECK(one.devices.size() == 1);
  CHECK(one.links.empty());

  std::vector<std::string> warnings;
  NetworkFixture capped = generate_random_fixture(1, 3, 10, &warnings);
  CHECK(capped.links.size() == 3);
  CHECK(warnings.size() == 1);
}

TEST_CASE("admin-down interfaces carry no CDP in either direction") {
  NetworkFixture f = parse_fixture(R"({
    "devices": [
      {"deviceId": "A", "managementIp": "10.1.0.1", "interfaces": ["p1", "p2"]},
      {"deviceId": "B", "managementIp": "10.1.0.2", "interfaces": [{"name": "p1", "adminStatus": "down"}, "p2"]},
      {"deviceId": "C", "managementIp": "10.1.0.3", "interfaces": ["p1"]}
    ],
    "links": [
      {"a": {"device": "A", "interface": "p1"}, "b": {"device": "B", "interface": "p1"}},
      {"a": {"device": "A", "interface": "p2"}, "b": {"device": "C", "interface": "p1"}}
    ]})");
  auto views = build_agent_views(f);
  const MibView& a = views.at(Ipv4(10, 1, 0, 1));
  const MibView& b = views.at(Ipv4(10, 1, 0, 2));
  auto rows_a = cdp_rows(a);
  REQUIRE(rows_a.size() == 1);
  CHECK(rows_a[0].neighbor_device_id == "C");
  CHECK(cdp_rows(b).empty());
  CHECK(b.at(oids::if_admin_status().child({1})).as_integer() == 2);
  CHECK(b.at(oids::if_admin_status().child({2})).as_integer() == 1);
}

TEST_CASE("hubs are transparent to CDP and hosts are invisible") {
  NetworkFixture f = parse_fixture(R"({
    "devices": [
      {"deviceId": "A", "managementIp": "10.1.0.1", "interfaces": ["p1"]},
      {"deviceId": "B", "managementIp": "10.1.0.2", "interfaces": ["p1", "p2"]},
      {"deviceId": "C", "managementIp": "10.1.0.3", "interfaces": ["p1"]}
    ],
    "hubs": [{"id": "H"}],
    "hosts": [
      {"id": "pc1", "ip": "10.1.0.100", "attach": {"device": "B", "interface": "p2"}},
      {"id": "pc2", "ip": "10.1.0.101", "attach": {"hub": "H", "port": "4"}}
    ],
    "links": [
      {"a": {"device": "A", "interface": "p1"}, "b": {"hub": "H", "port": "1"}},
      {"a": {"device": "B", "interface": "p1"}, "b": {"hub": "H", "port": "2"}},
      {"a": {"hub": "H", "port": "3"}, "b": {"device": "C", "interface": "p1"}}
    ]})");
  auto views = build_agent_views(f);
  CHECK(views.size() == 3);
  auto rows_a = cdp_rows(views.at(Ipv4(10, 1, 0, 1)));
  REQUIRE(rows_a.size() == 2);
  CHECK(rows_a[0].local_if_index == 1);
  CHECK(rows_a[1].local_if_index == 1);
  std::set<std::string> seen{rows_a[0].neighbor_device_id, rows_a[1].neighbor_device_id};
  CHECK(seen == std::set<std::string>{"B", "C"});
  for (const auto& [ip, view] : views)
    for (const auto& row : cdp_rows(view)) CHECK(f.find_device(row.neighbor_address) != nullptr);
}

TEST_CASE("CDP caches are symmetric and respect admin status") {
  std::mt19937_64 rng(99);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    NetworkFixture f = generate_random_fixture(seed, 12, 6);
    // Take a few interfaces down at random.
    for (auto& d : f.devices)
      for (auto& itf : d.interfaces)
        if (rng() % 6 == 0) itf.admin = AdminStatus::down;
    auto views = build_agent_views(f);
    std::size_t expected_rows = 0;
    for (const auto& l : f.links) {
      const bool up = f.find_device(l.a.node)->find_interface(l.a.port)->admin == AdminStatus::up &&
                      f.find_device(l.b.node)->find_interface(l.b.port)->admin == AdminStatus::up;
      expected_rows += up ? 2 : 0;
    }
    std::size_t total_rows = 0;
    for (const auto& [ip, view] : views) {
      const FixtureDevice* self = f.find_device(ip);
      for (const auto& row : cdp_rows(view)) {
        ++total_rows;
        const auto local = if_name(view, row.local_if_index);
        REQUIRE(local);
        CHECK(self->find_interface(*local)->admin == AdminStatus::up);
        const FixtureDevice* peer = f.find_device(row.neighbor_address);
        REQUIRE(peer);
        CHECK(peer->id == row.neighbor_device_id);
        CHECK(peer->find_interface(row.neighbor_port)->admin == AdminStatus::up);
        // The peer reports us back on the matching ports.
        const MibView& pv = views.at(peer->management_ip);
        const auto back = cdp_rows(pv);
        const bool reciprocal = std::any_of(back.begin(), back.end(), [&](const CdpNeighborEntry& e) {
          return e.neighbor_address == ip && e.neighbor_port == *local &&
                 if_name(pv, e.local_if_index) == row.neighbor_port;
        });
        CHECK(reciprocal);
      }
    }
    CAPTURE(seed);
    CHECK(total_rows == expected_rows);
  }
}

TEST_CASE("bridge port table reflects resolved link states") {
  NetworkFixture f = load_fixture(kFixtureDir + "/figure1.fixture");
  NetworkFixture r = compute_stp_states(f);
  auto views = build_agent_views(f);
  for (const auto& l : r.links) {
    const std::int64_t expected = l.stp == LinkStp::blocked ? 2 : 5;
    CHECK(stp_state(views.at(r.find_device(l.a.node)->management_ip), if_index_of(r, l.a.node, l.a.port)) == expected);
    CHECK(stp_state(views.at(r.find_device(l.b.node)->management_ip), if_index_of(r, l.b.node, l.b.port)) == expected);
  }
}

TEST_CASE("register_fixture installs one agent per device") {
  NetworkFixture f = load_fixture(kFixtureDir + "/figure1.fixture");
  SimulatedTransport reg;
  register_fixture(reg, f);
  for (const auto& d : f.devices) CHECK(reg.has_agent(AgentAddress(d.management_ip)));
  CHECK_THROWS_AS(register_fixture(reg, f), RegistrationError);
}
