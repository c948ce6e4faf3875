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

#include "cdpmap/error.hpp"
#include "cdpmap/transport.hpp"
#include "cdpmap/udp.hpp"

using namespace cdpmap;

namespace {

const Credentials kCreds("public");
const AgentAddress kAgent(Ipv4(10, 0, 0, 1));

MibView two_neighbor_view() {
  std::vector<CdpNeighborEntry> rows{
      {1, 1, Ipv4(10, 0, 0, 2), "SW2", "Gi0/1"},
      {2, 1, Ipv4(10, 0, 0, 3), "SW3", "Gi0/1"},
  };
  MibView view;
  for (auto& vb : encode_cdp_cache_rows(rows)) view.emplace(vb.oid, vb.value);
  view.emplace(oids::sys_name(), SnmpValue::octet_string("SW1"));
  view.emplace(oids::if_descr().child({1}), SnmpValue::octet_string("Gi0/1"));
  view.emplace(oids::if_descr().child({2}), SnmpValue::octet_string("Gi0/2"));
  return view;
}

// Agent whose GETBULK answers go backwards.
class RewindingTransport final : public SnmpTransport {
 protected:
  std::vector<VarBind> do_get(const AgentAddress&, std::span<const Oid>, const Credentials&,
                              const TransportConfig&) override {
    return {};
  }
  std::vector<VarBind> do_get_next(const AgentAddress&, const Oid& oid, const Credentials&,
                                   const TransportConfig&) override {
    return {{oid, SnmpValue::integer(0)}};
  }
  std::vector<VarBind> do_get_bulk(const AgentAddress&, const Oid& oid, unsigned, const Credentials&,
                                   const TransportConfig&) override {
    return {{oid.child({5}), SnmpValue::integer(1)}, {oid.child({4}), SnmpValue::integer(2)}};
  }
};

}  // namespace

TEST_CASE("walk over a two-neighbor CDP cache returns eight varbinds") {
  SimulatedTransport reg;
  reg.register_agent(kAgent, two_neighbor_view());
  auto result = reg.walk(kAgent, oids::cdp_cache_table(), kCreds, {});
  CHECK(result.varbinds.size() == 8);
  CHECK(decode_cdp_cache_rows(result.varbinds).size() == 2);
  for (const auto& vb : result.varbinds) CHECK(oids::cdp_cache_table().contains(vb.oid));
}

TEST_CASE("walk of an absent subtree is empty") {
  SimulatedTransport reg;
  reg.register_agent(kAgent, two_neighbor_view());
  auto result = reg.walk(kAgent, oids::dot1d_stp_port_state(), kCreds, {});
  CHECK(result.varbinds.empty());
  CHECK(result.request_count == 1);
}

TEST_CASE("max-repetitions changes request count but not varbinds") {
  SimulatedTransport reg;
  reg.register_agent(kAgent, two_neighbor_view());
  TransportConfig one;
  one.max_repetitions = 1;
  TransportConfig fifty;
  fifty.max_repetitions = 50;
  auto a = reg.walk(kAgent, oids::cdp_cache_table(), kCreds, one);
  auto b = reg.walk(kAgent, oids::cdp_cache_table(), kCreds, fifty);
  CHECK(a.varbinds == b.varbinds);
  CHECK(a.request_count == 9);
  CHECK(b.request_count == 1);
}

TEST_CASE("walk is idempotent") {
  SimulatedTransport reg;
  reg.register_agent(kAgent, two_neighbor_view());
  CHECK(reg.walk(kAgent, oids::cdp_cache_table(), kCreds, {}).varbinds ==
        reg.walk(kAgent, oids::cdp_cache_table(), kCreds, {}).varbinds);
}

TEST_CASE("get returns values and no-such-object markers") {
  SimulatedTransport reg;
  reg.register_agent(kAgent, two_neighbor_view());
  const std::vector<Oid> ask{oids::sys_name(), Oid{1, 3, 6, 1, 2, 1, 1, 99, 0}};
  auto vbs = reg.get(kAgent, ask, kCreds, {});
  REQUIRE(vbs.size() == 2);
  CHECK(vbs[0].value == SnmpValue::octet_string("SW1"));
  CHECK(vbs[1].value.kind() == SnmpValue::Kind::no_such_object);
  CHECK_THROWS_AS(reg.get(kAgent, std::vector<Oid>{}, kCreds, {}), std::invalid_argument);
}

TEST_CASE("registry rules") {
  SimulatedTransport reg;
  reg.register_agent(kAgent, two_neighbor_view());
  CHECK_THROWS_AS(reg.register_agent(kAgent, {}), RegistrationError);
  CHECK_NOTHROW(reg.register_agent(AgentAddress(kAgent.ip, 1161), {}));
  CHECK_THROWS_AS(reg.walk(AgentAddress(Ipv4(10, 9, 9, 9)), oids::cdp_cache_table(), kCreds, {}),
                  UnreachableError);

  SimulatedTransport other;
  CHECK_FALSE(other.has_agent(kAgent));
  CHECK_THROWS_AS(other.get(kAgent, std::vector<Oid>{oids::sys_name()}, kCreds, {}), UnreachableError);
}

TEST_CASE("configuration validation") {
  CHECK_THROWS_AS(Credentials(""), std::invalid_argument);
  SimulatedTransport reg;
  reg.register_agent(kAgent, two_neighbor_view());
  TransportConfig bad;
  bad.max_repetitions = 0;
  CHECK_THROWS_AS(reg.walk(kAgent, oids::cdp_cache_table(), kCreds, bad), std::invalid_argument);
}

TEST_CASE("agents without GETBULK fall back to GETNEXT") {
  SimulatedTransport bulk;
  bulk.register_agent(kAgent, two_neighbor_view());
  SimulatedTransport nobulk;
  nobulk.register_agent_without_bulk(kAgent, two_neighbor_view());

  auto a = bulk.walk(kAgent, oids::cdp_cache_table(), kCreds, {});
  auto b = nobulk.walk(kAgent, oids::cdp_cache_table(), kCreds, {});
  CHECK(a.varbinds == b.varbinds);

  auto log = nobulk.request_log();
  REQUIRE(!log.empty());
  CHECK(log.front().op == RequestRecord::Op::get_bulk);
  CHECK(std::count_if(log.begin(), log.end(), [](const RequestRecord& r) { return r.op == RequestRecord::Op::get_bulk; }) == 1);

  // The fallback is remembered for the agent.
  nobulk.walk(kAgent, oids::if_descr(), kCreds, {});
  log = nobulk.request_log();
  CHECK(std::count_if(log.begin(), log.end(), [](const RequestRecord& r) { return r.op == RequestRecord::Op::get_bulk; }) == 1);
}

TEST_CASE("walk rejects answers that do not advance") {
  RewindingTransport t;
  CHECK_THROWS_AS(t.walk(kAgent, Oid{1, 3, 6}, kCreds, {}), ProtocolError);
}

TEST_CASE("UDP backend matches the in-memory registry") {
  const MibView view = two_neighbor_view();
  UdpAgentServer server(view, "public");
  UdpTransport udp;
  udp.add_endpoint_override(kAgent, server.address());
  SimulatedTransport reg;
  reg.register_agent(kAgent, view);

  for (unsigned reps : {1u, 3u, 20u}) {
    TransportConfig cfg;
    cfg.max_repetitions = reps;
    cfg.timeout = std::chrono::milliseconds(1000);
    for (const Oid& base : {oids::cdp_cache_table(), oids::if_descr(), Oid{1, 3, 6, 1}}) {
      auto a = reg.walk(kAgent, base, kCreds, cfg);
      auto b = udp.walk(kAgent, base, kCreds, cfg);
      CHECK(a.varbinds == b.varbinds);
      CHECK(a.request_count == b.request_count);
    }
  }
  const std::vector<Oid> ask{oids::sys_name(), Oid{1, 3, 6, 1, 2, 1, 1, 99, 0}};
  CHECK(udp.get(kAgent, ask, kCreds, {}) == reg.get(kAgent, ask, kCreds, {}));
  CHECK(server.requests_served() > 0);
}

TEST_CASE("UDP backend falls back when the agent rejects GETBULK") {
  const MibView view = two_neighbor_view();
  UdpAgentServer server(view, "public", 0, /*bulk_enabled=*/false);
  UdpTransport udp;
  udp.add_endpoint_override(kAgent, server.address());
  SimulatedTransport reg;
  reg.register_agent(kAgent, view);
  CHECK(udp.walk(kAgent, oids::cdp_cache_table(), kCreds, {}).varbinds ==
        reg.walk(kAgent, oids::cdp_cache_table(), kCreds, {}).varbinds);
}

TEST_CASE("UDP backend times out on a wrong community") {
  UdpAgentServer server(two_neighbor_view(), "secret");
  UdpTransport udp;
  udp.add_endpoint_override(kAgent, server.address());
  TransportConfig cfg;
  cfg.timeout = std::chrono::milliseconds(100);
  cfg.retries = 1;
  const auto start = std::chrono::steady_clock::now();
  CHECK_THROWS_AS(udp.get(kAgent, std::vector<Oid>{oids::sys_name()}, kCreds, cfg), UnreachableError);
  CHECK(std::chrono::steady_clock::now() - start >= std::chrono::milliseconds(180));
  CHECK_NOTHROW(udp.get(kAgent, std::vector<Oid>{oids::sys_name()}, Credentials("secret"), cfg));
}

TEST_CASE("answer_request ignores garbage") {
  const std::vector<std::uint8_t> junk{0x01, 0x02, 0x03};
  CHECK_FALSE(answer_request(two_neighbor_view(), "public", junk).has_value());
}
