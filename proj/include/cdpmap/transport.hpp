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

#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <mutex>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "cdpmap/address.hpp"
#include "cdpmap/mib.hpp"

namespace cdpmap {

/// SNMPv2c community.
class Credentials {
 public:
  /// Throws std::invalid_argument on an empty community.
  explicit Credentials(std::string community);
  const std::string& community() const { return community_; }

 private:
  std::string community_;
};

struct TransportConfig {
  std::chrono::milliseconds timeout{2000};
  unsigned retries = 1;
  unsigned max_repetitions = 20;

  /// Throws std::invalid_argument unless timeout > 0 and max_repetitions >= 1.
  void validate() const;
};

struct WalkResult {
  std::vector<VarBind> varbinds;
  std::size_t request_count = 0;
};

/// One PDU as seen by a transport; used to audit crawls.
struct RequestRecord {
  enum class Op { get, get_next, get_bulk };
  AgentAddress agent;
  Op op;
  Oid first_oid;
};

/// Retrieval interface shared by the UDP client and the in-memory registry.
///
/// Backends implement the three PDU-level operations; walk() is built on
/// top of them. Implementations must be safe to call from several threads
/// at once for distinct agents.
class SnmpTransport {
 public:
  virtual ~SnmpTransport() = default;

  /// GetRequest. One varbind per requested OID in request order; absent
  /// objects come back as no-such-object. Throws std::invalid_argument on an
  /// empty OID list and UnreachableError on timeout.
  std::vector<VarBind> get(const AgentAddress& agent, std::span<const Oid> oids, const Credentials& creds,
                           const TransportConfig& cfg);

  /// Every object strictly inside `base`, in OID order, fetched with
  /// GETBULK (falling back to GETNEXT for agents that reject GETBULK).
  /// Throws UnreachableError, or ProtocolError when the agent returns
  /// non-increasing OIDs.
  WalkResult walk(const AgentAddress& agent, const Oid& base, const Credentials& creds, const TransportConfig& cfg);

  /// Snapshot of every request issued so far.
  std::vector<RequestRecord> request_log() const;

 protected:
  virtual std::vector<VarBind> do_get(const AgentAddress& agent, std::span<const Oid> oids,
                                      const Credentials& creds, const TransportConfig& cfg) = 0;
  virtual std::vector<VarBind> do_get_next(const AgentAddress& agent, const Oid& oid, const Credentials& creds,
                                           const TransportConfig& cfg) = 0;
  virtual std::vector<VarBind> do_get_bulk(const AgentAddress& agent, const Oid& oid, unsigned max_repetitions,
                                           const Credentials& creds, const TransportConfig& cfg) = 0;

 private:
  void record(const AgentAddress& agent, RequestRecord::Op op, const Oid& oid);
  bool bulk_disabled(const AgentAddress& agent) const;
  void disable_bulk(const AgentAddress& agent);

  mutable std::mutex mutex_;
  std::vector<RequestRecord> log_;
  std::set<AgentAddress> no_bulk_;
};

/// In-memory agents keyed by address. Views are registered before use and
/// then read concurrently without locking.
class SimulatedTransport final : public SnmpTransport {
 public:
  /// Throws RegistrationError if `address` is already registered.
  void register_agent(const AgentAddress& address, MibView view);
  /// Agent that answers GETBULK with genErr, to exercise the GETNEXT path.
  void register_agent_without_bulk(const AgentAddress& address, MibView view);
  bool has_agent(const AgentAddress& address) const { return agents_.contains(address); }
  const MibView* view(const AgentAddress& address) const;

 protected:
  std::vector<VarBind> do_get(const AgentAddress& agent, std::span<const Oid> oids, const Credentials& creds,
                              const TransportConfig& cfg) override;
  std::vector<VarBind> do_get_next(const AgentAddress& agent, const Oid& oid, const Credentials& creds,
                                   const TransportConfig& cfg) override;
  std::vector<VarBind> do_get_bulk(const AgentAddress& agent, const Oid& oid, unsigned max_repetitions,
                                   const Credentials& creds, const TransportConfig& cfg) override;

 private:
  struct Agent {
    MibView view;
    bool bulk = true;
  };
  const Agent& find(const AgentAddress& address) const;

  std::map<AgentAddress, Agent> agents_;
};

/// Free-function form of SimulatedTransport::register_agent.
void register_simulated_agent(SimulatedTransport& registry, const AgentAddress& address, MibView view);

/// Successor varbinds of `oid` in `view`, GETBULK style: up to
/// `max_repetitions` entries, terminated by end-of-mib-view when the view
/// runs out.
std::vector<VarBind> bulk_from_view(const MibView& view, const Oid& oid, unsigned max_repetitions);

}  // namespace cdpmap
