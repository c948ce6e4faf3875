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

#include "cdpmap/transport.hpp"

#include <stdexcept>

#include "cdpmap/ber.hpp"
#include "cdpmap/error.hpp"

namespace cdpmap {

Credentials::Credentials(std::string community) : community_(std::move(community)) {
  if (community_.empty()) throw std::invalid_argument("community must not be empty");
}

void TransportConfig::validate() const {
  if (timeout.count() <= 0) throw std::invalid_argument("timeout must be positive");
  if (max_repetitions < 1) throw std::invalid_argument("max-repetitions must be at least 1");
}

std::vector<VarBind> SnmpTransport::get(const AgentAddress& agent, std::span<const Oid> oids,
                                        const Credentials& creds, const TransportConfig& cfg) {
  if (oids.empty()) throw std::invalid_argument("get needs at least one OID");
  cfg.validate();
  record(agent, RequestRecord::Op::get, oids.front());
  auto out = do_get(agent, oids, creds, cfg);
  if (out.size() != oids.size()) throw ProtocolError("agent " + agent.to_string() + " answered with wrong varbind count");
  for (std::size_t i = 0; i < oids.size(); ++i) {
    if (out[i].oid != oids[i]) throw ProtocolError("agent " + agent.to_string() + " answered for a different OID");
  }
  return out;
}

WalkResult SnmpTransport::walk(const AgentAddress& agent, const Oid& base, const Credentials& creds,
                               const TransportConfig& cfg) {
  cfg.validate();
  WalkResult result;
  Oid cursor = base;
  while (true) {
    std::vector<VarBind> batch;
    if (!bulk_disabled(agent)) {
      record(agent, RequestRecord::Op::get_bulk, cursor);
      ++result.request_count;
      try {
        batch = do_get_bulk(agent, cursor, cfg.max_repetitions, creds, cfg);
      } catch (const AgentError&) {
        disable_bulk(agent);
        continue;
      }
    } else {
      record(agent, RequestRecord::Op::get_next, cursor);
      ++result.request_count;
      batch = do_get_next(agent, cursor, creds, cfg);
    }
    if (batch.empty()) return result;
    for (VarBind& vb : batch) {
      if (vb.value.kind() == SnmpValue::Kind::end_of_mib_view) return result;
      if (!(cursor < vb.oid)) {
        throw ProtocolError("agent " + agent.to_string() + " returned " + vb.oid.to_string() +
                            " which does not follow " + cursor.to_string());
      }
      if (!base.contains(vb.oid)) return result;
      cursor = vb.oid;
      result.varbinds.push_back(std::move(vb));
    }
  }
}

std::vector<RequestRecord> SnmpTransport::request_log() const {
  std::lock_guard lock(mutex_);
  return log_;
}

void SnmpTransport::record(const AgentAddress& agent, RequestRecord::Op op, const Oid& oid) {
  std::lock_guard lock(mutex_);
  log_.push_back(RequestRecord{agent, op, oid});
}

bool SnmpTransport::bulk_disabled(const AgentAddress& agent) const {
  std::lock_guard lock(mutex_);
  return no_bulk_.contains(agent);
}

void SnmpTransport::disable_bulk(const AgentAddress& agent) {
  std::lock_guard lock(mutex_);
  no_bulk_.insert(agent);
}

std::vector<VarBind> bulk_from_view(const MibView& view, const Oid& oid, unsigned max_repetitions) {
  std::vector<VarBind> out;
  auto it = view.upper_bound(oid);
  for (unsigned i = 0; i < max_repetitions; ++i, ++it) {
    if (it == view.end()) {
      out.push_back(VarBind{out.empty() ? oid : out.back().oid, SnmpValue::end_of_mib_view()});
      break;
    }
    out.push_back(VarBind{it->first, it->second});
  }
  return out;
}

void SimulatedTransport::register_agent(const AgentAddress& address, MibView view) {
  if (!agents_.emplace(address, Agent{std::move(view), true}).second)
    throw RegistrationError("agent " + address.to_string() + " already registered");
}

void SimulatedTransport::register_agent_without_bulk(const AgentAddress& address, MibView view) {
  if (!agents_.emplace(address, Agent{std::move(view), false}).second)
    throw RegistrationError("agent " + address.to_string() + " already registered");
}

const MibView* SimulatedTransport::view(const AgentAddress& address) const {
  auto it = agents_.find(address);
  return it == agents_.end() ? nullptr : &it->second.view;
}

const SimulatedTransport::Agent& SimulatedTransport::find(const AgentAddress& address) const {
  auto it = agents_.find(address);
  if (it == agents_.end()) throw UnreachableError(address, "no simulated agent");
  return it->second;
}

std::vector<VarBind> SimulatedTransport::do_get(const AgentAddress& agent, std::span<const Oid> oids,
                                                const Credentials&, const TransportConfig&) {
  const MibView& view = find(agent).view;
  std::vector<VarBind> out;
  out.reserve(oids.size());
  for (const Oid& oid : oids) {
    auto it = view.find(oid);
    out.push_back(VarBind{oid, it == view.end() ? SnmpValue::no_such_object() : it->second});
  }
  return out;
}

std::vector<VarBind> SimulatedTransport::do_get_next(const AgentAddress& agent, const Oid& oid,
                                                     const Credentials&, const TransportConfig&) {
  return bulk_from_view(find(agent).view, oid, 1);
}

std::vector<VarBind> SimulatedTransport::do_get_bulk(const AgentAddress& agent, const Oid& oid,
                                                     unsigned max_repetitions, const Credentials&,
                                                     const TransportConfig&) {
  const Agent& a = find(agent);
  if (!a.bulk) throw AgentError(ber::kGenErr, "agent " + agent.to_string() + " rejected GETBULK");
  return bulk_from_view(a.view, oid, max_repetitions);
}

void register_simulated_agent(SimulatedTransport& registry, const AgentAddress& address, MibView view) {
  registry.register_agent(address, std::move(view));
}

}  // namespace cdpmap
