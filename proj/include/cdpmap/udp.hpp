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

// SNMPv2c over UDP: a client backend for SnmpTransport and a small agent
// that serves a static MibView, used for loopback testing.

#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>

#include "cdpmap/ber.hpp"
#include "cdpmap/transport.hpp"

namespace cdpmap {

class UdpTransport final : public SnmpTransport {
 public:
  /// Sends requests for `logical` to `endpoint` instead. Lets a crawl over
  /// simulated addresses reach agents served on loopback ports.
  void add_endpoint_override(const AgentAddress& logical, const AgentAddress& endpoint);

 protected:
  std::vector<VarBind> do_get(const AgentAddress& agent, std::span<const Oid> oids, const Credentials& creds,
                              const TransportConfig& cfg) override;
  std::vector<VarBind> do_get_next(const AgentAddress& agent, const Oid& oid, const Credentials& creds,
                                   const TransportConfig& cfg) override;
  std::vector<VarBind> do_get_bulk(const AgentAddress& agent, const Oid& oid, unsigned max_repetitions,
                                   const Credentials& creds, const TransportConfig& cfg) override;

 private:
  std::vector<VarBind> exchange(const AgentAddress& agent, ber::RequestMessage request, const TransportConfig& cfg);
  AgentAddress resolve(const AgentAddress& agent) const;

  mutable std::mutex mutex_;
  std::map<AgentAddress, AgentAddress> overrides_;
  std::atomic<std::int32_t> next_request_id_{1};
};

/// Builds the response datagram for one request against `view`. Returns
/// nullopt when the request must be dropped silently (undecodable, or
/// wrong community), as a real agent would.
std::optional<ber::Bytes> answer_request(const MibView& view, const std::string& community,
                                         std::span<const std::uint8_t> datagram, bool bulk_enabled = true);

/// Serves one MibView on a loopback UDP port from a background thread.
class UdpAgentServer {
 public:
  /// Binds 127.0.0.1:`port` (0 picks an ephemeral port) and starts serving.
  UdpAgentServer(MibView view, std::string community, std::uint16_t port = 0, bool bulk_enabled = true);
  ~UdpAgentServer();

  UdpAgentServer(const UdpAgentServer&) = delete;
  UdpAgentServer& operator=(const UdpAgentServer&) = delete;

  AgentAddress address() const { return AgentAddress(Ipv4(127, 0, 0, 1), port_); }
  std::size_t requests_served() const { return served_.load(); }

 private:
  void serve(std::stop_token stop);

  MibView view_;
  std::string community_;
  bool bulk_enabled_;
  int fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<std::size_t> served_{0};
  std::jthread thread_;
};

}  // namespace cdpmap
