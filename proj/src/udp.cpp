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

#include "cdpmap/udp.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <system_error>

#include "cdpmap/error.hpp"

namespace cdpmap {

namespace {

constexpr std::size_t kMaxDatagram = 65535;

class Socket {
 public:
  Socket() : fd_(::socket(AF_INET, SOCK_DGRAM, 0)) {
    if (fd_ < 0) throw std::system_error(errno, std::generic_category(), "socket");
  }
  ~Socket() {
    if (fd_ >= 0) ::close(fd_);
  }
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  int fd() const { return fd_; }

 private:
  int fd_;
};

sockaddr_in to_sockaddr(const AgentAddress& agent) {
  sockaddr_in sa{};
  sa.sin_family = AF_INET;
  sa.sin_port = htons(agent.port);
  sa.sin_addr.s_addr = htonl(agent.ip.value());
  return sa;
}

}  // namespace

void UdpTransport::add_endpoint_override(const AgentAddress& logical, const AgentAddress& endpoint) {
  std::lock_guard lock(mutex_);
  overrides_.insert_or_assign(logical, endpoint);
}

AgentAddress UdpTransport::resolve(const AgentAddress& agent) const {
  std::lock_guard lock(mutex_);
  auto it = overrides_.find(agent);
  return it == overrides_.end() ? agent : it->second;
}

std::vector<VarBind> UdpTransport::exchange(const AgentAddress& agent, ber::RequestMessage request,
                                            const TransportConfig& cfg) {
  const AgentAddress endpoint = resolve(agent);
  const sockaddr_in dest = to_sockaddr(endpoint);
  Socket sock;
  std::vector<std::uint8_t> buffer(kMaxDatagram);

  for (unsigned attempt = 0; attempt <= cfg.retries; ++attempt) {
    request.request_id = next_request_id_.fetch_add(1) & 0x7FFFFFFF;
    const ber::Bytes datagram = ber::encode(request);
    if (::sendto(sock.fd(), datagram.data(), datagram.size(), 0, reinterpret_cast<const sockaddr*>(&dest),
                 sizeof dest) < 0) {
      throw UnreachableError(agent, std::strerror(errno));
    }

    const auto deadline = std::chrono::steady_clock::now() + cfg.timeout;
    while (true) {
      const auto remaining =
          std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
      if (remaining.count() <= 0) break;
      pollfd pfd{sock.fd(), POLLIN, 0};
      const int ready = ::poll(&pfd, 1, static_cast<int>(remaining.count()));
      if (ready < 0) {
        if (errno == EINTR) continue;
        throw std::system_error(errno, std::generic_category(), "poll");
      }
      if (ready == 0) break;

      sockaddr_in from{};
      socklen_t from_len = sizeof from;
      const ssize_t n = ::recvfrom(sock.fd(), buffer.data(), buffer.size(), 0, reinterpret_cast<sockaddr*>(&from),
                                   &from_len);
      if (n < 0) {
        // ICMP port unreachable surfaces here on connected paths.
        if (errno == ECONNREFUSED) break;
        if (errno == EINTR) continue;
        throw std::system_error(errno, std::generic_category(), "recvfrom");
      }
      ber::ResponseMessage response;
      try {
        response = ber::decode_response(std::span(buffer.data(), static_cast<std::size_t>(n)));
      } catch (const ProtocolError&) {
        continue;
      }
      if (response.request_id != request.request_id) continue;
      if (response.error_status != ber::kNoError) {
        throw AgentError(response.error_status, "agent " + agent.to_string() + " returned error-status " +
                                                    std::to_string(response.error_status));
      }
      return std::move(response.varbinds);
    }
  }
  throw UnreachableError(agent, "no response after " + std::to_string(cfg.retries + 1) + " attempt(s)");
}

std::vector<VarBind> UdpTransport::do_get(const AgentAddress& agent, std::span<const Oid> oids,
                                          const Credentials& creds, const TransportConfig& cfg) {
  ber::RequestMessage request;
  request.community = creds.community();
  request.type = ber::PduType::get_request;
  request.oids.assign(oids.begin(), oids.end());
  return exchange(agent, std::move(request), cfg);
}

std::vector<VarBind> UdpTransport::do_get_next(const AgentAddress& agent, const Oid& oid, const Credentials& creds,
                                               const TransportConfig& cfg) {
  ber::RequestMessage request;
  request.community = creds.community();
  request.type = ber::PduType::get_next_request;
  request.oids = {oid};
  return exchange(agent, std::move(request), cfg);
}

std::vector<VarBind> UdpTransport::do_get_bulk(const AgentAddress& agent, const Oid& oid, unsigned max_repetitions,
                                               const Credentials& creds, const TransportConfig& cfg) {
  ber::RequestMessage request;
  request.community = creds.community();
  request.type = ber::PduType::get_bulk_request;
  request.non_repeaters = 0;
  request.max_repetitions = static_cast<std::int32_t>(max_repetitions);
  request.oids = {oid};
  return exchange(agent, std::move(request), cfg);
}

std::optional<ber::Bytes> answer_request(const MibView& view, const std::string& community,
                                         std::span<const std::uint8_t> datagram, bool bulk_enabled) {
  ber::RequestMessage request;
  try {
    request = ber::decode_request(datagram);
  } catch (const ProtocolError&) {
    return std::nullopt;
  }
  if (request.community != community) return std::nullopt;

  ber::ResponseMessage response;
  response.community = request.community;
  response.request_id = request.request_id;

  switch (request.type) {
    case ber::PduType::get_request:
      for (const Oid& oid : request.oids) {
        auto it = view.find(oid);
        response.varbinds.push_back(VarBind{oid, it == view.end() ? SnmpValue::no_such_object() : it->second});
      }
      break;
    case ber::PduType::get_next_request:
      for (const Oid& oid : request.oids) {
        auto next = bulk_from_view(view, oid, 1);
        response.varbinds.push_back(std::move(next.front()));
      }
      break;
    case ber::PduType::get_bulk_request: {
      if (!bulk_enabled) {
        response.error_status = ber::kGenErr;
        response.error_index = 1;
        for (const Oid& oid : request.oids) response.varbinds.push_back(VarBind{oid, SnmpValue::no_such_object()});
        break;
      }
      const auto non_repeaters =
          static_cast<std::size_t>(std::clamp<std::int32_t>(request.non_repeaters, 0, static_cast<std::int32_t>(request.oids.size())));
      const auto repetitions = static_cast<unsigned>(std::max<std::int32_t>(request.max_repetitions, 0));
      for (std::size_t i = 0; i < non_repeaters; ++i) {
        response.varbinds.push_back(bulk_from_view(view, request.oids[i], 1).front());
      }
      // Repeaters are interleaved per repetition as RFC 3416 requires.
      std::vector<std::vector<VarBind>> columns;
      for (std::size_t i = non_repeaters; i < request.oids.size(); ++i) {
        columns.push_back(bulk_from_view(view, request.oids[i], repetitions));
      }
      for (unsigned r = 0; r < repetitions; ++r) {
        bool any = false;
        for (auto& column : columns) {
          if (r < column.size()) {
            response.varbinds.push_back(column[r]);
            any = true;
          }
        }
        if (!any) break;
      }
      break;
    }
    case ber::PduType::response: return std::nullopt;
  }

  ber::Bytes out = ber::encode(response);
  if (out.size() > kMaxDatagram - 28) {
    ber::ResponseMessage too_big;
    too_big.community = response.community;
    too_big.request_id = response.request_id;
    too_big.error_status = ber::kTooBig;
    return ber::encode(too_big);
  }
  return out;
}

UdpAgentServer::UdpAgentServer(MibView view, std::string community, std::uint16_t port, bool bulk_enabled)
    : view_(std::move(view)), community_(std::move(community)), bulk_enabled_(bulk_enabled) {
  fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
  if (fd_ < 0) throw std::system_error(errno, std::generic_category(), "socket");
  sockaddr_in sa{};
  sa.sin_family = AF_INET;
  sa.sin_port = htons(port);
  sa.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  if (::bind(fd_, reinterpret_cast<const sockaddr*>(&sa), sizeof sa) < 0) {
    const int err = errno;
    ::close(fd_);
    throw std::system_error(err, std::generic_category(), "bind");
  }
  socklen_t len = sizeof sa;
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&sa), &len);
  port_ = ntohs(sa.sin_port);
  thread_ = std::jthread([this](std::stop_token stop) { serve(stop); });
}

UdpAgentServer::~UdpAgentServer() {
  thread_.request_stop();
  if (thread_.joinable()) thread_.join();
  ::close(fd_);
}

void UdpAgentServer::serve(std::stop_token stop) {
  std::vector<std::uint8_t> buffer(kMaxDatagram);
  while (!stop.stop_requested()) {
    pollfd pfd{fd_, POLLIN, 0};
    if (::poll(&pfd, 1, 20) <= 0) continue;
    sockaddr_in from{};
    socklen_t from_len = sizeof from;
    const ssize_t n =
        ::recvfrom(fd_, buffer.data(), buffer.size(), 0, reinterpret_cast<sockaddr*>(&from), &from_len);
    if (n <= 0) continue;
    auto reply = answer_request(view_, community_, std::span(buffer.data(), static_cast<std::size_t>(n)), bulk_enabled_);
    if (!reply) continue;
    ::sendto(fd_, reply->data(), reply->size(), 0, reinterpret_cast<const sockaddr*>(&from), from_len);
    ++served_;
  }
}

}  // namespace cdpmap
