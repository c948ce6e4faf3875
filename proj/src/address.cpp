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

#include "cdpmap/address.hpp"

#include <charconv>
#include <stdexcept>

namespace cdpmap {

std::optional<Ipv4> Ipv4::parse(std::string_view text) {
  std::uint32_t value = 0;
  const char* p = text.data();
  const char* end = text.data() + text.size();
  for (int i = 0; i < 4; ++i) {
    if (i > 0) {
      if (p == end || *p != '.') return std::nullopt;
      ++p;
    }
    if (p == end || *p < '0' || *p > '9') return std::nullopt;
    // Reject leading zeros ("01") to keep the textual form canonical.
    if (*p == '0' && p + 1 != end && p[1] >= '0' && p[1] <= '9') return std::nullopt;
    unsigned octet = 0;
    auto [next, ec] = std::from_chars(p, end, octet);
    if (ec != std::errc{} || octet > 255 || next - p > 3) return std::nullopt;
    p = next;
    value = (value << 8) | octet;
  }
  if (p != end) return std::nullopt;
  return Ipv4(value);
}

Ipv4 Ipv4::from_string(std::string_view text) {
  auto ip = parse(text);
  if (!ip) throw std::invalid_argument("invalid IPv4 address '" + std::string(text) + "'");
  return *ip;
}

std::string Ipv4::to_string() const {
  auto o = octets();
  return std::to_string(o[0]) + '.' + std::to_string(o[1]) + '.' + std::to_string(o[2]) + '.' +
         std::to_string(o[3]);
}

AgentAddress::AgentAddress(Ipv4 ip_, std::uint16_t port_) : ip(ip_), port(port_) {
  if (port == 0) throw std::invalid_argument("agent port must be in [1, 65535]");
}

std::string AgentAddress::to_string() const {
  if (port == kDefaultPort) return ip.to_string();
  return ip.to_string() + ':' + std::to_string(port);
}

}  // namespace cdpmap
