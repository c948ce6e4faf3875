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

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace cdpmap {

/// IPv4 address held in host byte order. Ordering is numeric, which matches
/// the dotted-quad ordering operators expect.
class Ipv4 {
 public:
  constexpr Ipv4() = default;
  constexpr explicit Ipv4(std::uint32_t value) : value_(value) {}
  constexpr Ipv4(std::uint8_t a, std::uint8_t b, std::uint8_t c, std::uint8_t d)
      : value_((std::uint32_t{a} << 24) | (std::uint32_t{b} << 16) |
               (std::uint32_t{c} << 8) | std::uint32_t{d}) {}

  /// Strict dotted-quad parse; returns nullopt on anything else.
  static std::optional<Ipv4> parse(std::string_view text);
  /// Like parse() but throws std::invalid_argument.
  static Ipv4 from_string(std::string_view text);

  static Ipv4 from_octets(const std::array<std::uint8_t, 4>& octets) {
    return Ipv4(octets[0], octets[1], octets[2], octets[3]);
  }

  constexpr std::uint32_t value() const { return value_; }
  constexpr bool is_zero() const { return value_ == 0; }
  std::array<std::uint8_t, 4> octets() const {
    return {static_cast<std::uint8_t>(value_ >> 24), static_cast<std::uint8_t>(value_ >> 16),
            static_cast<std::uint8_t>(value_ >> 8), static_cast<std::uint8_t>(value_)};
  }
  std::string to_string() const;

  constexpr auto operator<=>(const Ipv4&) const = default;

 private:
  std::uint32_t value_ = 0;
};

/// SNMP agent endpoint.
struct AgentAddress {
  static constexpr std::uint16_t kDefaultPort = 161;

  Ipv4 ip;
  std::uint16_t port = kDefaultPort;

  AgentAddress() = default;
  /// Throws std::invalid_argument when port is 0.
  explicit AgentAddress(Ipv4 ip_, std::uint16_t port_ = kDefaultPort);

  std::string to_string() const;
  auto operator<=>(const AgentAddress&) const = default;
};

}  // namespace cdpmap

template <>
struct std::hash<cdpmap::Ipv4> {
  std::size_t operator()(const cdpmap::Ipv4& ip) const noexcept {
    return std::hash<std::uint32_t>{}(ip.value());
  }
};
