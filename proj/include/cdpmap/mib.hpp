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

// MIB object model: OIDs, SNMP values, varbinds and the CDP cache table codec.

#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cdpmap/address.hpp"

namespace cdpmap {

/// Object identifier. Always holds at least two arcs, with the first arc
/// in [0, 2] and the second in [0, 39] unless the first arc is 2.
/// Ordering is lexicographic over arcs; a prefix sorts before its extensions.
class Oid {
 public:
  using Arc = std::uint32_t;

  /// Throws std::invalid_argument if the arcs violate the invariants.
  Oid(std::initializer_list<Arc> arcs);
  explicit Oid(std::vector<Arc> arcs);

  const std::vector<Arc>& arcs() const { return arcs_; }
  std::size_t size() const { return arcs_.size(); }
  Arc operator[](std::size_t i) const { return arcs_[i]; }

  /// True when this OID is `other` or an ancestor of it.
  bool is_prefix_of(const Oid& other) const;
  /// True when `other` lies strictly inside this subtree.
  bool contains(const Oid& other) const { return other.size() > size() && is_prefix_of(other); }

  /// Returns this OID extended by the given arcs.
  Oid child(std::initializer_list<Arc> suffix) const;
  Oid child(std::span<const Arc> suffix) const;
  /// Arcs that follow `prefix`; `prefix` must be a prefix of this OID.
  std::span<const Arc> suffix_after(const Oid& prefix) const;

  std::string to_string() const;

  friend std::strong_ordering operator<=>(const Oid& a, const Oid& b) {
    return a.arcs_ <=> b.arcs_;
  }
  friend bool operator==(const Oid&, const Oid&) = default;

 private:
  void validate() const;
  std::vector<Arc> arcs_;
};

/// Parses dotted-decimal text ("1.3.6.1"). Throws OidParseError naming the
/// 1-based arc at fault.
Oid parse_oid(std::string_view text);

/// Three-way comparison of two OIDs.
inline std::strong_ordering compare_oids(const Oid& a, const Oid& b) { return a <=> b; }

/// A typed SNMP value. end-of-mib-view and no-such-object carry no payload;
/// ip-address always carries exactly four octets.
class SnmpValue {
 public:
  enum class Kind {
    integer,
    octet_string,
    object_identifier,
    ip_address,
    counter,
    gauge,
    time_ticks,
    end_of_mib_view,
    no_such_object,
  };

  static SnmpValue integer(std::int64_t v) { return SnmpValue(Kind::integer, v); }
  static SnmpValue octet_string(std::string bytes) { return SnmpValue(Kind::octet_string, std::move(bytes)); }
  static SnmpValue object_identifier(Oid oid) { return SnmpValue(Kind::object_identifier, std::move(oid)); }
  static SnmpValue ip_address(Ipv4 ip);
  static SnmpValue counter(std::uint64_t v) { return SnmpValue(Kind::counter, v); }
  static SnmpValue gauge(std::uint32_t v) { return SnmpValue(Kind::gauge, std::uint64_t{v}); }
  static SnmpValue time_ticks(std::uint32_t v) { return SnmpValue(Kind::time_ticks, std::uint64_t{v}); }
  static SnmpValue end_of_mib_view() { return SnmpValue(Kind::end_of_mib_view, std::monostate{}); }
  static SnmpValue no_such_object() { return SnmpValue(Kind::no_such_object, std::monostate{}); }

  Kind kind() const { return kind_; }
  bool is_exception() const { return kind_ == Kind::end_of_mib_view || kind_ == Kind::no_such_object; }

  /// Payload accessors throw std::bad_variant_access on a kind mismatch.
  std::int64_t as_integer() const { return std::get<std::int64_t>(payload_); }
  std::uint64_t as_unsigned() const { return std::get<std::uint64_t>(payload_); }
  /// Raw octets for octet-string and ip-address values.
  const std::string& as_octets() const { return std::get<std::string>(payload_); }
  const Oid& as_oid() const { return std::get<Oid>(payload_); }
  Ipv4 as_ip() const;

  std::string to_string() const;

  friend bool operator==(const SnmpValue&, const SnmpValue&) = default;

 private:
  using Payload = std::variant<std::monostate, std::int64_t, std::uint64_t, std::string, Oid>;
  SnmpValue(Kind kind, Payload payload) : kind_(kind), payload_(std::move(payload)) {}

  Kind kind_;
  Payload payload_;
};

std::string_view to_string(SnmpValue::Kind kind);

struct VarBind {
  Oid oid;
  SnmpValue value;

  friend bool operator==(const VarBind&, const VarBind&) = default;
};

/// An agent's MIB view: ordered OID -> value mapping.
using MibView = std::map<Oid, SnmpValue>;

/// Throws OrderingError unless the varbinds are strictly increasing by OID.
void check_strictly_increasing(std::span<const VarBind> varbinds);

/// One row of a device's CDP neighbor cache.
struct CdpNeighborEntry {
  std::uint32_t local_if_index = 0;
  std::uint32_t device_index = 0;
  Ipv4 neighbor_address;
  std::string neighbor_device_id;
  std::string neighbor_port;

  friend auto operator<=>(const CdpNeighborEntry&, const CdpNeighborEntry&) = default;
};

/// Well-known object identifiers read by the crawler.
namespace oids {
/// CISCO-CDP-MIB cdpCacheTable and its entry.
const Oid& cdp_cache_table();
const Oid& cdp_cache_entry();
inline constexpr Oid::Arc kCdpCacheAddressType = 3;
inline constexpr Oid::Arc kCdpCacheAddress = 4;
inline constexpr Oid::Arc kCdpCacheDeviceId = 6;
inline constexpr Oid::Arc kCdpCacheDevicePort = 7;
/// cdpCacheAddressType value for IPv4.
inline constexpr std::int64_t kCdpAddressTypeIp = 1;

/// SNMPv2-MIB sysName.0
const Oid& sys_name();
/// IF-MIB ifDescr column.
const Oid& if_descr();
/// IF-MIB ifAdminStatus column.
const Oid& if_admin_status();
/// BRIDGE-MIB dot1dBasePortIfIndex column (bridge port -> ifIndex).
const Oid& dot1d_base_port_if_index();
/// BRIDGE-MIB dot1dStpPortState column.
const Oid& dot1d_stp_port_state();
}  // namespace oids

/// dot1dStpPortState values.
enum class StpPortState : std::int64_t {
  disabled = 1,
  blocking = 2,
  listening = 3,
  learning = 4,
  forwarding = 5,
  broken = 6,
};

/// Assembles CDP cache rows from a cdpCacheTable walk.
///
/// Rows are grouped on the (ifIndex, deviceIndex) index suffix. A row is
/// emitted only when the address, device id and port columns are present and
/// the address-type column, if present, says IPv4. Rows with a missing
/// column are skipped silently. Output is ordered by (ifIndex, deviceIndex).
///
/// Throws OrderingError if the input is not strictly increasing, and
/// DecodeError for a row whose address is not four octets or whose index is
/// malformed. When `warnings` is non-null, undecodable rows are skipped and
/// described there instead of throwing DecodeError.
std::vector<CdpNeighborEntry> decode_cdp_cache_rows(std::span<const VarBind> varbinds,
                                                    std::vector<std::string>* warnings = nullptr);

/// Inverse of decode_cdp_cache_rows: column varbinds (including the
/// address-type column) for the given rows, sorted by OID.
std::vector<VarBind> encode_cdp_cache_rows(std::span<const CdpNeighborEntry> entries);

}  // namespace cdpmap
