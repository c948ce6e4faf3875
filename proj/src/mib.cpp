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

#include "cdpmap/mib.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <optional>
#include <stdexcept>
#include <tuple>

#include "cdpmap/error.hpp"

namespace cdpmap {

Oid::Oid(std::initializer_list<Arc> arcs) : arcs_(arcs) { validate(); }

Oid::Oid(std::vector<Arc> arcs) : arcs_(std::move(arcs)) { validate(); }

void Oid::validate() const {
  if (arcs_.size() < 2) throw std::invalid_argument("OID needs at least two arcs");
  if (arcs_[0] > 2) throw std::invalid_argument("OID first arc must be 0, 1 or 2");
  if (arcs_[0] < 2 && arcs_[1] > 39)
    throw std::invalid_argument("OID second arc must be <= 39 under arcs 0 and 1");
}

bool Oid::is_prefix_of(const Oid& other) const {
  return arcs_.size() <= other.arcs_.size() &&
         std::equal(arcs_.begin(), arcs_.end(), other.arcs_.begin());
}

Oid Oid::child(std::initializer_list<Arc> suffix) const {
  return child(std::span<const Arc>(suffix.begin(), suffix.size()));
}

Oid Oid::child(std::span<const Arc> suffix) const {
  std::vector<Arc> arcs = arcs_;
  arcs.insert(arcs.end(), suffix.begin(), suffix.end());
  return Oid(std::move(arcs));
}

std::span<const Oid::Arc> Oid::suffix_after(const Oid& prefix) const {
  if (!prefix.is_prefix_of(*this)) throw std::invalid_argument(prefix.to_string() + " is not a prefix of " + to_string());
  return std::span<const Arc>(arcs_).subspan(prefix.size());
}

std::string Oid::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < arcs_.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(arcs_[i]);
  }
  return out;
}

Oid parse_oid(std::string_view text) {
  if (text.empty()) throw OidParseError(1, "empty OID");
  std::vector<Oid::Arc> arcs;
  std::size_t start = 0;
  while (true) {
    const std::size_t position = arcs.size() + 1;
    const std::size_t dot = text.find('.', start);
    const std::string_view token = text.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
    if (token.empty()) throw OidParseError(position, "empty arc at position " + std::to_string(position));
    Oid::Arc value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec == std::errc::result_out_of_range)
      throw OidParseError(position, "arc " + std::to_string(position) + " out of range");
    if (ec != std::errc{} || ptr != token.data() + token.size())
      throw OidParseError(position, "non-digit in arc " + std::to_string(position));
    arcs.push_back(value);
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  if (arcs.size() < 2) throw OidParseError(arcs.size() + 1, "OID needs at least two arcs");
  if (arcs[0] > 2) throw OidParseError(1, "first arc must be 0, 1 or 2");
  if (arcs[0] < 2 && arcs[1] > 39) throw OidParseError(2, "second arc must be <= 39");
  return Oid(std::move(arcs));
}

SnmpValue SnmpValue::ip_address(Ipv4 ip) {
  auto o = ip.octets();
  return SnmpValue(Kind::ip_address, std::string(o.begin(), o.end()));
}

Ipv4 SnmpValue::as_ip() const {
  const std::string& raw = std::get<std::string>(payload_);
  if (raw.size() != 4) throw std::invalid_argument("address payload is not four octets");
  return Ipv4(static_cast<std::uint8_t>(raw[0]), static_cast<std::uint8_t>(raw[1]),
              static_cast<std::uint8_t>(raw[2]), static_cast<std::uint8_t>(raw[3]));
}

std::string_view to_string(SnmpValue::Kind kind) {
  switch (kind) {
    case SnmpValue::Kind::integer: return "integer";
    case SnmpValue::Kind::octet_string: return "octet-string";
    case SnmpValue::Kind::object_identifier: return "object-identifier";
    case SnmpValue::Kind::ip_address: return "ip-address";
    case SnmpValue::Kind::counter: return "counter";
    case SnmpValue::Kind::gauge: return "gauge";
    case SnmpValue::Kind::time_ticks: return "time-ticks";
    case SnmpValue::Kind::end_of_mib_view: return "end-of-mib-view";
    case SnmpValue::Kind::no_such_object: return "no-such-object";
  }
  return "unknown";
}

std::string SnmpValue::to_string() const {
  switch (kind_) {
    case Kind::integer: return std::to_string(as_integer());
    case Kind::octet_string: return '"' + as_octets() + '"';
    case Kind::object_identifier: return as_oid().to_string();
    case Kind::ip_address: return as_ip().to_string();
    case Kind::counter:
    case Kind::gauge:
    case Kind::time_ticks: return std::to_string(as_unsigned());
    default: return std::string(cdpmap::to_string(kind_));
  }
}

void check_strictly_increasing(std::span<const VarBind> varbinds) {
  for (std::size_t i = 1; i < varbinds.size(); ++i) {
    if (!(varbinds[i - 1].oid < varbinds[i].oid)) {
      throw OrderingError("varbind " + varbinds[i].oid.to_string() + " does not follow " +
                          varbinds[i - 1].oid.to_string());
    }
  }
}

namespace oids {
const Oid& cdp_cache_table() {
  static const Oid oid{1, 3, 6, 1, 4, 1, 9, 9, 23, 1, 2, 1};
  return oid;
}
const Oid& cdp_cache_entry() {
  static const Oid oid = cdp_cache_table().child({1});
  return oid;
}
const Oid& sys_name() {
  static const Oid oid{1, 3, 6, 1, 2, 1, 1, 5, 0};
  return oid;
}
const Oid& if_descr() {
  static const Oid oid{1, 3, 6, 1, 2, 1, 2, 2, 1, 2};
  return oid;
}
const Oid& if_admin_status() {
  static const Oid oid{1, 3, 6, 1, 2, 1, 2, 2, 1, 7};
  return oid;
}
const Oid& dot1d_base_port_if_index() {
  static const Oid oid{1, 3, 6, 1, 2, 1, 17, 1, 4, 1, 2};
  return oid;
}
const Oid& dot1d_stp_port_state() {
  static const Oid oid{1, 3, 6, 1, 2, 1, 17, 2, 15, 1, 3};
  return oid;
}
}  // namespace oids

namespace {

struct PartialRow {
  std::optional<std::int64_t> address_type;
  const SnmpValue* address = nullptr;
  const SnmpValue* device_id = nullptr;
  const SnmpValue* device_port = nullptr;
};

std::string row_label(std::uint32_t if_index, std::uint32_t device_index) {
  return "row (" + std::to_string(if_index) + "," + std::to_string(device_index) + ")";
}

}  // namespace

std::vector<CdpNeighborEntry> decode_cdp_cache_rows(std::span<const VarBind> varbinds,
                                                    std::vector<std::string>* warnings) {
  check_strictly_increasing(varbinds);

  const Oid& entry = oids::cdp_cache_entry();
  std::map<std::pair<std::uint32_t, std::uint32_t>, PartialRow> rows;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::string> bad_rows;

  auto fail = [&](std::uint32_t if_index, std::uint32_t device_index, const std::string& what) {
    const std::string message = row_label(if_index, device_index) + ": " + what;
    if (!warnings) throw DecodeError(if_index, device_index, message);
    bad_rows.emplace(std::make_pair(if_index, device_index), message);
  };

  for (const VarBind& vb : varbinds) {
    if (!entry.contains(vb.oid)) continue;
    auto suffix = vb.oid.suffix_after(entry);
    const Oid::Arc column = suffix[0];
    if (column != oids::kCdpCacheAddressType && column != oids::kCdpCacheAddress &&
        column != oids::kCdpCacheDeviceId && column != oids::kCdpCacheDevicePort) {
      continue;
    }
    if (suffix.size() != 3) {
      const std::uint32_t if_index = suffix.size() > 1 ? suffix[1] : 0;
      const std::uint32_t device_index = suffix.size() > 2 ? suffix[2] : 0;
      fail(if_index, device_index, "malformed index in " + vb.oid.to_string());
      continue;
    }
    const std::uint32_t if_index = suffix[1];
    const std::uint32_t device_index = suffix[2];
    if (if_index == 0 || device_index == 0) {
      fail(if_index, device_index, "zero index in " + vb.oid.to_string());
      continue;
    }
    if (vb.value.is_exception()) continue;

    PartialRow& row = rows[{if_index, device_index}];
    switch (column) {
      case oids::kCdpCacheAddressType:
        if (vb.value.kind() != SnmpValue::Kind::integer) {
          fail(if_index, device_index, "address type is not an integer");
          continue;
        }
        row.address_type = vb.value.as_integer();
        break;
      case oids::kCdpCacheAddress: row.address = &vb.value; break;
      case oids::kCdpCacheDeviceId: row.device_id = &vb.value; break;
      case oids::kCdpCacheDevicePort: row.device_port = &vb.value; break;
    }
  }

  std::vector<CdpNeighborEntry> out;
  for (const auto& [index, row] : rows) {
    const auto [if_index, device_index] = index;
    if (bad_rows.contains(index)) continue;
    if (!row.address || !row.device_id || !row.device_port) continue;
    if (row.address_type && *row.address_type != oids::kCdpAddressTypeIp) continue;

    const SnmpValue::Kind addr_kind = row.address->kind();
    if (addr_kind != SnmpValue::Kind::octet_string && addr_kind != SnmpValue::Kind::ip_address) {
      fail(if_index, device_index, "address column has kind " + std::string(to_string(addr_kind)));
      continue;
    }
    if (row.address->as_octets().size() != 4) {
      fail(if_index, device_index,
           "address payload has " + std::to_string(row.address->as_octets().size()) + " octets, expected 4");
      continue;
    }
    if (row.device_id->kind() != SnmpValue::Kind::octet_string ||
        row.device_port->kind() != SnmpValue::Kind::octet_string) {
      fail(if_index, device_index, "device id and port columns must be octet strings");
      continue;
    }
    const Ipv4 address = row.address->as_ip();
    if (address.is_zero()) {
      fail(if_index, device_index, "neighbor address 0.0.0.0");
      continue;
    }
    out.push_back(CdpNeighborEntry{if_index, device_index, address, row.device_id->as_octets(),
                                   row.device_port->as_octets()});
  }

  if (warnings) {
    for (const auto& [index, message] : bad_rows) warnings->push_back(message);
  }
  return out;
}

std::vector<VarBind> encode_cdp_cache_rows(std::span<const CdpNeighborEntry> entries) {
  MibView view;
  const Oid& entry = oids::cdp_cache_entry();
  for (const CdpNeighborEntry& e : entries) {
    auto cell = [&](Oid::Arc column) { return entry.child({column, e.local_if_index, e.device_index}); };
    view.insert_or_assign(cell(oids::kCdpCacheAddressType), SnmpValue::integer(oids::kCdpAddressTypeIp));
    auto octets = e.neighbor_address.octets();
    view.insert_or_assign(cell(oids::kCdpCacheAddress),
                          SnmpValue::octet_string(std::string(octets.begin(), octets.end())));
    view.insert_or_assign(cell(oids::kCdpCacheDeviceId), SnmpValue::octet_string(e.neighbor_device_id));
    view.insert_or_assign(cell(oids::kCdpCacheDevicePort), SnmpValue::octet_string(e.neighbor_port));
  }
  std::vector<VarBind> out;
  out.reserve(view.size());
  for (auto& [oid, value] : view) out.push_back(VarBind{oid, value});
  return out;
}

}  // namespace cdpmap
