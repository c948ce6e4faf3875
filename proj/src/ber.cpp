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

#include "cdpmap/ber.hpp"

#include <limits>
#include <stdexcept>

#include "cdpmap/error.hpp"

namespace cdpmap::ber {

namespace {

constexpr std::uint8_t kTagInteger = 0x02;
constexpr std::uint8_t kTagOctetString = 0x04;
constexpr std::uint8_t kTagNull = 0x05;
constexpr std::uint8_t kTagOid = 0x06;
constexpr std::uint8_t kTagSequence = 0x30;
constexpr std::uint8_t kTagIpAddress = 0x40;
constexpr std::uint8_t kTagCounter32 = 0x41;
constexpr std::uint8_t kTagGauge32 = 0x42;
constexpr std::uint8_t kTagTimeTicks = 0x43;
constexpr std::uint8_t kTagOpaque = 0x44;
constexpr std::uint8_t kTagCounter64 = 0x46;
constexpr std::uint8_t kTagNoSuchObject = 0x80;
constexpr std::uint8_t kTagNoSuchInstance = 0x81;
constexpr std::uint8_t kTagEndOfMibView = 0x82;

void encode_tlv(Bytes& out, std::uint8_t tag, const Bytes& content) {
  out.push_back(tag);
  encode_length(out, content.size());
  out.insert(out.end(), content.begin(), content.end());
}

void encode_octets(Bytes& out, const std::string& bytes, std::uint8_t tag = kTagOctetString) {
  out.push_back(tag);
  encode_length(out, bytes.size());
  out.insert(out.end(), bytes.begin(), bytes.end());
}

void encode_varbinds(Bytes& out, const Bytes& list_content) { encode_tlv(out, kTagSequence, list_content); }

Bytes wrap_message(const std::string& community, PduType type, const Bytes& pdu_content) {
  Bytes body;
  encode_integer(body, kSnmpV2c);
  encode_octets(body, community);
  encode_tlv(body, static_cast<std::uint8_t>(type), pdu_content);
  Bytes out;
  encode_tlv(out, kTagSequence, body);
  return out;
}

/// Cursor over a BER buffer.
class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

  bool done() const { return pos_ == data_.size(); }

  std::uint8_t peek_tag() const {
    if (done()) throw ProtocolError("unexpected end of BER data");
    return data_[pos_];
  }

  /// Reads one TLV; returns its tag and content.
  std::pair<std::uint8_t, std::span<const std::uint8_t>> read_any() {
    const std::uint8_t tag = peek_tag();
    ++pos_;
    const std::size_t length = read_length();
    if (length > data_.size() - pos_) throw ProtocolError("BER length exceeds buffer");
    auto content = data_.subspan(pos_, length);
    pos_ += length;
    return {tag, content};
  }

  std::span<const std::uint8_t> read(std::uint8_t expected_tag) {
    auto [tag, content] = read_any();
    if (tag != expected_tag) {
      throw ProtocolError("expected BER tag " + std::to_string(expected_tag) + ", got " + std::to_string(tag));
    }
    return content;
  }

 private:
  std::size_t read_length() {
    if (done()) throw ProtocolError("missing BER length");
    const std::uint8_t first = data_[pos_++];
    if (first < 0x80) return first;
    const std::size_t count = first & 0x7F;
    if (count == 0) throw ProtocolError("indefinite BER length not allowed");
    if (count > 4) throw ProtocolError("BER length too long");
    if (count > data_.size() - pos_) throw ProtocolError("truncated BER length");
    std::size_t length = 0;
    for (std::size_t i = 0; i < count; ++i) length = (length << 8) | data_[pos_++];
    return length;
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

std::int64_t decode_integer(std::span<const std::uint8_t> content) {
  if (content.empty() || content.size() > 8) throw ProtocolError("bad INTEGER length");
  std::int64_t value = (content[0] & 0x80) ? -1 : 0;
  for (std::uint8_t b : content) value = static_cast<std::int64_t>((static_cast<std::uint64_t>(value) << 8) | b);
  return value;
}

std::int32_t decode_int32(std::span<const std::uint8_t> content) {
  const std::int64_t v = decode_integer(content);
  if (v < std::numeric_limits<std::int32_t>::min() || v > std::numeric_limits<std::int32_t>::max())
    throw ProtocolError("INTEGER out of 32-bit range");
  return static_cast<std::int32_t>(v);
}

std::uint64_t decode_unsigned(std::span<const std::uint8_t> content, std::size_t max_bytes) {
  if (content.empty()) throw ProtocolError("empty unsigned value");
  // A leading zero octet is allowed to keep the sign bit clear.
  if (content.size() > max_bytes + 1 || (content.size() == max_bytes + 1 && content[0] != 0))
    throw ProtocolError("unsigned value too large");
  std::uint64_t value = 0;
  for (std::uint8_t b : content) value = (value << 8) | b;
  return value;
}

Oid decode_oid(std::span<const std::uint8_t> content) {
  if (content.empty()) throw ProtocolError("empty OBJECT IDENTIFIER");
  constexpr std::uint64_t kMaxArc = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint64_t> sub_ids;
  std::uint64_t current = 0;
  bool in_progress = false;
  for (std::uint8_t b : content) {
    if (!in_progress && b == 0x80) throw ProtocolError("non-minimal OID sub-identifier");
    current = (current << 7) | (b & 0x7F);
    // The first sub-identifier packs two arcs, so it may exceed one arc by 80.
    if (current > kMaxArc + 80) throw ProtocolError("OID sub-identifier overflow");
    in_progress = (b & 0x80) != 0;
    if (!in_progress) {
      if (!sub_ids.empty() && current > kMaxArc) throw ProtocolError("OID sub-identifier overflow");
      sub_ids.push_back(current);
      current = 0;
    }
  }
  if (in_progress) throw ProtocolError("truncated OID sub-identifier");

  std::vector<Oid::Arc> arcs;
  arcs.reserve(sub_ids.size() + 1);
  const std::uint64_t first = sub_ids[0];
  const std::uint64_t top = first < 40 ? 0 : first < 80 ? 1 : 2;
  arcs.push_back(static_cast<Oid::Arc>(top));
  arcs.push_back(static_cast<Oid::Arc>(first - 40 * top));
  for (std::size_t i = 1; i < sub_ids.size(); ++i) arcs.push_back(static_cast<Oid::Arc>(sub_ids[i]));
  return Oid(std::move(arcs));
}

SnmpValue decode_value(std::uint8_t tag, std::span<const std::uint8_t> content) {
  switch (tag) {
    case kTagInteger: return SnmpValue::integer(decode_integer(content));
    case kTagOctetString:
    case kTagOpaque: return SnmpValue::octet_string(std::string(content.begin(), content.end()));
    case kTagOid: return SnmpValue::object_identifier(decode_oid(content));
    case kTagIpAddress:
      if (content.size() != 4) throw ProtocolError("IpAddress must be 4 octets");
      return SnmpValue::ip_address(Ipv4(content[0], content[1], content[2], content[3]));
    case kTagCounter32: return SnmpValue::counter(decode_unsigned(content, 4));
    case kTagCounter64: return SnmpValue::counter(decode_unsigned(content, 8));
    case kTagGauge32: return SnmpValue::gauge(static_cast<std::uint32_t>(decode_unsigned(content, 4)));
    case kTagTimeTicks: return SnmpValue::time_ticks(static_cast<std::uint32_t>(decode_unsigned(content, 4)));
    case kTagNoSuchObject:
    case kTagNoSuchInstance:
      if (!content.empty()) throw ProtocolError("exception value carries payload");
      return SnmpValue::no_such_object();
    case kTagEndOfMibView:
      if (!content.empty()) throw ProtocolError("exception value carries payload");
      return SnmpValue::end_of_mib_view();
    default: throw ProtocolError("unsupported value tag " + std::to_string(tag));
  }
}

struct DecodedMessage {
  std::string community;
  std::uint8_t pdu_tag;
  std::int32_t request_id;
  std::int32_t field2;
  std::int32_t field3;
  std::vector<std::pair<Oid, std::pair<std::uint8_t, std::span<const std::uint8_t>>>> varbinds;
};

DecodedMessage decode_message(std::span<const std::uint8_t> datagram) {
  Reader outer(datagram);
  Reader message(outer.read(kTagSequence));
  if (!outer.done()) throw ProtocolError("trailing bytes after SNMP message");

  const std::int64_t version = decode_integer(message.read(kTagInteger));
  if (version != kSnmpV2c) throw ProtocolError("unsupported SNMP version " + std::to_string(version));
  auto community = message.read(kTagOctetString);

  DecodedMessage out;
  out.community.assign(community.begin(), community.end());
  auto [pdu_tag, pdu_content] = message.read_any();
  if (!message.done()) throw ProtocolError("trailing bytes after PDU");
  out.pdu_tag = pdu_tag;

  Reader pdu(pdu_content);
  out.request_id = decode_int32(pdu.read(kTagInteger));
  out.field2 = decode_int32(pdu.read(kTagInteger));
  out.field3 = decode_int32(pdu.read(kTagInteger));
  Reader list(pdu.read(kTagSequence));
  if (!pdu.done()) throw ProtocolError("trailing bytes in PDU");
  while (!list.done()) {
    Reader vb(list.read(kTagSequence));
    Oid oid = decode_oid(vb.read(kTagOid));
    auto value = vb.read_any();
    if (!vb.done()) throw ProtocolError("trailing bytes in varbind");
    out.varbinds.emplace_back(std::move(oid), value);
  }
  return out;
}

}  // namespace

void encode_length(Bytes& out, std::size_t length) {
  if (length < 0x80) {
    out.push_back(static_cast<std::uint8_t>(length));
    return;
  }
  std::uint8_t buf[sizeof(std::size_t)];
  std::size_t n = 0;
  while (length) {
    buf[n++] = static_cast<std::uint8_t>(length & 0xFF);
    length >>= 8;
  }
  out.push_back(static_cast<std::uint8_t>(0x80 | n));
  while (n) out.push_back(buf[--n]);
}

void encode_integer(Bytes& out, std::int64_t value, std::uint8_t tag) {
  std::uint8_t buf[8];
  std::size_t n = 0;
  auto u = static_cast<std::uint64_t>(value);
  for (int i = 7; i >= 0; --i) buf[n++] = static_cast<std::uint8_t>(u >> (8 * i));
  // Drop redundant leading sign octets.
  std::size_t start = 0;
  while (start < 7 && ((buf[start] == 0x00 && !(buf[start + 1] & 0x80)) ||
                       (buf[start] == 0xFF && (buf[start + 1] & 0x80)))) {
    ++start;
  }
  out.push_back(tag);
  encode_length(out, 8 - start);
  out.insert(out.end(), buf + start, buf + 8);
}

void encode_unsigned(Bytes& out, std::uint64_t value, std::uint8_t tag) {
  Bytes content;
  do {
    content.insert(content.begin(), static_cast<std::uint8_t>(value & 0xFF));
    value >>= 8;
  } while (value);
  if (content[0] & 0x80) content.insert(content.begin(), 0x00);
  encode_tlv(out, tag, content);
}

void encode_oid(Bytes& out, const Oid& oid) {
  Bytes content;
  auto put_sub_id = [&](std::uint64_t v) {
    std::uint8_t buf[10];
    std::size_t n = 0;
    buf[n++] = static_cast<std::uint8_t>(v & 0x7F);
    v >>= 7;
    while (v) {
      buf[n++] = static_cast<std::uint8_t>(0x80 | (v & 0x7F));
      v >>= 7;
    }
    while (n) content.push_back(buf[--n]);
  };
  put_sub_id(std::uint64_t{oid[0]} * 40 + oid[1]);
  for (std::size_t i = 2; i < oid.size(); ++i) put_sub_id(oid[i]);
  encode_tlv(out, kTagOid, content);
}

void encode_value(Bytes& out, const SnmpValue& value) {
  using Kind = SnmpValue::Kind;
  switch (value.kind()) {
    case Kind::integer: encode_integer(out, value.as_integer()); break;
    case Kind::octet_string: encode_octets(out, value.as_octets()); break;
    case Kind::object_identifier: encode_oid(out, value.as_oid()); break;
    case Kind::ip_address: encode_octets(out, value.as_octets(), kTagIpAddress); break;
    case Kind::counter:
      encode_unsigned(out, value.as_unsigned(),
                      value.as_unsigned() > std::numeric_limits<std::uint32_t>::max() ? kTagCounter64 : kTagCounter32);
      break;
    case Kind::gauge: encode_unsigned(out, value.as_unsigned(), kTagGauge32); break;
    case Kind::time_ticks: encode_unsigned(out, value.as_unsigned(), kTagTimeTicks); break;
    case Kind::end_of_mib_view:
      out.push_back(kTagEndOfMibView);
      out.push_back(0);
      break;
    case Kind::no_such_object:
      out.push_back(kTagNoSuchObject);
      out.push_back(0);
      break;
  }
}

Bytes encode(const RequestMessage& message) {
  Bytes list;
  for (const Oid& oid : message.oids) {
    Bytes vb;
    encode_oid(vb, oid);
    vb.push_back(kTagNull);
    vb.push_back(0);
    encode_tlv(list, kTagSequence, vb);
  }
  Bytes pdu;
  encode_integer(pdu, message.request_id);
  const bool bulk = message.type == PduType::get_bulk_request;
  encode_integer(pdu, bulk ? message.non_repeaters : 0);
  encode_integer(pdu, bulk ? message.max_repetitions : 0);
  encode_varbinds(pdu, list);
  return wrap_message(message.community, message.type, pdu);
}

Bytes encode(const ResponseMessage& message) {
  Bytes list;
  for (const VarBind& binding : message.varbinds) {
    Bytes vb;
    encode_oid(vb, binding.oid);
    encode_value(vb, binding.value);
    encode_tlv(list, kTagSequence, vb);
  }
  Bytes pdu;
  encode_integer(pdu, message.request_id);
  encode_integer(pdu, message.error_status);
  encode_integer(pdu, message.error_index);
  encode_varbinds(pdu, list);
  return wrap_message(message.community, PduType::response, pdu);
}

RequestMessage decode_request(std::span<const std::uint8_t> datagram) {
  DecodedMessage m = decode_message(datagram);
  RequestMessage out;
  switch (m.pdu_tag) {
    case static_cast<std::uint8_t>(PduType::get_request):
    case static_cast<std::uint8_t>(PduType::get_next_request):
    case static_cast<std::uint8_t>(PduType::get_bulk_request): out.type = static_cast<PduType>(m.pdu_tag); break;
    default: throw ProtocolError("unexpected request PDU tag " + std::to_string(m.pdu_tag));
  }
  out.community = std::move(m.community);
  out.request_id = m.request_id;
  if (out.type == PduType::get_bulk_request) {
    out.non_repeaters = m.field2;
    out.max_repetitions = m.field3;
  }
  for (auto& [oid, value] : m.varbinds) out.oids.push_back(std::move(oid));
  return out;
}

ResponseMessage decode_response(std::span<const std::uint8_t> datagram) {
  DecodedMessage m = decode_message(datagram);
  if (m.pdu_tag != static_cast<std::uint8_t>(PduType::response))
    throw ProtocolError("expected Response PDU, got tag " + std::to_string(m.pdu_tag));
  ResponseMessage out;
  out.community = std::move(m.community);
  out.request_id = m.request_id;
  out.error_status = m.field2;
  out.error_index = m.field3;
  for (auto& [oid, value] : m.varbinds) {
    out.varbinds.push_back(VarBind{std::move(oid), decode_value(value.first, value.second)});
  }
  return out;
}

}  // namespace cdpmap::ber
