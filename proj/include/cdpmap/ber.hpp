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

// BER encoding of SNMPv2c messages (RFC 3416 PDUs over RFC 1157 framing).
// Only the PDU types the crawler and the test agent need are supported.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cdpmap/mib.hpp"

namespace cdpmap::ber {

using Bytes = std::vector<std::uint8_t>;

inline constexpr std::int32_t kSnmpV2c = 1;

enum class PduType : std::uint8_t {
  get_request = 0xA0,
  get_next_request = 0xA1,
  response = 0xA2,
  get_bulk_request = 0xA5,
};

/// RFC 3416 error-status values used here.
enum ErrorStatus : std::int32_t {
  kNoError = 0,
  kTooBig = 1,
  kGenErr = 5,
};

/// GetRequest / GetNextRequest / GetBulkRequest. For bulk requests the
/// non-repeaters and max-repetitions fields occupy the error-status and
/// error-index slots on the wire.
struct RequestMessage {
  std::string community;
  PduType type = PduType::get_request;
  std::int32_t request_id = 0;
  std::int32_t non_repeaters = 0;
  std::int32_t max_repetitions = 0;
  std::vector<Oid> oids;

  friend bool operator==(const RequestMessage&, const RequestMessage&) = default;
};

struct ResponseMessage {
  std::string community;
  std::int32_t request_id = 0;
  std::int32_t error_status = 0;
  std::int32_t error_index = 0;
  std::vector<VarBind> varbinds;

  friend bool operator==(const ResponseMessage&, const ResponseMessage&) = default;
};

Bytes encode(const RequestMessage& message);
Bytes encode(const ResponseMessage& message);

/// Both decoders throw ProtocolError on malformed input, a version other
/// than v2c, or an unexpected PDU type.
RequestMessage decode_request(std::span<const std::uint8_t> datagram);
ResponseMessage decode_response(std::span<const std::uint8_t> datagram);

// Primitive encoders, exposed for tests.
void encode_integer(Bytes& out, std::int64_t value, std::uint8_t tag = 0x02);
void encode_unsigned(Bytes& out, std::uint64_t value, std::uint8_t tag);
void encode_oid(Bytes& out, const Oid& oid);
void encode_value(Bytes& out, const SnmpValue& value);
void encode_length(Bytes& out, std::size_t length);

}  // namespace cdpmap::ber
