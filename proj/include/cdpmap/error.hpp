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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include "cdpmap/address.hpp"

namespace cdpmap {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed dotted-decimal OID. position() is the 1-based arc number.
class OidParseError : public Error {
 public:
  OidParseError(std::size_t position, const std::string& what)
      : Error(what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Varbinds that should be strictly increasing were not.
class OrderingError : public Error {
 public:
  using Error::Error;
};

/// A CDP cache row could not be decoded.
class DecodeError : public Error {
 public:
  DecodeError(std::uint32_t if_index, std::uint32_t device_index, const std::string& what)
      : Error(what), if_index_(if_index), device_index_(device_index) {}
  std::uint32_t if_index() const { return if_index_; }
  std::uint32_t device_index() const { return device_index_; }

 private:
  std::uint32_t if_index_;
  std::uint32_t device_index_;
};

/// Malformed BER or an agent that violates the protocol (e.g. decreasing OIDs).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// The agent answered with a non-zero error-status.
class AgentError : public ProtocolError {
 public:
  AgentError(int status, const std::string& what) : ProtocolError(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

class UnreachableError : public Error {
 public:
  explicit UnreachableError(const AgentAddress& agent)
      : Error("agent " + agent.to_string() + " unreachable"), agent_(agent) {}
  UnreachableError(const AgentAddress& agent, const std::string& detail)
      : Error("agent " + agent.to_string() + " unreachable: " + detail), agent_(agent) {}
  const AgentAddress& agent() const { return agent_; }

 private:
  AgentAddress agent_;
};

class RegistrationError : public Error {
 public:
  using Error::Error;
};

class RootUnreachableError : public Error {
 public:
  explicit RootUnreachableError(const AgentAddress& root)
      : Error("root device " + root.to_string() + " unreachable"), root_(root) {}
  const AgentAddress& root() const { return root_; }

 private:
  AgentAddress root_;
};

/// Fixture schema or validation failure. location() is a JSON-pointer-like path.
class FixtureError : public Error {
 public:
  FixtureError(std::string location, std::string detail)
      : Error(location.empty() ? detail : location + ": " + detail),
        location_(std::move(location)),
        detail_(std::move(detail)) {}
  const std::string& location() const { return location_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string location_;
  std::string detail_;
};

}  // namespace cdpmap
