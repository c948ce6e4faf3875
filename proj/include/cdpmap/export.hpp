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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cdpmap/discovery.hpp"
#include "cdpmap/error.hpp"

namespace cdpmap {

/// Raised by parse_topology_json for documents that break the schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Serializable view of a discovery run. Nodes are sorted by IP and edges
/// by (a.ip, a.port, b.ip, b.port).
struct TopologyDocument {
  struct Stats {
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    std::size_t blocked_count = 0;
    std::int64_t retrieval_ms = 0;
    std::int64_t assembly_ms = 0;

    friend bool operator==(const Stats&, const Stats&) = default;
  };

  std::string schema_version = "1";
  Ipv4 root;
  std::vector<DeviceNode> nodes;
  std::vector<TopologyEdge> edges;
  Stats stats;

  friend bool operator==(const TopologyDocument&, const TopologyDocument&) = default;
};

TopologyDocument make_document(const DiscoveryReport& report);

/// JSON text of the report's document (schema version "1").
std::string to_json(const DiscoveryReport& report);
std::string to_json(const TopologyDocument& document);

/// Same as to_json but without the two timing fields, for byte comparison
/// of runs.
std::string to_canonical_json(const DiscoveryReport& report);

/// Parses and validates a topology document. Throws SchemaError.
TopologyDocument parse_topology_json(std::string_view text);

/// Graphviz rendering: one box per device labelled "deviceId\nip (L<level>)",
/// solid edges for forwarding links, dashed edges labelled "blocked" for
/// STP-blocked ones.
std::string to_dot(const TopologyGraph& graph);

/// Plain-text crawl report: per-step trace, devices, links and totals.
std::string to_table(const DiscoveryReport& report);

}  // namespace cdpmap
