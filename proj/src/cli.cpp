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

#include "cdpmap/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "cdpmap/discovery.hpp"
#include "cdpmap/error.hpp"
#include "cdpmap/export.hpp"
#include "cdpmap/simulator.hpp"
#include "cdpmap/udp.hpp"

namespace cdpmap::cli {

namespace {

struct Options {
  std::string root;
  std::string fixture;
  std::string community;
  unsigned timeout_ms = 2000;
  unsigned retries = 1;
  unsigned max_repetitions = 20;
  unsigned parallelism = 8;
  unsigned max_level = 0;
  std::uint16_t port = AgentAddress::kDefaultPort;
  std::string format = "table";
  std::string output;

  std::uint64_t seed = 1;
  std::size_t devices = 10;
  std::size_t extra_links = 0;
};

void add_discovery_flags(CLI::App& cmd, Options& o) {
  cmd.add_option("--timeout-ms", o.timeout_ms, "Per-request timeout in milliseconds")->check(CLI::Range(1u, 600000u));
  cmd.add_option("--retries", o.retries, "Retries after a timeout");
  cmd.add_option("--max-repetitions", o.max_repetitions, "GETBULK max-repetitions")->check(CLI::Range(1u, 10000u));
  cmd.add_option("--parallelism", o.parallelism, "Devices polled concurrently per level")->check(CLI::Range(1u, 1024u));
  cmd.add_option("--max-level", o.max_level, "Deepest level to query (0 = unlimited)");
  cmd.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"dot", "json", "table"}));
  cmd.add_option("--output", o.output, "Output file (default: standard output)");
}

DiscoveryConfig discovery_config(const Options& o) {
  DiscoveryConfig cfg;
  cfg.transport.timeout = std::chrono::milliseconds(o.timeout_ms);
  cfg.transport.retries = o.retries;
  cfg.transport.max_repetitions = o.max_repetitions;
  cfg.parallelism = o.parallelism;
  cfg.max_level = o.max_level;
  return cfg;
}

std::string render(const DiscoveryReport& report, const std::string& format) {
  if (format == "dot") return to_dot(report.graph);
  if (format == "json") return to_json(report);
  return to_table(report);
}

int emit(const std::string& text, const Options& o, std::ostream& out, std::ostream& err) {
  if (o.output.empty() || o.output == "-") {
    out << text;
    return kExitOk;
  }
  std::ofstream file(o.output, std::ios::binary);
  if (!file || !(file << text)) {
    err << "cdpmap: cannot write " << o.output << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

void report_warnings(const DiscoveryReport& report, std::ostream& err) {
  for (const std::string& w : report.warnings) err << "warning: " << w << "\n";
  std::size_t unreachable = 0;
  for (const auto& [ip, status] : report.outcomes) unreachable += status == QueryStatus::unreachable;
  if (unreachable) err << "cdpmap: " << unreachable << " device(s) unreachable\n";
}

int run_sim(const Options& o, std::ostream& out, std::ostream& err) {
  sim::NetworkFixture fixture = sim::load_fixture(o.fixture);
  const sim::FixtureDevice* root = o.root.empty() ? &fixture.devices.front() : fixture.find_device(o.root);
  if (!root) {
    if (auto ip = Ipv4::parse(o.root)) root = fixture.find_device(*ip);
  }
  if (!root) throw FixtureError(o.fixture, "no device '" + o.root + "' to use as root");

  SimulatedTransport registry;
  sim::register_fixture(registry, fixture);
  DiscoveryReport report = discover(AgentAddress(root->management_ip), registry, Credentials("public"), discovery_config(o));
  report_warnings(report, err);
  return emit(render(report, o.format), o, out, err);
}

int run_real(const Options& o, std::ostream& out, std::ostream& err) {
  auto root = Ipv4::parse(o.root);
  if (!root) {
    err << "cdpmap: --root must be an IPv4 address, got '" << o.root << "'\n";
    return kExitUsage;
  }
  std::string community = o.community;
  if (community.empty()) {
    if (const char* env = std::getenv("CDPMAP_COMMUNITY")) community = env;
  }
  if (community.empty()) {
    err << "cdpmap: no community given (use --community or CDPMAP_COMMUNITY)\n";
    return kExitUsage;
  }
  UdpTransport transport;
  DiscoveryReport report = discover(AgentAddress(*root, o.port), transport, Credentials(community), discovery_config(o));
  report_warnings(report, err);
  return emit(render(report, o.format), o, out, err);
}

int run_generate(const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<std::string> warnings;
  auto fixture = sim::generate_random_fixture(o.seed, o.devices, o.extra_links, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  return emit(sim::dump_fixture(fixture), o, out, err);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Layer-2 topology discovery from CDP neighbor caches", "cdpmap"};
  app.require_subcommand(1);
  Options o;

  CLI::App* sim_cmd = app.add_subcommand("sim", "Discover a simulated network described by a fixture file");
  sim_cmd->add_option("--fixture", o.fixture, "Fixture file")->required();
  sim_cmd->add_option("--root", o.root, "Root device, deviceId or management IP (default: first device)");
  add_discovery_flags(*sim_cmd, o);

  CLI::App* real_cmd = app.add_subcommand("real", "Discover a live network over SNMPv2c");
  real_cmd->add_option("--root", o.root, "Root device management IP")->required();
  real_cmd->add_option("--community", o.community, "SNMP community (default: $CDPMAP_COMMUNITY)");
  real_cmd->add_option("--port", o.port, "Agent UDP port")->check(CLI::Range(1, 65535));
  add_discovery_flags(*real_cmd, o);

  CLI::App* gen_cmd = app.add_subcommand("generate", "Write a random fixture");
  gen_cmd->add_option("--seed", o.seed, "Random seed");
  gen_cmd->add_option("--devices", o.devices, "Number of devices")->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
  gen_cmd->add_option("--extra-links", o.extra_links, "Links beyond the spanning tree");
  gen_cmd->add_option("--output", o.output, "Output file (default: standard output)");

  // `--mode sim|real` is accepted as a spelling of the subcommand.
  std::vector<std::string> argv = args;
  if (auto it = std::find(argv.begin(), argv.end(), "--mode"); it != argv.end() && it + 1 != argv.end()) {
    std::string mode = *(it + 1);
    argv.erase(it, it + 2);
    argv.insert(argv.begin(), mode);
  }
  std::reverse(argv.begin(), argv.end());

  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sim_cmd->parsed()) return run_sim(o, out, err);
    if (real_cmd->parsed()) return run_real(o, out, err);
    return run_generate(o, out, err);
  } catch (const FixtureError& e) {
    err << "cdpmap: " << e.what() << "\n";
    return kExitFixture;
  } catch (const RootUnreachableError& e) {
    err << "cdpmap: " << e.what() << "\n";
    return kExitRootUnreachable;
  } catch (const std::exception& e) {
    err << "cdpmap: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace cdpmap::cli
