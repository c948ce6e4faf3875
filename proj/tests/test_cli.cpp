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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "cdpmap/cli.hpp"
#include "cdpmap/simulator.hpp"
#include "cdpmap/udp.hpp"

using namespace cdpmap;

namespace {

const std::string kFigure1 = std::string(CDPMAP_FIXTURE_DIR) + "/figure1.fixture";

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("cdpmap-test-" + std::to_string(::getpid()) + "-" + name);
}

}  // namespace

TEST_CASE("sim mode writes DOT") {
  Result r = invoke({"sim", "--fixture", kFigure1, "--root", "192.168.10.1", "--format", "dot"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.rfind("graph topology {", 0) == 0);
}

TEST_CASE("sim mode accepts a device id or defaults the root") {
  Result by_id = invoke({"sim", "--fixture", kFigure1, "--root", "SW1", "--format", "json"});
  Result by_default = invoke({"sim", "--fixture", kFigure1, "--format", "json"});
  REQUIRE(by_id.code == 0);
  REQUIRE(by_default.code == 0);
  CHECK(nlohmann::json::parse(by_id.out)["root"] == "192.168.10.1");
  CHECK(nlohmann::json::parse(by_default.out)["root"] == "192.168.10.1");
}

TEST_CASE("--mode is a spelling of the subcommand") {
  Result r = invoke({"--mode", "sim", "--fixture", kFigure1, "--format", "table"});
  CHECK(r.code == 0);
  CHECK(r.out.find("stp-blocked") != std::string::npos);
}

TEST_CASE("fixture problems exit 3") {
  Result missing = invoke({"sim", "--fixture", "missing.file"});
  CHECK(missing.code == cli::kExitFixture);
  CHECK(missing.err.find("missing.file") != std::string::npos);
  Result bad_root = invoke({"sim", "--fixture", kFigure1, "--root", "SW42"});
  CHECK(bad_root.code == cli::kExitFixture);
}

TEST_CASE("usage errors exit 2") {
  CHECK(invoke({}).code == cli::kExitUsage);
  CHECK(invoke({"sim"}).code == cli::kExitUsage);
  CHECK(invoke({"sim", "--fixture", kFigure1, "--format", "png"}).code == cli::kExitUsage);
  CHECK(invoke({"sim", "--fixture", kFigure1, "--bogus"}).code == cli::kExitUsage);
  CHECK(invoke({"real", "--root", "not-an-ip", "--community", "x"}).code == cli::kExitUsage);
  CHECK(invoke({"--help"}).code == cli::kExitOk);
}

TEST_CASE("real mode against a silent address exits 4") {
  Result r = invoke({"real", "--root", "192.0.2.1", "--community", "public", "--timeout-ms", "100", "--retries", "0"});
  CHECK(r.code == cli::kExitRootUnreachable);
  CHECK(r.err.find("192.0.2.1") != std::string::npos);
}

TEST_CASE("real mode talks to a loopback agent") {
  auto fixture = sim::parse_fixture(R"({"devices": [{"deviceId": "lo", "managementIp": "127.0.0.1"}]})");
  auto views = sim::build_agent_views(fixture);
  UdpAgentServer server(views.at(Ipv4(127, 0, 0, 1)), "lab");
  Result r = invoke({"real", "--root", "127.0.0.1", "--port", std::to_string(server.address().port), "--community",
                  "lab", "--format", "json", "--timeout-ms", "500"});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["nodes"][0]["deviceId"] == "lo");
}

TEST_CASE("generate writes a loadable fixture") {
  const auto path = temp_path("gen.fixture");
  Result r = invoke({"generate", "--seed", "7", "--devices", "92", "--extra-links", "20", "--output", path.string()});
  REQUIRE(r.code == 0);
  auto f = sim::load_fixture(path);
  CHECK(f.devices.size() == 92);
  CHECK(f.links.size() == 111);
  CHECK(sim::dump_fixture(f) == sim::dump_fixture(sim::generate_random_fixture(7, 92, 20)));

  const auto out = temp_path("gen.json");
  CHECK(invoke({"sim", "--fixture", path.string(), "--format", "json", "--output", out.string()}).code == 0);
  std::ifstream in(out);
  CHECK(nlohmann::json::parse(in)["stats"]["nodeCount"] == 92);
  std::filesystem::remove(path);
  std::filesystem::remove(out);
}
