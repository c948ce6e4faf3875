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

#include "cdpmap/simulator.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "cdpmap/error.hpp"

namespace cdpmap::sim {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(LinkStp state) {
  switch (state) {
    case LinkStp::forwarding: return "forwarding";
    case LinkStp::blocked: return "blocked";
    case LinkStp::automatic: return "auto";
  }
  return "auto";
}

const FixtureInterface* FixtureDevice::find_interface(std::string_view name) const {
  for (const auto& i : interfaces)
    if (i.name == name) return &i;
  return nullptr;
}

const FixtureDevice* NetworkFixture::find_device(std::string_view id) const {
  for (const auto& d : devices)
    if (d.id == id) return &d;
  return nullptr;
}

const FixtureDevice* NetworkFixture::find_device(Ipv4 ip) const {
  for (const auto& d : devices)
    if (d.management_ip == ip) return &d;
  return nullptr;
}

bool NetworkFixture::is_hub(std::string_view id) const {
  return std::any_of(hubs.begin(), hubs.end(), [&](const FixtureHub& h) { return h.id == id; });
}

// ---------------------------------------------------------------------------
// Validation

void validate(const NetworkFixture& fixture) {
  if (fixture.devices.empty()) throw FixtureError("devices", "at least one device is required");

  std::set<std::string> node_ids;
  std::set<Ipv4> ips;
  for (std::size_t i = 0; i < fixture.devices.size(); ++i) {
    const FixtureDevice& d = fixture.devices[i];
    const std::string where = "devices[" + std::to_string(i) + "]";
    if (d.id.empty()) throw FixtureError(where + ".deviceId", "must not be empty");
    if (!node_ids.insert(d.id).second) throw FixtureError(where + ".deviceId", "duplicate id '" + d.id + "'");
    if (d.management_ip.is_zero()) throw FixtureError(where + ".managementIp", "must not be 0.0.0.0");
    if (!ips.insert(d.management_ip).second)
      throw FixtureError(where + ".managementIp", "duplicate address " + d.management_ip.to_string());
    std::set<std::string> names;
    std::set<std::uint32_t> indexes;
    for (std::size_t k = 0; k < d.interfaces.size(); ++k) {
      const FixtureInterface& itf = d.interfaces[k];
      const std::string iwhere = where + ".interfaces[" + std::to_string(k) + "]";
      if (itf.name.empty()) throw FixtureError(iwhere + ".name", "must not be empty");
      if (!names.insert(itf.name).second) throw FixtureError(iwhere + ".name", "duplicate interface '" + itf.name + "'");
      if (itf.if_index == 0) throw FixtureError(iwhere + ".ifIndex", "must be positive");
      if (!indexes.insert(itf.if_index).second)
        throw FixtureError(iwhere + ".ifIndex", "duplicate ifIndex " + std::to_string(itf.if_index));
    }
  }
  for (std::size_t i = 0; i < fixture.hubs.size(); ++i) {
    const std::string where = "hubs[" + std::to_string(i) + "].id";
    const std::string& id = fixture.hubs[i].id;
    if (id.empty()) throw FixtureError(where, "must not be empty");
    if (!node_ids.insert(id).second) throw FixtureError(where, "duplicate id '" + id + "'");
  }

  // Each device interface and hub port carries at most one attachment.
  std::set<Endpoint> used;
  auto check_endpoint = [&](const Endpoint& e, const std::string& where) {
    if (const FixtureDevice* d = fixture.find_device(e.node)) {
      if (!d->find_interface(e.port))
        throw FixtureError(where, "device '" + e.node + "' has no interface '" + e.port + "'");
    } else if (fixture.is_hub(e.node)) {
      if (e.port.empty()) throw FixtureError(where, "hub port must not be empty");
    } else {
      throw FixtureError(where, "unknown device or hub '" + e.node + "'");
    }
    if (!used.insert(e).second) throw FixtureError(where, e.node + ":" + e.port + " is already attached");
  };

  for (std::size_t i = 0; i < fixture.links.size(); ++i) {
    const FixtureLink& l = fixture.links[i];
    const std::string where = "links[" + std::to_string(i) + "]";
    if (l.a == l.b) throw FixtureError(where, "link endpoints must differ");
    check_endpoint(l.a, where + ".a");
    check_endpoint(l.b, where + ".b");
    if (fixture.is_hub(l.a.node) && fixture.is_hub(l.b.node))
      throw FixtureError(where, "hub-to-hub links are not supported");
  }
  std::set<std::string> host_ids;
  for (std::size_t i = 0; i < fixture.hosts.size(); ++i) {
    const FixtureHost& h = fixture.hosts[i];
    const std::string where = "hosts[" + std::to_string(i) + "]";
    if (h.id.empty()) throw FixtureError(where + ".id", "must not be empty");
    if (node_ids.contains(h.id) || !host_ids.insert(h.id).second)
      throw FixtureError(where + ".id", "duplicate id '" + h.id + "'");
    check_endpoint(h.attach, where + ".attach");
  }
}

// ---------------------------------------------------------------------------
// Parsing and dumping

namespace {

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw FixtureError(where, "unknown field '" + key + "'");
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw FixtureError(where, std::string("missing field '") + key + "'");
  return *it;
}

std::string get_string(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_string()) throw FixtureError(where + "." + key, "expected a string");
  return v.get<std::string>();
}

Ipv4 get_ip(const json& obj, const char* key, const std::string& where) {
  const std::string text = get_string(obj, key, where);
  auto ip = Ipv4::parse(text);
  if (!ip) throw FixtureError(where + "." + key, "invalid IPv4 address '" + text + "'");
  return *ip;
}

const json& get_array(const json& root, const char* key) {
  static const json empty = json::array();
  auto it = root.find(key);
  if (it == root.end()) return empty;
  if (!it->is_array()) throw FixtureError(key, "expected an array");
  return *it;
}

Endpoint parse_endpoint(const json& j, const std::string& where) {
  if (!j.is_object()) throw FixtureError(where, "expected an object");
  if (j.contains("hub")) {
    reject_unknown_keys(j, {"hub", "port"}, where);
    return Endpoint{get_string(j, "hub", where), get_string(j, "port", where)};
  }
  reject_unknown_keys(j, {"device", "interface"}, where);
  return Endpoint{get_string(j, "device", where), get_string(j, "interface", where)};
}

NetworkFixture from_json(const json& root) {
  if (!root.is_object()) throw FixtureError("", "top level must be an object");
  reject_unknown_keys(root, {"devices", "links", "hosts", "hubs"}, "(top level)");

  NetworkFixture f;
  const json& devices = get_array(root, "devices");
  for (std::size_t i = 0; i < devices.size(); ++i) {
    const json& jd = devices[i];
    const std::string where = "devices[" + std::to_string(i) + "]";
    if (!jd.is_object()) throw FixtureError(where, "expected an object");
    reject_unknown_keys(jd, {"deviceId", "managementIp", "bridgePriority", "cdpEnabled", "interfaces"}, where);
    FixtureDevice d;
    d.id = get_string(jd, "deviceId", where);
    d.management_ip = get_ip(jd, "managementIp", where);
    if (auto it = jd.find("bridgePriority"); it != jd.end()) {
      if (!it->is_number_integer()) throw FixtureError(where + ".bridgePriority", "expected an integer");
      d.bridge_priority = it->get<std::int64_t>();
    }
    if (auto it = jd.find("cdpEnabled"); it != jd.end()) {
      if (!it->is_boolean()) throw FixtureError(where + ".cdpEnabled", "expected true or false");
      d.cdp_enabled = it->get<bool>();
    }
    if (auto it = jd.find("interfaces"); it != jd.end()) {
      if (!it->is_array()) throw FixtureError(where + ".interfaces", "expected an array");
      for (std::size_t k = 0; k < it->size(); ++k) {
        const json& ji = (*it)[k];
        const std::string iwhere = where + ".interfaces[" + std::to_string(k) + "]";
        FixtureInterface itf;
        if (ji.is_string()) {
          itf.name = ji.get<std::string>();
          itf.if_index = static_cast<std::uint32_t>(k + 1);
        } else if (ji.is_object()) {
          reject_unknown_keys(ji, {"name", "ifIndex", "adminStatus", "routed"}, iwhere);
          itf.name = get_string(ji, "name", iwhere);
          itf.if_index = static_cast<std::uint32_t>(k + 1);
          if (auto ix = ji.find("ifIndex"); ix != ji.end()) {
            if (!ix->is_number_unsigned() || ix->get<std::uint64_t>() > std::numeric_limits<std::uint32_t>::max())
              throw FixtureError(iwhere + ".ifIndex", "expected a positive integer");
            itf.if_index = ix->get<std::uint32_t>();
          }
          if (auto as = ji.find("adminStatus"); as != ji.end()) {
            if (*as == "up") itf.admin = AdminStatus::up;
            else if (*as == "down") itf.admin = AdminStatus::down;
            else throw FixtureError(iwhere + ".adminStatus", "expected \"up\" or \"down\"");
          }
          if (auto r = ji.find("routed"); r != ji.end()) {
            if (!r->is_boolean()) throw FixtureError(iwhere + ".routed", "expected true or false");
            itf.routed = r->get<bool>();
          }
        } else {
          throw FixtureError(iwhere, "expected an interface name or object");
        }
        d.interfaces.push_back(std::move(itf));
      }
    }
    f.devices.push_back(std::move(d));
  }

  const json& hubs = get_array(root, "hubs");
  for (std::size_t i = 0; i < hubs.size(); ++i) {
    const std::string where = "hubs[" + std::to_string(i) + "]";
    if (!hubs[i].is_object()) throw FixtureError(where, "expected an object");
    reject_unknown_keys(hubs[i], {"id"}, where);
    f.hubs.push_back(FixtureHub{get_string(hubs[i], "id", where)});
  }

  const json& links = get_array(root, "links");
  for (std::size_t i = 0; i < links.size(); ++i) {
    const json& jl = links[i];
    const std::string where = "links[" + std::to_string(i) + "]";
    if (!jl.is_object()) throw FixtureError(where, "expected an object");
    reject_unknown_keys(jl, {"a", "b", "stpState"}, where);
    FixtureLink l;
    l.a = parse_endpoint(require(jl, "a", where), where + ".a");
    l.b = parse_endpoint(require(jl, "b", where), where + ".b");
    if (auto s = jl.find("stpState"); s != jl.end()) {
      if (*s == "forwarding") l.stp = LinkStp::forwarding;
      else if (*s == "blocked") l.stp = LinkStp::blocked;
      else if (*s == "auto") l.stp = LinkStp::automatic;
      else throw FixtureError(where + ".stpState", "expected forwarding, blocked or auto");
    }
    f.links.push_back(std::move(l));
  }

  const json& hosts = get_array(root, "hosts");
  for (std::size_t i = 0; i < hosts.size(); ++i) {
    const json& jh = hosts[i];
    const std::string where = "hosts[" + std::to_string(i) + "]";
    if (!jh.is_object()) throw FixtureError(where, "expected an object");
    reject_unknown_keys(jh, {"id", "ip", "attach"}, where);
    f.hosts.push_back(FixtureHost{get_string(jh, "id", where), get_ip(jh, "ip", where),
                                  parse_endpoint(require(jh, "attach", where), where + ".attach")});
  }
  return f;
}

ordered_json endpoint_json(const NetworkFixture& f, const Endpoint& e) {
  ordered_json j;
  if (f.is_hub(e.node)) {
    j["hub"] = e.node;
    j["port"] = e.port;
  } else {
    j["device"] = e.node;
    j["interface"] = e.port;
  }
  return j;
}

}  // namespace

NetworkFixture parse_fixture(std::string_view text, const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FixtureError(source, e.what());
  }
  NetworkFixture f;
  try {
    f = from_json(root);
    validate(f);
  } catch (const FixtureError& e) {
    throw FixtureError(e.location().empty() ? source : source + ": " + e.location(), e.detail());
  }
  return f;
}

NetworkFixture load_fixture(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FixtureError(path.string(), "cannot open fixture file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_fixture(buffer.str(), path.string());
}

std::string dump_fixture(const NetworkFixture& f) {
  ordered_json root;
  root["devices"] = ordered_json::array();
  for (const FixtureDevice& d : f.devices) {
    ordered_json jd;
    jd["deviceId"] = d.id;
    jd["managementIp"] = d.management_ip.to_string();
    jd["bridgePriority"] = d.bridge_priority;
    jd["cdpEnabled"] = d.cdp_enabled;
    jd["interfaces"] = ordered_json::array();
    for (const FixtureInterface& itf : d.interfaces) {
      ordered_json ji;
      ji["name"] = itf.name;
      ji["ifIndex"] = itf.if_index;
      ji["adminStatus"] = itf.admin == AdminStatus::up ? "up" : "down";
      if (itf.routed) ji["routed"] = true;
      jd["interfaces"].push_back(std::move(ji));
    }
    root["devices"].push_back(std::move(jd));
  }
  root["links"] = ordered_json::array();
  for (const FixtureLink& l : f.links) {
    ordered_json jl;
    jl["a"] = endpoint_json(f, l.a);
    jl["b"] = endpoint_json(f, l.b);
    jl["stpState"] = std::string(to_string(l.stp));
    root["links"].push_back(std::move(jl));
  }
  root["hubs"] = ordered_json::array();
  for (const FixtureHub& h : f.hubs) root["hubs"].push_back(ordered_json{{"id", h.id}});
  root["hosts"] = ordered_json::array();
  for (const FixtureHost& h : f.hosts) {
    ordered_json jh;
    jh["id"] = h.id;
    jh["ip"] = h.ip.to_string();
    jh["attach"] = endpoint_json(f, h.attach);
    root["hosts"].push_back(std::move(jh));
  }
  return root.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Spanning tree

namespace {

/// Vertex indexing: devices first, then hubs.
struct StpGraph {
  struct Arc {
    std::size_t to;
    std::size_t link;
    int cost;
    std::string local_port;  // port on the `from` side
  };

  std::vector<std::vector<Arc>> adj;
  std::size_t device_count = 0;
};

std::size_t vertex_of(const NetworkFixture& f, const std::string& node) {
  for (std::size_t i = 0; i < f.devices.size(); ++i)
    if (f.devices[i].id == node) return i;
  for (std::size_t i = 0; i < f.hubs.size(); ++i)
    if (f.hubs[i].id == node) return f.devices.size() + i;
  throw std::invalid_argument("unknown node " + node);
}

bool endpoint_up(const NetworkFixture& f, const Endpoint& e) {
  const FixtureDevice* d = f.find_device(e.node);
  if (!d) return true;  // hub ports have no admin state
  const FixtureInterface* itf = d->find_interface(e.port);
  return itf && itf->admin == AdminStatus::up;
}

bool endpoint_routed(const NetworkFixture& f, const Endpoint& e) {
  const FixtureDevice* d = f.find_device(e.node);
  if (!d) return false;
  const FixtureInterface* itf = d->find_interface(e.port);
  return itf && itf->routed;
}

}  // namespace

NetworkFixture compute_stp_states(NetworkFixture f) {
  const std::size_t n_dev = f.devices.size();
  const std::size_t n = n_dev + f.hubs.size();

  StpGraph g;
  g.adj.resize(n);
  g.device_count = n_dev;
  for (std::size_t li = 0; li < f.links.size(); ++li) {
    const FixtureLink& l = f.links[li];
    if (l.stp == LinkStp::blocked) continue;
    if (!endpoint_up(f, l.a) || !endpoint_up(f, l.b)) continue;
    if (endpoint_routed(f, l.a) || endpoint_routed(f, l.b)) continue;
    const std::size_t va = vertex_of(f, l.a.node);
    const std::size_t vb = vertex_of(f, l.b.node);
    const int cost = (va < n_dev && vb < n_dev) ? 2 : 1;
    g.adj[va].push_back({vb, li, cost, l.a.port});
    g.adj[vb].push_back({va, li, cost, l.b.port});
  }

  // Upstream preference: devices by (priority, ip), then hubs by id.
  using Key = std::tuple<int, std::int64_t, std::uint32_t, std::string>;
  auto key_of = [&](std::size_t v) -> Key {
    if (v < n_dev) return {0, f.devices[v].bridge_priority, f.devices[v].management_ip.value(), {}};
    return {1, 0, 0, f.hubs[v - n_dev].id};
  };

  std::vector<bool> on_tree(f.links.size(), false);
  std::vector<bool> assigned(n, false);
  constexpr long kInf = std::numeric_limits<long>::max();

  for (std::size_t seed = 0; seed < n_dev; ++seed) {
    if (assigned[seed]) continue;
    std::vector<std::size_t> component;
    {
      std::vector<bool> seen(n, false);
      std::queue<std::size_t> q;
      q.push(seed);
      seen[seed] = true;
      while (!q.empty()) {
        const std::size_t v = q.front();
        q.pop();
        component.push_back(v);
        for (const auto& arc : g.adj[v]) {
          if (!seen[arc.to]) {
            seen[arc.to] = true;
            q.push(arc.to);
          }
        }
      }
    }
    std::size_t bridge_root = seed;
    for (std::size_t v : component)
      if (v < n_dev && key_of(v) < key_of(bridge_root)) bridge_root = v;

    std::vector<long> dist(n, kInf);
    using Item = std::pair<long, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[bridge_root] = 0;
    pq.push({0, bridge_root});
    while (!pq.empty()) {
      auto [d, v] = pq.top();
      pq.pop();
      if (d != dist[v]) continue;
      for (const auto& arc : g.adj[v]) {
        if (d + arc.cost < dist[arc.to]) {
          dist[arc.to] = d + arc.cost;
          pq.push({dist[arc.to], arc.to});
        }
      }
    }

    for (std::size_t v : component) {
      assigned[v] = true;
      if (v == bridge_root) continue;
      const StpGraph::Arc* best = nullptr;
      std::pair<Key, std::string> best_key;
      for (const auto& arc : g.adj[v]) {
        if (dist[arc.to] + arc.cost != dist[v]) continue;
        auto k = std::make_pair(key_of(arc.to), arc.local_port);
        if (!best || k < best_key) {
          best = &arc;
          best_key = std::move(k);
        }
      }
      if (best) on_tree[best->link] = true;
    }
  }

  for (std::size_t li = 0; li < f.links.size(); ++li) {
    FixtureLink& l = f.links[li];
    if (l.stp != LinkStp::automatic) continue;
    if (endpoint_routed(f, l.a) || endpoint_routed(f, l.b)) {
      l.stp = LinkStp::forwarding;
    } else if (!endpoint_up(f, l.a) || !endpoint_up(f, l.b)) {
      l.stp = LinkStp::blocked;
    } else {
      l.stp = on_tree[li] ? LinkStp::forwarding : LinkStp::blocked;
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// Agent views

std::map<Ipv4, MibView> build_agent_views(const NetworkFixture& fixture) {
  const NetworkFixture f = compute_stp_states(fixture);

  // Attachment lookups: what sits on the far side of each device interface.
  std::map<Endpoint, std::size_t> link_at;
  std::map<std::string, std::vector<std::size_t>> hub_links;
  for (std::size_t li = 0; li < f.links.size(); ++li) {
    link_at[f.links[li].a] = li;
    link_at[f.links[li].b] = li;
    if (f.is_hub(f.links[li].a.node)) hub_links[f.links[li].a.node].push_back(li);
    if (f.is_hub(f.links[li].b.node)) hub_links[f.links[li].b.node].push_back(li);
  }
  auto far_side = [&](std::size_t li, const std::string& node) -> const Endpoint& {
    const FixtureLink& l = f.links[li];
    return l.a.node == node ? l.b : l.a;
  };

  std::map<Ipv4, MibView> views;
  for (const FixtureDevice& d : f.devices) {
    MibView view;
    view.emplace(oids::sys_name(), SnmpValue::octet_string(d.id));

    std::vector<const FixtureInterface*> ordered;
    for (const auto& itf : d.interfaces) ordered.push_back(&itf);
    std::sort(ordered.begin(), ordered.end(),
              [](const FixtureInterface* x, const FixtureInterface* y) { return x->if_index < y->if_index; });

    std::uint32_t bridge_port = 0;
    std::vector<CdpNeighborEntry> cache;
    for (const FixtureInterface* itf : ordered) {
      const bool up = itf->admin == AdminStatus::up;
      view.emplace(oids::if_descr().child({itf->if_index}), SnmpValue::octet_string(itf->name));
      view.emplace(oids::if_admin_status().child({itf->if_index}), SnmpValue::integer(up ? 1 : 2));

      auto li = link_at.find(Endpoint{d.id, itf->name});
      if (!itf->routed) {
        ++bridge_port;
        StpPortState state = StpPortState::forwarding;
        if (!up) state = StpPortState::disabled;
        else if (li != link_at.end() && f.links[li->second].stp == LinkStp::blocked) state = StpPortState::blocking;
        view.emplace(oids::dot1d_base_port_if_index().child({bridge_port}), SnmpValue::integer(itf->if_index));
        view.emplace(oids::dot1d_stp_port_state().child({bridge_port}),
                     SnmpValue::integer(static_cast<std::int64_t>(state)));
      }

      if (!d.cdp_enabled || !up || li == link_at.end()) continue;

      // Far-side interfaces whose CDP advertisements reach this port.
      std::vector<Endpoint> heard;
      const Endpoint& far = far_side(li->second, d.id);
      if (f.is_hub(far.node)) {
        for (std::size_t other : hub_links[far.node]) {
          if (other == li->second) continue;
          heard.push_back(far_side(other, far.node));
        }
      } else {
        heard.push_back(far);
      }

      std::vector<CdpNeighborEntry> rows;
      for (const Endpoint& e : heard) {
        const FixtureDevice* nd = f.find_device(e.node);
        if (!nd || !nd->cdp_enabled) continue;
        const FixtureInterface* nitf = nd->find_interface(e.port);
        if (!nitf || nitf->admin != AdminStatus::up) continue;
        rows.push_back(CdpNeighborEntry{itf->if_index, 0, nd->management_ip, nd->id, nitf->name});
      }
      std::sort(rows.begin(), rows.end(), [](const CdpNeighborEntry& x, const CdpNeighborEntry& y) {
        return std::tie(x.neighbor_address, x.neighbor_port) < std::tie(y.neighbor_address, y.neighbor_port);
      });
      for (std::size_t k = 0; k < rows.size(); ++k) rows[k].device_index = static_cast<std::uint32_t>(k + 1);
      cache.insert(cache.end(), rows.begin(), rows.end());
    }
    for (VarBind& vb : encode_cdp_cache_rows(cache)) view.insert_or_assign(std::move(vb.oid), std::move(vb.value));
    views.emplace(d.management_ip, std::move(view));
  }
  return views;
}

void register_fixture(SimulatedTransport& registry, const NetworkFixture& fixture, std::uint16_t port) {
  for (auto& [ip, view] : build_agent_views(fixture)) {
    registry.register_agent(AgentAddress(ip, port), std::move(view));
  }
}

// ---------------------------------------------------------------------------
// Random networks

namespace {

/// Uniform integer in [0, bound) without modulo bias; independent of the
/// standard library's distribution implementation so output is portable.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

NetworkFixture generate_random_fixture(std::uint64_t seed, std::size_t device_count, std::size_t extra_link_count,
                                       std::vector<std::string>* warnings) {
  if (device_count < 1) throw std::invalid_argument("device count must be at least 1");
  if (device_count > 0xFFFFFF) throw std::invalid_argument("device count too large for 10.0.0.0/8");

  std::mt19937_64 rng(seed);
  NetworkFixture f;
  f.devices.reserve(device_count);
  for (std::size_t i = 0; i < device_count; ++i) {
    FixtureDevice d;
    d.id = "SW" + std::to_string(i + 1);
    d.management_ip = Ipv4(Ipv4(10, 0, 0, 1).value() + static_cast<std::uint32_t>(i));
    f.devices.push_back(std::move(d));
  }

  std::set<std::pair<std::size_t, std::size_t>> linked;
  auto connect = [&](std::size_t x, std::size_t y) {
    if (x > y) std::swap(x, y);
    linked.insert({x, y});
    auto new_port = [&](FixtureDevice& d) {
      FixtureInterface itf;
      itf.if_index = static_cast<std::uint32_t>(d.interfaces.size() + 1);
      itf.name = "Gi0/" + std::to_string(itf.if_index);
      d.interfaces.push_back(itf);
      return itf.name;
    };
    Endpoint a{f.devices[x].id, new_port(f.devices[x])};
    Endpoint b{f.devices[y].id, new_port(f.devices[y])};
    f.links.push_back(FixtureLink{std::move(a), std::move(b), LinkStp::automatic});
  };

  for (std::size_t i = 1; i < device_count; ++i) connect(uniform_below(rng, i), i);

  const std::size_t complete = device_count * (device_count - 1) / 2;
  const std::size_t room = complete - (device_count - 1);
  if (extra_link_count > room) {
    if (warnings) {
      warnings->push_back("extra link count " + std::to_string(extra_link_count) + " capped at " +
                          std::to_string(room) + " for " + std::to_string(device_count) + " devices");
    }
    extra_link_count = room;
  }

  if (extra_link_count * 2 <= room) {
    while (extra_link_count > 0) {
      std::size_t x = uniform_below(rng, device_count);
      std::size_t y = uniform_below(rng, device_count);
      if (x == y) continue;
      if (linked.contains({std::min(x, y), std::max(x, y)})) continue;
      connect(x, y);
      --extra_link_count;
    }
  } else {
    std::vector<std::pair<std::size_t, std::size_t>> free_pairs;
    for (std::size_t x = 0; x < device_count; ++x)
      for (std::size_t y = x + 1; y < device_count; ++y)
        if (!linked.contains({x, y})) free_pairs.emplace_back(x, y);
    for (std::size_t k = 0; k < extra_link_count; ++k) {
      const std::size_t pick = k + uniform_below(rng, free_pairs.size() - k);
      std::swap(free_pairs[k], free_pairs[pick]);
      connect(free_pairs[k].first, free_pairs[k].second);
    }
  }
  return f;
}

}  // namespace cdpmap::sim
