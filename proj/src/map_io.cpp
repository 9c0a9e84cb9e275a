#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ttroute/topo_map.hpp"

namespace ttroute {
namespace {

using nlohmann::json;

NodeKind parse_kind(const std::string& text) {
  if (text == "port") return NodeKind::port;
  if (text == "bifurcation") return NodeKind::bifurcation;
  throw MapParseError("unknown node kind '" + text + "'");
}

const char* kind_name(NodeKind kind) { return kind == NodeKind::port ? "port" : "bifurcation"; }

}  // namespace

TopologyMap parse_map(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw MapParseError(std::string("map is not valid JSON: ") + e.what());
  }

  std::vector<Node> nodes;
  std::vector<Edge> edges;
  MapMeta meta;
  try {
    for (const json& n : doc.at("nodes")) {
      nodes.push_back(Node{n.at("id").get<NodeId>(), n.at("x").get<double>(), n.at("y").get<double>(),
                           parse_kind(n.at("kind").get<std::string>())});
    }
    for (const json& e : doc.at("edges")) {
      edges.push_back(Edge{e.at("from").get<NodeId>(), e.at("to").get<NodeId>(), e.at("length").get<double>(),
                           e.at("zone_id").get<ZoneId>()});
    }
    if (doc.contains("meta")) {
      const json& m = doc.at("meta");
      meta.name = m.value("name", std::string{});
      meta.seed = m.value("seed", std::uint64_t{0});
    }
  } catch (const json::exception& e) {
    throw MapParseError(std::string("map does not match the schema: ") + e.what());
  }

  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.id < b.id; });
  return TopologyMap(std::move(nodes), std::move(edges), std::move(meta));
}

std::string serialize_map(const TopologyMap& map) {
  json doc;
  doc["meta"] = {{"name", map.meta().name}, {"seed", map.meta().seed}};
  json nodes = json::array();
  for (const Node& n : map.nodes()) {
    nodes.push_back({{"id", n.id}, {"x", n.x}, {"y", n.y}, {"kind", kind_name(n.kind)}});
  }
  json edges = json::array();
  for (const Edge& e : map.edges()) {
    edges.push_back({{"from", e.from}, {"to", e.to}, {"length", e.length}, {"zone_id", e.zone_id}});
  }
  doc["nodes"] = std::move(nodes);
  doc["edges"] = std::move(edges);
  return doc.dump(2) + "\n";
}

TopologyMap load_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MapParseError("cannot open map file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_map(buffer.str());
}

void save_map(const TopologyMap& map, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write map file " + path.string());
  out << serialize_map(map);
}

}  // namespace ttroute
