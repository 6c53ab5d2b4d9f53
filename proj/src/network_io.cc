#include "gasnet/network_io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>
#include <variant>

#include "json.hpp"

#include "gasnet/preprocess.h"

namespace gasnet {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += "\n";
    out += p;
  }
  return out;
}

double volume_field(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw DocumentError({where + ": missing field '" + key + "'"});
  const json& v = obj.at(key);
  try {
    if (v.is_string()) return parse_volume(v.get<std::string>());
    if (v.is_number()) return v.get<double>();
  } catch (const InputError& e) {
    throw DocumentError({where + "." + key + ": " + e.what()});
  }
  throw DocumentError({where + "." + key + ": expected a decimal string or number"});
}

std::optional<double> optional_volume(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return volume_field(obj, key, where);
}

std::size_t index_field(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj.at(key).is_number_unsigned()) {
    throw DocumentError({where + ": field '" + key + "' must be a nonnegative integer"});
  }
  return obj.at(key).get<std::size_t>();
}

const json& array_field(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj.at(key).is_array()) {
    throw DocumentError({where + ": missing array '" + key + "'"});
  }
  return obj.at(key);
}

std::string node_name(const Network& net, NodeIndex j) {
  const auto& name = net.node(j).name;
  return name.empty() ? std::to_string(j) : name;
}

}  // namespace

DocumentError::DocumentError(std::vector<std::string> problems)
    : InputError(join(problems)), problems_(std::move(problems)) {}

std::string format_volume(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw InputError("cannot format volume");
  return std::string(buf, ptr);
}

double parse_volume(std::string_view text) {
  double v = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw InputError("'" + std::string(text) + "' is not a finite decimal volume");
  }
  return v;
}

NetworkDocument parse_network_document(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DocumentError({std::string("parse error: ") + e.what()});
  }
  if (!doc.is_object()) throw DocumentError({"document must be a JSON object"});
  if (!doc.contains("format_version") || doc["format_version"] != kFormatVersion) {
    throw DocumentError({"unsupported or missing format_version (expected " +
                         std::to_string(kFormatVersion) + ")"});
  }

  const json& jnodes = array_field(doc, "nodes", "document");
  std::vector<NodeParams> nodes(jnodes.size());
  std::vector<bool> node_seen(jnodes.size(), false);
  for (const auto& jn : jnodes) {
    const std::size_t id = index_field(jn, "id", "node");
    const std::string where = "node " + std::to_string(id);
    if (id >= nodes.size() || node_seen[id]) {
      throw DocumentError({where + ": ids must be unique and cover 0..n-1"});
    }
    node_seen[id] = true;
    NodeParams& p = nodes[id];
    p.id = id;
    p.name = jn.value("name", std::string());
    p.max_inlet = volume_field(jn, "max_inlet", where);
    p.reservoir_capacity = volume_field(jn, "reservoir_capacity", where);
    p.nominal_consumption = volume_field(jn, "nominal_consumption", where);
  }

  const json& jedges = array_field(doc, "edges", "document");
  std::vector<EdgeParams> edges(jedges.size());
  std::vector<bool> edge_seen(jedges.size(), false);
  for (const auto& je : jedges) {
    const std::size_t id = index_field(je, "id", "edge");
    const std::string where = "edge " + std::to_string(id);
    if (id >= edges.size() || edge_seen[id]) {
      throw DocumentError({where + ": ids must be unique and cover 0..m-1"});
    }
    edge_seen[id] = true;
    EdgeParams& e = edges[id];
    e.id = id;
    e.name = je.value("name", std::string());
    e.from = index_field(je, "from", where);
    e.to = index_field(je, "to", where);
    e.capacity = volume_field(je, "capacity", where);
    e.failure_probability = optional_volume(je, "failure_probability", where);
    e.transfer_cost = optional_volume(je, "transfer_cost", where);
  }

  NetworkDocument out;
  try {
    out.network = Network(std::move(nodes), std::move(edges));
  } catch (const InputError& e) {
    throw DocumentError({e.what()});
  }
  const Network& net = out.network;

  out.nom = OperationState::zero(net, Mode::kNom);
  if (!doc.contains("nom") || !doc["nom"].is_object()) throw DocumentError({"missing 'nom' section"});
  const json& nom = doc["nom"];
  std::vector<bool> nom_node_seen(net.node_count(), false);
  for (const auto& jn : array_field(nom, "nodes", "nom")) {
    const std::size_t id = index_field(jn, "id", "nom node");
    const std::string where = "nom node " + std::to_string(id);
    if (id >= net.node_count() || nom_node_seen[id]) {
      throw DocumentError({where + ": unknown or repeated node id"});
    }
    nom_node_seen[id] = true;
    out.nom.inlet[id] = volume_field(jn, "inlet", where);
    out.nom.consumption[id] = volume_field(jn, "consumption", where);
    out.nom.reservoir_inlet[id] = optional_volume(jn, "reservoir_inlet", where).value_or(0.0);
  }
  std::vector<bool> nom_edge_seen(net.edge_count(), false);
  for (const auto& je : array_field(nom, "edges", "nom")) {
    const std::size_t id = index_field(je, "id", "nom edge");
    const std::string where = "nom edge " + std::to_string(id);
    if (id >= net.edge_count() || nom_edge_seen[id]) {
      throw DocumentError({where + ": unknown or repeated edge id"});
    }
    nom_edge_seen[id] = true;
    out.nom.flow[id] = volume_field(je, "flow", where);
  }
  std::vector<std::string> missing;
  for (NodeIndex j = 0; j < net.node_count(); ++j) {
    if (!nom_node_seen[j]) missing.push_back("nom: node " + std::to_string(j) + " has no entry");
  }
  for (EdgeIndex i = 0; i < net.edge_count(); ++i) {
    if (!nom_edge_seen[i]) missing.push_back("nom: edge " + std::to_string(i) + " has no entry");
  }
  if (!missing.empty()) throw DocumentError(std::move(missing));
  return out;
}

NetworkDocument read_network_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DocumentError({"cannot open " + path.string()});
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_network_document(buf.str());
}

void validate_document(const NetworkDocument& doc) {
  const Network& net = doc.network;
  auto order = topological_order(net);
  if (auto* cycle = std::get_if<CycleWitness>(&order)) {
    std::string path;
    for (NodeIndex j : cycle->nodes) path += node_name(net, j) + " -> ";
    path += node_name(net, cycle->nodes.front());
    throw DocumentError({"network contains a directed cycle (" + path +
                         "); the engine needs an acyclic network, see the strip-cycles command"});
  }
  const auto check = check_nom(net, doc.nom);
  if (!check.accepted) {
    std::vector<std::string> problems;
    for (const auto& v : check.violations) problems.push_back("nom: " + v.describe(net));
    throw DocumentError(std::move(problems));
  }
}

NetworkDocument load_network(const std::filesystem::path& path) {
  NetworkDocument doc = read_network_document(path);
  validate_document(doc);
  return doc;
}

std::string serialize_network(const Network& net, const OperationState& nom) {
  json doc;
  doc["format_version"] = kFormatVersion;
  json nodes = json::array();
  for (const auto& p : net.nodes()) {
    nodes.push_back({{"id", p.id},
                     {"name", p.name},
                     {"max_inlet", format_volume(p.max_inlet)},
                     {"reservoir_capacity", format_volume(p.reservoir_capacity)},
                     {"nominal_consumption", format_volume(p.nominal_consumption)}});
  }
  json edges = json::array();
  for (const auto& e : net.edges()) {
    json je = {{"id", e.id},
               {"name", e.name},
               {"from", e.from},
               {"to", e.to},
               {"capacity", format_volume(e.capacity)}};
    if (e.failure_probability) je["failure_probability"] = format_volume(*e.failure_probability);
    if (e.transfer_cost) je["transfer_cost"] = format_volume(*e.transfer_cost);
    edges.push_back(std::move(je));
  }
  json nom_nodes = json::array();
  for (NodeIndex j = 0; j < net.node_count(); ++j) {
    json jn = {{"id", j},
               {"inlet", format_volume(nom.inlet[j])},
               {"consumption", format_volume(nom.consumption[j])}};
    if (nom.reservoir_inlet[j] != 0) jn["reservoir_inlet"] = format_volume(nom.reservoir_inlet[j]);
    nom_nodes.push_back(std::move(jn));
  }
  json nom_edges = json::array();
  for (EdgeIndex i = 0; i < net.edge_count(); ++i) {
    nom_edges.push_back({{"id", i}, {"flow", format_volume(nom.flow[i])}});
  }
  doc["nodes"] = std::move(nodes);
  doc["edges"] = std::move(edges);
  doc["nom"] = {{"nodes", std::move(nom_nodes)}, {"edges", std::move(nom_edges)}};
  return doc.dump(2) + "\n";
}

}  // namespace gasnet
