#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dsop/errors.hpp"
#include "dsop/instance_io.hpp"

namespace dsop {

namespace {

using json = nlohmann::ordered_json;

const json& require(const json& node, const char* key, const std::string& where) {
  if (!node.is_object())
    throw ParseError(where.empty() ? std::string("document") : where, "expected an object");
  const auto it = node.find(key);
  if (it == node.end()) {
    const std::string field = where.empty() ? key : where + "." + key;
    throw ParseError(field, "missing required field \"" + std::string(key) + "\"");
  }
  return *it;
}

double number(const json& node, const std::string& field) {
  if (!node.is_number()) throw ParseError(field, "expected a number");
  return node.get<double>();
}

std::uint32_t vertex_ref(const json& node, const std::string& field) {
  if (!node.is_number_integer() || node.get<std::int64_t>() < 0)
    throw ParseError(field, "expected a non-negative integer vertex index");
  return static_cast<std::uint32_t>(node.get<std::int64_t>());
}

Distribution parse_distribution(const json& node, const std::string& where) {
  const auto& type = require(node, "type", where);
  if (!type.is_string()) throw ParseError(where + ".type", "expected a string");
  const auto kind = type.get<std::string>();
  if (kind == "gamma") {
    return GammaDist{number(require(node, "shape", where), where + ".shape"),
                     number(require(node, "scale", where), where + ".scale")};
  }
  if (kind == "discrete") {
    const auto& outcomes = require(node, "outcomes", where);
    if (!outcomes.is_array()) throw ParseError(where + ".outcomes", "expected an array");
    DiscreteDist d;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      const std::string f = where + ".outcomes[" + std::to_string(i) + "]";
      d.outcomes.push_back({number(require(outcomes[i], "time", f), f + ".time"),
                            number(require(outcomes[i], "prob", f), f + ".prob")});
    }
    return d;
  }
  throw ParseError(where + ".type", "unknown distribution type \"" + kind + "\"");
}

json dump_distribution(const Distribution& dist) {
  json out;
  if (const auto* g = std::get_if<GammaDist>(&dist)) {
    out["type"] = "gamma";
    out["shape"] = g->shape;
    out["scale"] = g->scale;
  } else {
    out["type"] = "discrete";
    json outcomes = json::array();
    for (const auto& o : std::get<DiscreteDist>(dist).outcomes)
      outcomes.push_back(json{{"time", o.time}, {"prob", o.probability}});
    out["outcomes"] = std::move(outcomes);
  }
  return out;
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

}  // namespace

Instance load_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("line " + std::to_string(line_of(text, e.byte)), e.what());
  }

  std::vector<VertexData> vertices;
  const auto& vnode = require(doc, "vertices", "");
  if (!vnode.is_array()) throw ParseError("vertices", "expected an array");
  for (std::size_t i = 0; i < vnode.size(); ++i) {
    const std::string f = "vertices[" + std::to_string(i) + "]";
    VertexData v;
    v.reward = number(require(vnode[i], "reward", f), f + ".reward");
    if (const auto it = vnode[i].find("penalty"); it != vnode[i].end())
      v.penalty = number(*it, f + ".penalty");
    vertices.push_back(v);
  }

  std::vector<TimeDependentEdge> edges;
  const auto& enode = require(doc, "edges", "");
  if (!enode.is_array()) throw ParseError("edges", "expected an array");
  for (std::size_t i = 0; i < enode.size(); ++i) {
    const std::string f = "edges[" + std::to_string(i) + "]";
    TimeDependentEdge edge;
    edge.from = VertexId(vertex_ref(require(enode[i], "from", f), f + ".from"));
    edge.to = VertexId(vertex_ref(require(enode[i], "to", f), f + ".to"));
    const auto& bands = require(enode[i], "bands", f);
    if (!bands.is_array()) throw ParseError(f + ".bands", "expected an array");
    for (std::size_t b = 0; b < bands.size(); ++b) {
      const std::string bf = f + ".bands[" + std::to_string(b) + "]";
      Band band;
      band.start = number(require(bands[b], "start", bf), bf + ".start");
      band.dist = parse_distribution(require(bands[b], "dist", bf), bf + ".dist");
      edge.bands.push_back(std::move(band));
    }
    edges.push_back(std::move(edge));
  }

  const auto start = VertexId(vertex_ref(require(doc, "start", ""), "start"));
  const auto exit = VertexId(vertex_ref(require(doc, "exit", ""), "exit"));

  Instance instance(std::move(vertices), std::move(edges), start, exit);
  if (auto violations = validate_instance(instance); !violations.empty())
    throw ValidationError(std::move(violations));
  return instance;
}

std::string save_instance(const Instance& instance) {
  json doc;
  json vertices = json::array();
  for (const auto& v : instance.vertices())
    vertices.push_back(json{{"reward", v.reward}, {"penalty", v.penalty}});
  doc["vertices"] = std::move(vertices);

  json edges = json::array();
  for (const auto& e : instance.edges()) {
    json bands = json::array();
    for (const auto& b : e.bands)
      bands.push_back(json{{"start", b.start}, {"dist", dump_distribution(b.dist)}});
    edges.push_back(json{{"from", e.from.value}, {"to", e.to.value}, {"bands", std::move(bands)}});
  }
  doc["edges"] = std::move(edges);
  doc["start"] = instance.start().value;
  doc["exit"] = instance.exit().value;
  return doc.dump(1) + "\n";
}

Instance read_instance_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error("cannot open instance file " + file.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_instance(buffer.str());
}

void write_instance_file(const std::filesystem::path& file, const Instance& instance) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write instance file " + file.string());
  out << save_instance(instance);
}

}  // namespace dsop
