#include "sgp/serialization.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <tuple>

#include <yaml-cpp/yaml.h>

#include "json.hpp"

namespace sgp {

namespace {

using ordered_json = nlohmann::ordered_json;

Block block_of(NodeKind source, Relation relation, NodeKind target) {
  if (relation == Relation::kIsIn && source == NodeKind::kRoad && target == NodeKind::kJunction) {
    return Block::kRoadToJunction;
  }
  if (relation == Relation::kIsIn && source == NodeKind::kLane && target == NodeKind::kRoad) {
    return Block::kLaneToRoad;
  }
  if (is_structural(source) && is_structural(target)) return Block::kConnectivity;
  if (is_object(source)) return Block::kObjects;
  if (is_actor(source) && is_structural(target)) return Block::kActorMembership;
  return Block::kInteractions;
}

bool label_less(Relation a, Relation b) {
  const auto ga = group_of(a);
  const auto gb = group_of(b);
  if (ga != gb) return ga < gb;
  return name_of(a) < name_of(b);
}

bool grouped_block(Block b) {
  return b == Block::kRoadToJunction || b == Block::kLaneToRoad || b == Block::kActorMembership;
}

int node_rank(NodeKind kind) {
  switch (kind) {
    case NodeKind::kJunction:
      return 0;
    case NodeKind::kRoad:
      return 1;
    case NodeKind::kLane:
      return 2;
    case NodeKind::kEgo:
      return 5;
    default:
      return is_object(kind) ? 3 : 4;
  }
}

// Plain scalars only for strings that no YAML 1.1/1.2 reader could take for
// anything but a string; everything else goes out double-quoted.
bool yaml_plain_ok(std::string_view s) {
  if (s.empty() || s.front() == ' ' || s.back() == ' ') return false;
  const unsigned char first = static_cast<unsigned char>(s.front());
  if (!std::isalpha(first) && first != '_') return false;
  for (char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) || c == '_' || c == ' ' || c == '-' || c == '.')) return false;
  }
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  static const std::array<std::string_view, 11> kReserved{
      "true", "false", "yes", "no", "on", "off", "null", "y", "n", ".inf", ".nan"};
  return std::find(kReserved.begin(), kReserved.end(), lower) == kReserved.end();
}

std::string yaml_scalar(std::string_view s) {
  if (yaml_plain_ok(s)) return std::string(s);
  // JSON string syntax is valid YAML double-quoted syntax.
  return ordered_json(std::string(s)).dump();
}

// 1-based (line, column) of a 1-based byte offset.
std::pair<std::size_t, std::size_t> line_column(std::string_view body, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < body.size(); ++i) {
    if (body[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

struct RawLink {
  std::string source;
  std::string target;
  std::vector<std::string> labels;
};

SceneGraph assemble(std::string frame_id,
                    const std::vector<std::pair<std::string, std::string>>& nodes,
                    const std::vector<RawLink>& links) {
  std::vector<std::pair<std::string, NodeKind>> typed;
  bool has_lane = false;
  bool has_road = false;
  for (const auto& [id, cls] : nodes) {
    const auto kind = node_kind_from_name(cls);
    if (!kind) throw ParseError("unknown class '" + cls + "' on node '" + id + "'");
    has_lane = has_lane || *kind == NodeKind::kLane;
    has_road = has_road || *kind == NodeKind::kRoad;
    typed.emplace_back(id, *kind);
  }
  const Abstraction abstraction = has_lane   ? Abstraction::kFull
                                  : has_road ? Abstraction::kRoadLevel
                                             : Abstraction::kActorOnly;
  SceneGraph g(std::move(frame_id), abstraction);
  try {
    for (auto& [id, kind] : typed) g.add_node(id, kind);
    for (const auto& link : links) {
      if (link.labels.empty()) {
        throw ParseError("link " + link.source + " -> " + link.target + " has no labels");
      }
      for (const auto& label : link.labels) {
        const auto relation = relation_from_display(label);
        if (!relation) throw ParseError("unknown label '" + label + "'");
        if (!g.insert_edge_unchecked(link.source, link.target, *relation)) {
          throw ParseError("repeated label '" + label + "' on " + link.source + " -> " +
                           link.target);
        }
      }
    }
  } catch (const GraphError& e) {
    throw ParseError(e.what());
  }
  if (const auto violations = validate_typing(g); !violations.empty()) {
    std::string message = "typing violations:";
    for (const auto& v : violations) message += " " + v.message + ";";
    throw ParseError(message);
  }
  return g;
}

}  // namespace

const std::array<Format, 3>& all_formats() {
  static const std::array<Format, 3> formats{Format::kText, Format::kJson, Format::kYaml};
  return formats;
}

std::string_view name_of(Format format) {
  switch (format) {
    case Format::kText:
      return "text";
    case Format::kJson:
      return "json";
    case Format::kYaml:
      return "yaml";
  }
  return "text";
}

std::string_view file_extension(Format format) {
  return format == Format::kText ? "txt" : name_of(format);
}

std::optional<Format> format_from_name(std::string_view name) {
  for (Format f : all_formats()) {
    if (name_of(f) == name) return f;
  }
  return std::nullopt;
}

std::vector<PairEntry> canonical_order(const SceneGraph& graph) {
  std::map<std::pair<std::string, std::string>, PairEntry> by_pair;
  for (const Edge& e : graph.edges()) {
    const Node* s = graph.find_node(e.source);
    const Node* t = graph.find_node(e.target);
    if (s == nullptr || t == nullptr) continue;
    auto [it, fresh] = by_pair.try_emplace({e.source, e.target});
    if (fresh) {
      it->second = PairEntry{block_of(s->kind, e.relation, t->kind), e.source, e.target, {}};
    }
    it->second.labels.push_back(e.relation);
  }

  std::vector<PairEntry> entries;
  entries.reserve(by_pair.size());
  for (auto& [key, entry] : by_pair) {
    std::sort(entry.labels.begin(), entry.labels.end(), label_less);
    entry.labels.erase(std::unique(entry.labels.begin(), entry.labels.end()), entry.labels.end());
    entries.push_back(std::move(entry));
  }

  auto sort_key = [&](const PairEntry& p) {
    const bool ego_last = p.block == Block::kActorMembership && p.source == "ego";
    return std::tuple(p.block, ego_last);
  };
  std::sort(entries.begin(), entries.end(), [&](const PairEntry& a, const PairEntry& b) {
    const auto ka = sort_key(a);
    const auto kb = sort_key(b);
    if (ka != kb) return ka < kb;
    if (a.source != b.source) return natural_less(a.source, b.source);
    return natural_less(a.target, b.target);
  });
  return entries;
}

std::vector<const Node*> canonical_nodes(const SceneGraph& graph) {
  std::vector<const Node*> nodes;
  nodes.reserve(graph.nodes().size());
  for (const Node& n : graph.nodes()) nodes.push_back(&n);
  std::sort(nodes.begin(), nodes.end(), [](const Node* a, const Node* b) {
    const int ra = node_rank(a->kind);
    const int rb = node_rank(b->kind);
    if (ra != rb) return ra < rb;
    return natural_less(a->id, b->id);
  });
  return nodes;
}

SerializedGraph serialize_text(const SceneGraph& graph) {
  const auto entries = canonical_order(graph);
  std::vector<std::string> statements;

  std::size_t i = 0;
  while (i < entries.size()) {
    const Block block = entries[i].block;
    std::size_t end = i;
    while (end < entries.size() && entries[end].block == block) ++end;

    if (grouped_block(block)) {
      // Targets in order of first appearance; subjects keep canonical order.
      std::vector<std::string> targets;
      std::map<std::string, std::vector<std::string>> subjects;
      for (std::size_t k = i; k < end; ++k) {
        auto& list = subjects[entries[k].target];
        if (list.empty()) targets.push_back(entries[k].target);
        list.push_back(entries[k].source);
      }
      for (const auto& target : targets) {
        std::string stmt;
        for (const auto& s : subjects[target]) {
          if (!stmt.empty()) stmt += ", ";
          stmt += s;
        }
        stmt += " ";
        stmt += display_name(Relation::kIsIn);
        stmt += " " + target;
        statements.push_back(std::move(stmt));
      }
    } else {
      for (std::size_t k = i; k < end; ++k) {
        std::string stmt = entries[k].source + " ";
        for (std::size_t l = 0; l < entries[k].labels.size(); ++l) {
          if (l > 0) stmt += ", ";
          stmt += display_name(entries[k].labels[l]);
        }
        stmt += " " + entries[k].target;
        statements.push_back(std::move(stmt));
      }
    }
    i = end;
  }

  std::string body;
  for (std::size_t k = 0; k < statements.size(); ++k) {
    if (k > 0) body += " | ";
    body += statements[k];
  }
  return {Format::kText, std::move(body), graph.frame_id()};
}

SerializedGraph serialize_json(const SceneGraph& graph) {
  ordered_json doc;
  doc["nodes"] = ordered_json::array();
  for (const Node* n : canonical_nodes(graph)) {
    ordered_json node;
    node["id"] = n->id;
    node["base_class"] = std::string(name_of(n->kind));
    doc["nodes"].push_back(std::move(node));
  }
  doc["links"] = ordered_json::array();
  for (const PairEntry& p : canonical_order(graph)) {
    ordered_json link;
    link["source"] = p.source;
    link["target"] = p.target;
    link["labels"] = ordered_json::array();
    for (Relation r : p.labels) link["labels"].push_back(std::string(display_name(r)));
    doc["links"].push_back(std::move(link));
  }
  return {Format::kJson, doc.dump(2) + "\n", graph.frame_id()};
}

SerializedGraph serialize_yaml(const SceneGraph& graph) {
  std::string body;
  const auto nodes = canonical_nodes(graph);
  if (nodes.empty()) {
    body += "nodes: []\n";
  } else {
    body += "nodes:\n";
    for (const Node* n : nodes) {
      body += "  - id: " + yaml_scalar(n->id) + "\n";
      body += "    base_class: " + yaml_scalar(name_of(n->kind)) + "\n";
    }
  }
  const auto entries = canonical_order(graph);
  if (entries.empty()) {
    body += "links: []\n";
  } else {
    body += "links:\n";
    for (const PairEntry& p : entries) {
      body += "  - source: " + yaml_scalar(p.source) + "\n";
      body += "    target: " + yaml_scalar(p.target) + "\n";
      body += "    labels:\n";
      for (Relation r : p.labels) body += "      - " + yaml_scalar(display_name(r)) + "\n";
    }
  }
  return {Format::kYaml, std::move(body), graph.frame_id()};
}

SerializedGraph serialize(const SceneGraph& graph, Format format) {
  switch (format) {
    case Format::kText:
      return serialize_text(graph);
    case Format::kJson:
      return serialize_json(graph);
    case Format::kYaml:
      return serialize_yaml(graph);
  }
  return serialize_text(graph);
}

SceneGraph parse_json(std::string_view body, std::string frame_id) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, column] = line_column(body, e.byte);
    throw ParseError("json syntax error at " + std::to_string(line) + ":" +
                         std::to_string(column) + ": " + e.what(),
                     line, column);
  }

  auto expect_string = [](const ordered_json& obj, const char* key, std::string_view where) {
    if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_string()) {
      throw ParseError(std::string(where) + ": expected string field '" + key + "'");
    }
    return obj.at(key).get<std::string>();
  };

  if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("links") ||
      !doc.at("nodes").is_array() || !doc.at("links").is_array()) {
    throw ParseError("json graph needs top-level 'nodes' and 'links' arrays");
  }
  std::vector<std::pair<std::string, std::string>> nodes;
  for (const auto& n : doc.at("nodes")) {
    nodes.emplace_back(expect_string(n, "id", "node"), expect_string(n, "base_class", "node"));
  }
  std::vector<RawLink> links;
  for (const auto& l : doc.at("links")) {
    RawLink link{expect_string(l, "source", "link"), expect_string(l, "target", "link"), {}};
    if (!l.contains("labels") || !l.at("labels").is_array()) {
      throw ParseError("link: expected 'labels' array");
    }
    for (const auto& label : l.at("labels")) {
      if (!label.is_string()) throw ParseError("link: labels must be strings");
      link.labels.push_back(label.get<std::string>());
    }
    links.push_back(std::move(link));
  }
  return assemble(std::move(frame_id), nodes, links);
}

SceneGraph parse_yaml(std::string_view body, std::string frame_id) {
  YAML::Node doc;
  try {
    doc = YAML::Load(std::string(body));
  } catch (const YAML::ParserException& e) {
    const auto line = static_cast<std::size_t>(e.mark.line + 1);
    const auto column = static_cast<std::size_t>(e.mark.column + 1);
    throw ParseError("yaml syntax error at " + std::to_string(line) + ":" +
                         std::to_string(column) + ": " + e.msg,
                     line, column);
  }

  auto expect_string = [](const YAML::Node& obj, const char* key, std::string_view where) {
    if (!obj.IsMap() || !obj[key] || !obj[key].IsScalar()) {
      throw ParseError(std::string(where) + ": expected scalar field '" + key + "'");
    }
    return obj[key].as<std::string>();
  };

  if (!doc.IsMap() || !doc["nodes"] || !doc["links"] || !doc["nodes"].IsSequence() ||
      !doc["links"].IsSequence()) {
    throw ParseError("yaml graph needs top-level 'nodes' and 'links' sequences");
  }
  std::vector<std::pair<std::string, std::string>> nodes;
  for (const auto& n : doc["nodes"]) {
    nodes.emplace_back(expect_string(n, "id", "node"), expect_string(n, "base_class", "node"));
  }
  std::vector<RawLink> links;
  for (const auto& l : doc["links"]) {
    RawLink link{expect_string(l, "source", "link"), expect_string(l, "target", "link"), {}};
    if (!l["labels"] || !l["labels"].IsSequence()) {
      throw ParseError("link: expected 'labels' sequence");
    }
    for (const auto& label : l["labels"]) {
      if (!label.IsScalar()) throw ParseError("link: labels must be scalars");
      link.labels.push_back(label.as<std::string>());
    }
    links.push_back(std::move(link));
  }
  return assemble(std::move(frame_id), nodes, links);
}

}  // namespace sgp
