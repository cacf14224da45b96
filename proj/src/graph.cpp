#include "sgp/graph.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <tuple>
#include <utility>

namespace sgp {

namespace {

struct KindInfo {
  NodeKind kind;
  NodeGroup group;
  std::string_view name;
};

constexpr std::array<KindInfo, kNodeKindCount> kKinds{{
    {NodeKind::kLane, NodeGroup::kStructural, "lane"},
    {NodeKind::kRoad, NodeGroup::kStructural, "road"},
    {NodeKind::kJunction, NodeGroup::kStructural, "junction"},
    {NodeKind::kEgo, NodeGroup::kActor, "ego"},
    {NodeKind::kCar, NodeGroup::kActor, "car"},
    {NodeKind::kVan, NodeGroup::kActor, "van"},
    {NodeKind::kTaxi, NodeGroup::kActor, "taxi"},
    {NodeKind::kElectricVehicle, NodeGroup::kActor, "electric_vehicle"},
    {NodeKind::kTruck, NodeGroup::kActor, "truck"},
    {NodeKind::kBus, NodeGroup::kActor, "bus"},
    {NodeKind::kMotorcycle, NodeGroup::kActor, "motorcycle"},
    {NodeKind::kBicycle, NodeGroup::kActor, "bicycle"},
    {NodeKind::kEmergency, NodeGroup::kActor, "emergency"},
    {NodeKind::kPedestrian, NodeGroup::kActor, "pedestrian"},
    {NodeKind::kTrafficLight, NodeGroup::kObject, "traffic_light"},
    {NodeKind::kSpeedLimit, NodeGroup::kObject, "speed_limit"},
    {NodeKind::kStopSign, NodeGroup::kObject, "stop_sign"},
}};

struct RelationInfo {
  Relation relation;
  RelationGroup group;
  std::string_view name;
  std::string_view display;
};

constexpr std::array<RelationInfo, kRelationCount> kRelations{{
    {Relation::kSafetyHazard, RelationGroup::kProximity, "safety_hazard", "safety hazard"},
    {Relation::kNearCollision, RelationGroup::kProximity, "near_collision", "near collision"},
    {Relation::kSuperNear, RelationGroup::kProximity, "super_near", "super near"},
    {Relation::kVeryNear, RelationGroup::kProximity, "very_near", "very near"},
    {Relation::kNear, RelationGroup::kProximity, "near", "near"},
    {Relation::kVisible, RelationGroup::kProximity, "visible", "visible"},
    {Relation::kDirectFront, RelationGroup::kDirectional, "direct_front", "direct front"},
    {Relation::kSideFront, RelationGroup::kDirectional, "side_front", "side front"},
    {Relation::kDirectRear, RelationGroup::kDirectional, "direct_rear", "direct rear"},
    {Relation::kSideRear, RelationGroup::kDirectional, "side_rear", "side rear"},
    {Relation::kToLeftOf, RelationGroup::kLateral, "to_left_of", "to left of"},
    {Relation::kToRightOf, RelationGroup::kLateral, "to_right_of", "to right of"},
    {Relation::kIsIn, RelationGroup::kHierarchical, "is_in", "is in"},
    {Relation::kOpposes, RelationGroup::kTopological, "opposes", "opposes"},
    {Relation::kTravelsTo, RelationGroup::kTopological, "travels_to", "travels to"},
    {Relation::kLaneChange, RelationGroup::kTopological, "lane_change", "lane change"},
    {Relation::kControlsTrafficOf, RelationGroup::kRegulatory, "controls_traffic_of",
     "controls traffic of"},
}};

const KindInfo& info(NodeKind kind) { return kKinds[static_cast<std::size_t>(kind)]; }
const RelationInfo& info(Relation relation) {
  return kRelations[static_cast<std::size_t>(relation)];
}

bool permitted_full(NodeKind s, Relation r, NodeKind t) {
  const RelationGroup g = group_of(r);
  switch (g) {
    case RelationGroup::kProximity:
    case RelationGroup::kDirectional:
      return is_actor(s) && is_actor(t);
    case RelationGroup::kLateral:
      return (is_actor(s) && is_actor(t)) || (s == NodeKind::kLane && t == NodeKind::kLane);
    case RelationGroup::kHierarchical:
      return ((is_actor(s) || is_object(s)) && t == NodeKind::kLane) ||
             (s == NodeKind::kLane && t == NodeKind::kRoad) ||
             (s == NodeKind::kRoad && t == NodeKind::kJunction);
    case RelationGroup::kTopological:
      return s == NodeKind::kLane && t == NodeKind::kLane;
    case RelationGroup::kRegulatory:
      return s == NodeKind::kTrafficLight && t == NodeKind::kLane;
  }
  return false;
}

bool permitted_road_level(NodeKind s, Relation r, NodeKind t) {
  const RelationGroup g = group_of(r);
  if (is_pair_group(g)) return is_actor(s) && is_actor(t);
  switch (r) {
    case Relation::kIsIn:
      return ((is_actor(s) || is_object(s)) && t == NodeKind::kRoad) ||
             (s == NodeKind::kRoad && t == NodeKind::kJunction);
    case Relation::kTravelsTo:
      return s == NodeKind::kRoad && t == NodeKind::kRoad;
    case Relation::kControlsTrafficOf:
      return s == NodeKind::kTrafficLight && t == NodeKind::kRoad;
    default:
      return false;
  }
}

}  // namespace

bool is_canonical_id(std::string_view id, NodeKind kind) {
  if (kind == NodeKind::kEgo) return id == "ego";
  const std::string_view prefix = name_of(kind);
  if (id.size() <= prefix.size() + 1 || id.substr(0, prefix.size()) != prefix ||
      id[prefix.size()] != '_') {
    return false;
  }
  const std::string_view digits = id.substr(prefix.size() + 1);
  if (digits.front() == '0') return false;
  return std::all_of(digits.begin(), digits.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
}

const std::array<NodeKind, kNodeKindCount>& all_node_kinds() {
  static const auto kinds = [] {
    std::array<NodeKind, kNodeKindCount> out{};
    for (std::size_t i = 0; i < kNodeKindCount; ++i) out[i] = kKinds[i].kind;
    return out;
  }();
  return kinds;
}

const std::array<Relation, kRelationCount>& all_relations() {
  static const auto relations = [] {
    std::array<Relation, kRelationCount> out{};
    for (std::size_t i = 0; i < kRelationCount; ++i) out[i] = kRelations[i].relation;
    return out;
  }();
  return relations;
}

const std::array<Abstraction, 3>& all_abstractions() {
  static const std::array<Abstraction, 3> values{Abstraction::kFull, Abstraction::kRoadLevel,
                                                 Abstraction::kActorOnly};
  return values;
}

NodeGroup group_of(NodeKind kind) { return info(kind).group; }
RelationGroup group_of(Relation relation) { return info(relation).group; }
std::string_view name_of(NodeKind kind) { return info(kind).name; }
std::string_view name_of(Relation relation) { return info(relation).name; }
std::string_view display_name(Relation relation) { return info(relation).display; }

std::string_view name_of(Abstraction abstraction) {
  switch (abstraction) {
    case Abstraction::kFull:
      return "full";
    case Abstraction::kRoadLevel:
      return "road_level";
    case Abstraction::kActorOnly:
      return "actor_only";
  }
  return "full";
}

std::string_view name_of(NodeGroup group) {
  switch (group) {
    case NodeGroup::kStructural:
      return "structural";
    case NodeGroup::kActor:
      return "actor";
    case NodeGroup::kObject:
      return "object";
  }
  return "structural";
}

std::string_view name_of(RelationGroup group) {
  switch (group) {
    case RelationGroup::kProximity:
      return "proximity";
    case RelationGroup::kDirectional:
      return "directional";
    case RelationGroup::kLateral:
      return "lateral";
    case RelationGroup::kHierarchical:
      return "hierarchical";
    case RelationGroup::kTopological:
      return "topological";
    case RelationGroup::kRegulatory:
      return "regulatory";
  }
  return "proximity";
}

std::optional<NodeKind> node_kind_from_name(std::string_view name) {
  for (const auto& k : kKinds) {
    if (k.name == name) return k.kind;
  }
  return std::nullopt;
}

std::optional<Relation> relation_from_name(std::string_view name) {
  for (const auto& r : kRelations) {
    if (r.name == name) return r.relation;
  }
  return std::nullopt;
}

std::optional<Relation> relation_from_display(std::string_view display) {
  for (const auto& r : kRelations) {
    if (r.display == display) return r.relation;
  }
  return std::nullopt;
}

std::optional<Abstraction> abstraction_from_name(std::string_view name) {
  for (Abstraction a : all_abstractions()) {
    if (name_of(a) == name) return a;
  }
  return std::nullopt;
}

bool relation_permitted(Abstraction abstraction, NodeKind source, Relation relation,
                        NodeKind target) {
  switch (abstraction) {
    case Abstraction::kFull:
      return permitted_full(source, relation, target);
    case Abstraction::kRoadLevel:
      return permitted_road_level(source, relation, target);
    case Abstraction::kActorOnly:
      return is_pair_group(group_of(relation)) && is_actor(source) && is_actor(target);
  }
  return false;
}

bool natural_less(std::string_view a, std::string_view b) {
  auto is_digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (is_digit(a[i]) && is_digit(b[j])) {
      std::size_t ie = i;
      std::size_t je = j;
      while (ie < a.size() && is_digit(a[ie])) ++ie;
      while (je < b.size() && is_digit(b[je])) ++je;
      // Compare magnitudes with leading zeros stripped.
      std::size_t is = i;
      std::size_t js = j;
      while (is + 1 < ie && a[is] == '0') ++is;
      while (js + 1 < je && b[js] == '0') ++js;
      const std::string_view na = a.substr(is, ie - is);
      const std::string_view nb = b.substr(js, je - js);
      if (na.size() != nb.size()) return na.size() < nb.size();
      if (na != nb) return na < nb;
      // Equal value: fewer leading zeros first, so the order stays strict.
      if (ie - i != je - j) return ie - i < je - j;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return static_cast<unsigned char>(a[i]) < static_cast<unsigned char>(b[j]);
      ++i;
      ++j;
    }
  }
  return a.size() - i < b.size() - j;
}

const Node* SceneGraph::find_node(std::string_view id) const {
  const auto it = index_.find(id);
  return it == index_.end() ? nullptr : &nodes_[it->second];
}

bool SceneGraph::has_edge(std::string_view source, std::string_view target,
                          Relation relation) const {
  return std::any_of(edges_.begin(), edges_.end(), [&](const Edge& e) {
    return e.relation == relation && e.source == source && e.target == target;
  });
}

void SceneGraph::add_node(Node node) {
  if (node.id.empty()) throw GraphError(GraphErrorCode::kEmptyId, "node id is empty");
  if (index_.contains(node.id)) {
    throw GraphError(GraphErrorCode::kDuplicateNode, "duplicate node id '" + node.id + "'");
  }
  index_.emplace(node.id, nodes_.size());
  nodes_.push_back(std::move(node));
}

bool SceneGraph::insert_edge_unchecked(const std::string& source, const std::string& target,
                                       Relation relation) {
  if (find_node(source) == nullptr || find_node(target) == nullptr) {
    throw GraphError(GraphErrorCode::kUnknownNode,
                     "edge endpoint not in graph: " + source + " -> " + target);
  }
  if (source == target) {
    throw GraphError(GraphErrorCode::kSelfLoop, "self loop on '" + source + "'");
  }
  if (has_edge(source, target, relation)) return false;
  edges_.push_back(Edge{source, target, relation});
  return true;
}

void SceneGraph::add_edge(const std::string& source, const std::string& target,
                          Relation relation) {
  const Node* s = find_node(source);
  const Node* t = find_node(target);
  if (s == nullptr || t == nullptr) {
    throw GraphError(GraphErrorCode::kUnknownNode,
                     "edge endpoint not in graph: " + source + " -> " + target);
  }
  if (source == target) {
    throw GraphError(GraphErrorCode::kSelfLoop, "self loop on '" + source + "'");
  }
  const std::string triple =
      "(" + source + ", " + std::string(name_of(relation)) + ", " + target + ")";
  if (has_edge(source, target, relation)) {
    throw GraphError(GraphErrorCode::kDuplicateEdge, "duplicate edge " + triple);
  }
  if (!relation_permitted(abstraction_, s->kind, relation, t->kind)) {
    throw GraphError(GraphErrorCode::kTyping,
                     "edge " + triple + " not permitted in " +
                         std::string(name_of(abstraction_)) + " graph");
  }
  const RelationGroup group = group_of(relation);
  if (is_actor(s->kind) && is_actor(t->kind) && is_pair_group(group)) {
    for (const Edge& e : edges_) {
      if (e.source == source && e.target == target && group_of(e.relation) == group) {
        throw GraphError(GraphErrorCode::kCardinality,
                         "pair (" + source + ", " + target + ") already has " +
                             std::string(name_of(group)) + " label " +
                             std::string(name_of(e.relation)));
      }
    }
  }
  edges_.push_back(Edge{source, target, relation});
}

bool SceneGraph::remove_edge(std::string_view source, std::string_view target,
                             Relation relation) {
  const auto it = std::find_if(edges_.begin(), edges_.end(), [&](const Edge& e) {
    return e.relation == relation && e.source == source && e.target == target;
  });
  if (it == edges_.end()) return false;
  edges_.erase(it);
  return true;
}

std::vector<Violation> validate_typing(const SceneGraph& graph) {
  std::vector<Violation> out;
  for (const Edge& e : graph.edges()) {
    const Node* s = graph.find_node(e.source);
    const Node* t = graph.find_node(e.target);
    if (s == nullptr || t == nullptr) {
      out.push_back({ViolationKind::kUnresolvedEndpoint, e,
                     "unresolved endpoint in " + e.source + " -> " + e.target});
      continue;
    }
    if (e.source == e.target) {
      out.push_back({ViolationKind::kSelfLoop, e, "self loop on " + e.source});
      continue;
    }
    if (!relation_permitted(graph.abstraction(), s->kind, e.relation, t->kind)) {
      out.push_back({ViolationKind::kTyping, e,
                     std::string(name_of(s->kind)) + " -" + std::string(name_of(e.relation)) +
                         "-> " + std::string(name_of(t->kind)) + " not allowed in " +
                         std::string(name_of(graph.abstraction())) + " graph"});
    }
  }
  return out;
}

std::vector<std::string> check_invariants(const SceneGraph& graph) {
  std::vector<std::string> problems;
  std::size_t egos = 0;
  for (const Node& n : graph.nodes()) {
    if (n.kind == NodeKind::kEgo) ++egos;
    if (!is_canonical_id(n.id, n.kind)) {
      problems.push_back("malformed id '" + n.id + "' for class " + std::string(name_of(n.kind)));
    }
  }
  if (egos != 1) problems.push_back("expected exactly one ego node, found " + std::to_string(egos));

  std::set<std::tuple<std::string, std::string, Relation>> seen;
  std::set<std::tuple<std::string, std::string, RelationGroup>> pair_groups;
  std::map<std::string, int> memberships;
  for (const Edge& e : graph.edges()) {
    if (!seen.emplace(e.source, e.target, e.relation).second) {
      problems.push_back("duplicate edge (" + e.source + ", " + std::string(name_of(e.relation)) +
                         ", " + e.target + ")");
    }
    const Node* s = graph.find_node(e.source);
    const Node* t = graph.find_node(e.target);
    if (s == nullptr || t == nullptr) continue;
    const RelationGroup g = group_of(e.relation);
    if (is_actor(s->kind) && is_actor(t->kind) && is_pair_group(g) &&
        !pair_groups.emplace(e.source, e.target, g).second) {
      problems.push_back("pair (" + e.source + ", " + e.target + ") has more than one " +
                         std::string(name_of(g)) + " label");
    }
    if (e.relation == Relation::kIsIn) ++memberships[e.source];
  }

  auto needs_membership = [&](NodeKind k) {
    switch (graph.abstraction()) {
      case Abstraction::kFull:
        return is_actor(k) || k == NodeKind::kLane;
      case Abstraction::kRoadLevel:
        return is_actor(k);
      case Abstraction::kActorOnly:
        return false;
    }
    return false;
  };
  for (const Node& n : graph.nodes()) {
    if (!needs_membership(n.kind)) continue;
    const int count = memberships.contains(n.id) ? memberships.at(n.id) : 0;
    if (count != 1) {
      problems.push_back(n.id + " has " + std::to_string(count) +
                         " outgoing is_in edges, expected 1");
    }
  }
  return problems;
}

std::vector<Edge> sorted_edges(std::span<const Edge> edges) {
  std::vector<Edge> out(edges.begin(), edges.end());
  std::sort(out.begin(), out.end());
  return out;
}

bool graph_equal(const SceneGraph& a, const SceneGraph& b) {
  if (a.nodes().size() != b.nodes().size() || a.edges().size() != b.edges().size()) return false;
  auto node_keys = [](const SceneGraph& g) {
    std::vector<std::pair<std::string, NodeKind>> keys;
    keys.reserve(g.nodes().size());
    for (const Node& n : g.nodes()) keys.emplace_back(n.id, n.kind);
    std::sort(keys.begin(), keys.end());
    return keys;
  };
  return node_keys(a) == node_keys(b) && sorted_edges(a.edges()) == sorted_edges(b.edges());
}

}  // namespace sgp
