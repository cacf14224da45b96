#include "sgp/abstraction.hpp"

#include <map>

namespace sgp {

namespace {

void require_full(const SceneGraph& g) {
  if (g.abstraction() != Abstraction::kFull) {
    throw GraphError(GraphErrorCode::kWrongAbstraction,
                     "expected a full graph, got " + std::string(name_of(g.abstraction())));
  }
}

// lane id -> road id, from the lane -> road is_in edges.
std::map<std::string, std::string, std::less<>> parent_roads(const SceneGraph& g) {
  std::map<std::string, std::string, std::less<>> road_of;
  for (const Edge& e : g.edges()) {
    if (e.relation != Relation::kIsIn) continue;
    const Node* s = g.find_node(e.source);
    const Node* t = g.find_node(e.target);
    if (s && t && s->kind == NodeKind::kLane && t->kind == NodeKind::kRoad) {
      road_of.emplace(e.source, e.target);
    }
  }
  return road_of;
}

bool is_actor_pair_edge(const SceneGraph& g, const Edge& e) {
  const Node* s = g.find_node(e.source);
  const Node* t = g.find_node(e.target);
  return s && t && is_actor(s->kind) && is_actor(t->kind) && is_pair_group(group_of(e.relation));
}

}  // namespace

SceneGraph to_road_level(const SceneGraph& full) {
  require_full(full);
  const auto road_of = parent_roads(full);
  auto lookup = [&](const std::string& lane) -> const std::string* {
    const auto it = road_of.find(lane);
    return it == road_of.end() ? nullptr : &it->second;
  };

  SceneGraph out(full.frame_id(), Abstraction::kRoadLevel);
  for (const Node& n : full.nodes()) {
    if (n.kind != NodeKind::kLane) out.add_node(n);
  }

  for (const Edge& e : full.edges()) {
    const NodeKind sk = full.find_node(e.source)->kind;
    const NodeKind tk = full.find_node(e.target)->kind;
    switch (e.relation) {
      case Relation::kIsIn:
        if (sk == NodeKind::kRoad) {
          out.insert_edge_unchecked(e.source, e.target, e.relation);
        } else if (sk != NodeKind::kLane && tk == NodeKind::kLane) {
          if (const std::string* road = lookup(e.target)) {
            out.insert_edge_unchecked(e.source, *road, Relation::kIsIn);
          }
        }
        break;
      case Relation::kTravelsTo: {
        const std::string* from = lookup(e.source);
        const std::string* to = lookup(e.target);
        if (from && to && *from != *to) out.insert_edge_unchecked(*from, *to, Relation::kTravelsTo);
        break;
      }
      case Relation::kControlsTrafficOf:
        if (const std::string* road = lookup(e.target)) {
          out.insert_edge_unchecked(e.source, *road, Relation::kControlsTrafficOf);
        }
        break;
      default:
        if (is_actor(sk) && is_actor(tk)) out.insert_edge_unchecked(e.source, e.target, e.relation);
        break;
    }
  }
  return out;
}

SceneGraph to_actor_only(const SceneGraph& full) {
  require_full(full);
  SceneGraph out(full.frame_id(), Abstraction::kActorOnly);
  for (const Node& n : full.nodes()) {
    if (is_actor(n.kind)) out.add_node(n);
  }
  for (const Edge& e : full.edges()) {
    if (is_actor_pair_edge(full, e)) out.insert_edge_unchecked(e.source, e.target, e.relation);
  }
  return out;
}

SceneGraph abstract(const SceneGraph& full, Abstraction level) {
  switch (level) {
    case Abstraction::kFull:
      require_full(full);
      return full;
    case Abstraction::kRoadLevel:
      return to_road_level(full);
    case Abstraction::kActorOnly:
      return to_actor_only(full);
  }
  return full;
}

std::set<std::pair<std::string, std::string>> lift_oracle(const SceneGraph& full) {
  std::set<std::pair<std::string, std::string>> pairs;
  for (const Edge& e : full.edges()) {
    if (e.relation != Relation::kTravelsTo) continue;
    std::string from;
    std::string to;
    for (const Edge& m : full.edges()) {
      if (m.relation != Relation::kIsIn) continue;
      const Node* road = full.find_node(m.target);
      if (road == nullptr || road->kind != NodeKind::kRoad) continue;
      if (m.source == e.source) from = m.target;
      if (m.source == e.target) to = m.target;
    }
    if (!from.empty() && !to.empty() && from != to) pairs.emplace(from, to);
  }
  return pairs;
}

}  // namespace sgp
