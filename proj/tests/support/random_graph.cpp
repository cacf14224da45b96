#include "random_graph.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace sgp::testing {

namespace {

constexpr std::array<NodeKind, 10> kOtherActors{
    NodeKind::kCar,   NodeKind::kVan,        NodeKind::kTaxi,    NodeKind::kElectricVehicle,
    NodeKind::kTruck, NodeKind::kBus,        NodeKind::kMotorcycle, NodeKind::kBicycle,
    NodeKind::kEmergency, NodeKind::kPedestrian};

constexpr std::array<NodeKind, 3> kObjects{NodeKind::kTrafficLight, NodeKind::kSpeedLimit,
                                           NodeKind::kStopSign};

constexpr std::array<Relation, 6> kBands{Relation::kSafetyHazard, Relation::kNearCollision,
                                         Relation::kSuperNear,    Relation::kVeryNear,
                                         Relation::kNear,         Relation::kVisible};
constexpr std::array<Relation, 4> kSectors{Relation::kDirectFront, Relation::kSideFront,
                                           Relation::kDirectRear, Relation::kSideRear};
constexpr std::array<Relation, 5> kLaneLinks{Relation::kTravelsTo, Relation::kLaneChange,
                                             Relation::kOpposes, Relation::kToLeftOf,
                                             Relation::kToRightOf};

}  // namespace

SceneGraph random_full_graph(std::uint64_t seed, const RandomGraphOptions& o) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto chance = [&](double p) { return std::bernoulli_distribution(p)(rng); };
  auto pick = [&](const auto& items) { return items[uniform(0, static_cast<int>(items.size()) - 1)]; };

  SceneGraph g("random_" + std::to_string(seed), Abstraction::kFull);
  std::map<NodeKind, int> counters;
  auto next_id = [&](NodeKind kind) {
    return std::string(name_of(kind)) + "_" + std::to_string(++counters[kind]);
  };

  const int n_junctions = uniform(0, o.max_junctions);
  const int n_roads = uniform(1, o.max_roads);
  const int n_lanes = uniform(n_roads, std::max(n_roads, o.max_lanes));

  std::vector<std::string> junctions;
  for (int i = 0; i < n_junctions; ++i) {
    junctions.push_back(next_id(NodeKind::kJunction));
    g.add_node(junctions.back(), NodeKind::kJunction);
  }
  std::vector<std::string> roads;
  for (int i = 0; i < n_roads; ++i) {
    roads.push_back(next_id(NodeKind::kRoad));
    g.add_node(roads.back(), NodeKind::kRoad);
    if (!junctions.empty() && chance(0.5)) g.add_edge(roads.back(), pick(junctions), Relation::kIsIn);
  }
  std::vector<std::string> lanes;
  for (int i = 0; i < n_lanes; ++i) {
    lanes.push_back(next_id(NodeKind::kLane));
    g.add_node(lanes.back(), NodeKind::kLane);
    const std::string& road = i < n_roads ? roads[static_cast<std::size_t>(i)] : pick(roads);
    g.add_edge(lanes.back(), road, Relation::kIsIn);
  }
  for (const auto& a : lanes) {
    for (const auto& b : lanes) {
      if (a == b) continue;
      for (Relation r : kLaneLinks) {
        if (chance(o.topology_p)) g.add_edge(a, b, r);
      }
    }
  }

  const int n_devices = uniform(0, o.max_devices);
  for (int i = 0; i < n_devices; ++i) {
    const NodeKind kind = pick(kObjects);
    const std::string id = next_id(kind);
    g.add_node(id, kind);
    g.add_edge(id, pick(lanes), Relation::kIsIn);
    if (kind == NodeKind::kTrafficLight) {
      const int governed = uniform(1, 3);
      for (int k = 0; k < governed; ++k) {
        const std::string lane = pick(lanes);
        if (!g.has_edge(id, lane, Relation::kControlsTrafficOf)) {
          g.add_edge(id, lane, Relation::kControlsTrafficOf);
        }
      }
    }
  }

  std::vector<std::string> actors{"ego"};
  g.add_node("ego", NodeKind::kEgo);
  g.add_edge("ego", pick(lanes), Relation::kIsIn);
  const int n_actors = uniform(0, o.max_actors);
  for (int i = 0; i < n_actors; ++i) {
    const NodeKind kind = pick(kOtherActors);
    actors.push_back(next_id(kind));
    g.add_node(actors.back(), kind);
    g.add_edge(actors.back(), pick(lanes), Relation::kIsIn);
  }
  for (std::size_t i = 0; i < actors.size(); ++i) {
    for (std::size_t j = i + 1; j < actors.size(); ++j) {
      if (!chance(o.pair_p)) continue;
      const bool forward = chance(0.5);
      const std::string& s = forward ? actors[i] : actors[j];
      const std::string& t = forward ? actors[j] : actors[i];
      g.add_edge(s, t, pick(kBands));
      if (chance(0.9)) g.add_edge(s, t, pick(kSectors));
      if (chance(0.4)) g.add_edge(s, t, chance(0.5) ? Relation::kToLeftOf : Relation::kToRightOf);
    }
  }
  return g;
}

}  // namespace sgp::testing
