#include "sgp/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace sgp {

namespace {

constexpr double kTieEpsilon = 1e-9;

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

std::string joined(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

}  // namespace

std::vector<std::string> validate_config(const ExtractionConfig& config) {
  std::vector<std::string> errors;
  double previous = 0.0;
  for (std::size_t i = 0; i < config.band_upper_m.size(); ++i) {
    const double bound = config.band_upper_m[i];
    if (!(bound > previous)) {
      errors.push_back("proximity band bounds must be positive and strictly increasing");
      break;
    }
    previous = bound;
  }
  if (!(config.direct_half_angle_deg > 0.0 &&
        config.direct_half_angle_deg < config.side_boundary_deg &&
        config.side_boundary_deg < config.rear_split_deg && config.rear_split_deg < 180.0)) {
    errors.emplace_back("sector angles must satisfy 0 < direct < side < rear split < 180");
  }
  if (!(config.lateral_threshold_m > 0.0)) errors.emplace_back("lateral threshold must be positive");
  if (!(config.membership_tolerance_m > 0.0)) {
    errors.emplace_back("membership tolerance must be positive");
  }
  return errors;
}

std::optional<Relation> proximity_band(double distance_m, const ExtractionConfig& config) {
  static constexpr std::array<Relation, 6> kBands{
      Relation::kSafetyHazard, Relation::kNearCollision, Relation::kSuperNear,
      Relation::kVeryNear,     Relation::kNear,          Relation::kVisible};
  for (std::size_t i = 0; i < kBands.size(); ++i) {
    if (distance_m <= config.band_upper_m[i]) return kBands[i];
  }
  return std::nullopt;
}

double wrap_angle(double radians) {
  double wrapped = std::remainder(radians, 2.0 * std::numbers::pi);
  if (wrapped <= -std::numbers::pi) wrapped += 2.0 * std::numbers::pi;
  return wrapped;
}

Relation directional_sector(double rel_bearing_rad, const ExtractionConfig& config) {
  const double a = std::abs(wrap_angle(rel_bearing_rad));
  if (a <= deg_to_rad(config.direct_half_angle_deg)) return Relation::kDirectFront;
  if (a <= deg_to_rad(config.side_boundary_deg)) return Relation::kSideFront;
  if (a <= deg_to_rad(config.rear_split_deg)) return Relation::kSideRear;
  return Relation::kDirectRear;
}

std::optional<Relation> lateral_relation(double lateral_offset_m, const ExtractionConfig& config) {
  if (lateral_offset_m > config.lateral_threshold_m) return Relation::kToLeftOf;
  if (lateral_offset_m < -config.lateral_threshold_m) return Relation::kToRightOf;
  return std::nullopt;
}

double distance_to_polyline(Point2 p, std::span<const Point2> polyline) {
  double best = std::numeric_limits<double>::infinity();
  if (polyline.size() == 1) return std::hypot(p.x - polyline[0].x, p.y - polyline[0].y);
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
    const Point2 a = polyline[i];
    const Point2 b = polyline[i + 1];
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
    const double cx = a.x + t * dx;
    const double cy = a.y + t * dy;
    best = std::min(best, std::hypot(p.x - cx, p.y - cy));
  }
  return best;
}

std::string assign_membership(const std::string& entity_id, Point2 position,
                              const std::optional<std::string>& explicit_lane,
                              std::span<const LaneSpec> lanes, const ExtractionConfig& config) {
  if (explicit_lane) return *explicit_lane;
  const LaneSpec* best = nullptr;
  double best_distance = std::numeric_limits<double>::infinity();
  for (const LaneSpec& lane : lanes) {
    const double d = distance_to_polyline(position, lane.centerline);
    if (d > lane.width / 2.0 + config.membership_tolerance_m) continue;
    const bool tie = best != nullptr && std::abs(d - best_distance) <= kTieEpsilon;
    if (best == nullptr || (tie && lane.id < best->id) || (!tie && d < best_distance)) {
      best = &lane;
      best_distance = d;
    }
  }
  if (best == nullptr) throw UnassignedEntityError(entity_id);
  return best->id;
}

std::vector<Relation> pair_relations(const ActorState& subject, const ActorState& reference,
                                     const ExtractionConfig& config) {
  const double dx = subject.x - reference.x;
  const double dy = subject.y - reference.y;
  const auto band = proximity_band(std::hypot(dx, dy), config);
  if (!band) return {};
  std::vector<Relation> out{*band};
  const double bearing = (dx == 0.0 && dy == 0.0) ? 0.0 : std::atan2(dy, dx) - reference.yaw;
  out.push_back(directional_sector(bearing, config));
  const double lateral = -std::sin(reference.yaw) * dx + std::cos(reference.yaw) * dy;
  if (const auto side = lateral_relation(lateral, config)) out.push_back(*side);
  return out;
}

SceneGraph build_graph(const SceneSnapshot& snapshot, const ExtractionConfig& config) {
  if (const auto errors = validate_snapshot(snapshot); !errors.empty()) {
    throw SnapshotError("frame " + snapshot.frame_id + ": " + joined(errors));
  }
  if (const auto errors = validate_config(config); !errors.empty()) {
    throw SnapshotError("extraction config: " + joined(errors));
  }

  SceneGraph g(snapshot.frame_id, Abstraction::kFull);
  std::map<std::string, const LaneSpec*> lane_by_id;
  for (const auto& lane : snapshot.lanes) lane_by_id.emplace(lane.id, &lane);

  for (const auto& j : snapshot.junctions) g.add_node(j, NodeKind::kJunction);
  for (const auto& r : snapshot.roads) g.add_node(r.id, NodeKind::kRoad);
  for (const auto& l : snapshot.lanes) g.add_node(l.id, NodeKind::kLane);
  for (const auto& d : snapshot.objects) {
    Node node{d.id, d.kind, {}};
    node.attrs["x"] = std::to_string(d.x);
    node.attrs["y"] = std::to_string(d.y);
    g.add_node(std::move(node));
  }

  // Ego first, then actors the ego can see, in input order.
  std::vector<const ActorState*> present{&snapshot.ego};
  for (const auto& a : snapshot.actors) {
    if (std::hypot(a.x - snapshot.ego.x, a.y - snapshot.ego.y) <= config.visible_m()) {
      present.push_back(&a);
    }
  }
  for (const ActorState* a : present) {
    Node node{a->id, a->kind, {}};
    node.attrs["x"] = std::to_string(a->x);
    node.attrs["y"] = std::to_string(a->y);
    node.attrs["yaw"] = std::to_string(a->yaw);
    g.add_node(std::move(node));
  }

  // Hierarchy.
  for (const auto& r : snapshot.roads) {
    if (r.junction_id) g.add_edge(r.id, *r.junction_id, Relation::kIsIn);
  }
  for (const auto& l : snapshot.lanes) g.add_edge(l.id, l.road_id, Relation::kIsIn);

  // Lane topology. A neighbor is described relative to the lane that lists it.
  for (const auto& l : snapshot.lanes) {
    for (const auto& next : l.successors) g.add_edge(l.id, next, Relation::kTravelsTo);
    auto link = [&](const NeighborRef& n, Relation side) {
      g.add_edge(n.id, l.id, side);
      g.add_edge(l.id, n.id, n.same_direction ? Relation::kLaneChange : Relation::kOpposes);
    };
    if (l.left_neighbor) link(*l.left_neighbor, Relation::kToLeftOf);
    if (l.right_neighbor) link(*l.right_neighbor, Relation::kToRightOf);
  }

  // Devices anchor to their first listed lane; only traffic lights regulate.
  for (const auto& d : snapshot.objects) {
    g.add_edge(d.id, d.lane_ids.front(), Relation::kIsIn);
    if (d.kind == NodeKind::kTrafficLight) {
      for (const auto& lane : d.lane_ids) g.add_edge(d.id, lane, Relation::kControlsTrafficOf);
    }
  }

  // Actor membership, ego included.
  for (const ActorState* a : present) {
    const std::string lane =
        assign_membership(a->id, {a->x, a->y}, a->lane_id, snapshot.lanes, config);
    g.add_edge(a->id, lane, Relation::kIsIn);
  }

  // Actor pairs: one direction per unordered pair, subject first.
  for (std::size_t i = 0; i < present.size(); ++i) {
    for (std::size_t k = i + 1; k < present.size(); ++k) {
      const ActorState* subject = present[i];
      const ActorState* reference = present[k];
      if (subject == &snapshot.ego || (reference != &snapshot.ego &&
                                       natural_less(reference->id, subject->id))) {
        std::swap(subject, reference);
      }
      for (Relation r : pair_relations(*subject, *reference, config)) {
        g.add_edge(subject->id, reference->id, r);
      }
    }
  }
  return g;
}

}  // namespace sgp
