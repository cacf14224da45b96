#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sgp/graph.hpp"

namespace sgp {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

struct ActorState {
  std::string id;
  NodeKind kind = NodeKind::kCar;
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;  // radians, world frame
  std::optional<std::string> lane_id;
};

struct DeviceState {
  std::string id;
  NodeKind kind = NodeKind::kTrafficLight;
  double x = 0.0;
  double y = 0.0;
  std::vector<std::string> lane_ids;
};

struct NeighborRef {
  std::string id;
  bool same_direction = true;
};

struct LaneSpec {
  std::string id;
  std::string road_id;
  std::vector<Point2> centerline;
  double width = 3.5;
  std::vector<std::string> successors;
  std::optional<NeighborRef> left_neighbor;
  std::optional<NeighborRef> right_neighbor;
};

struct RoadSpec {
  std::string id;
  std::optional<std::string> junction_id;
};

// Ground-truth world state for one frame.
struct SceneSnapshot {
  std::string frame_id;
  std::string command;
  ActorState ego{"ego", NodeKind::kEgo, 0.0, 0.0, 0.0, std::nullopt};
  std::vector<ActorState> actors;
  std::vector<DeviceState> objects;
  std::vector<LaneSpec> lanes;
  std::vector<RoadSpec> roads;
  std::vector<std::string> junctions;
};

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reference resolution, geometry sanity and class-group checks. Returns all
// problems found; empty means the snapshot is well-formed.
std::vector<std::string> validate_snapshot(const SceneSnapshot& snapshot);

// One JSON Lines record. Parsing throws SnapshotError for malformed JSON or
// wrong field types; it does not run validate_snapshot.
SceneSnapshot snapshot_from_json(std::string_view line);
std::string snapshot_to_json(const SceneSnapshot& snapshot);

}  // namespace sgp
