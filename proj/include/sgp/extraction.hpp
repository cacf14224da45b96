#pragma once

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgp/graph.hpp"
#include "sgp/snapshot.hpp"

namespace sgp {

// Thresholds for relation extraction. Band bounds are inclusive upper limits
// in meters, tightest first, in the order of the proximity relations.
struct ExtractionConfig {
  std::array<double, 6> band_upper_m{2.0, 4.0, 7.0, 10.0, 16.0, 25.0};
  double direct_half_angle_deg = 45.0;
  double side_boundary_deg = 90.0;
  double rear_split_deg = 135.0;
  double lateral_threshold_m = 1.75;
  double membership_tolerance_m = 0.5;

  double visible_m() const { return band_upper_m.back(); }
};

// Empty when the config is usable.
std::vector<std::string> validate_config(const ExtractionConfig& config);

std::optional<Relation> proximity_band(double distance_m, const ExtractionConfig& config = {});

// Bearing of the subject seen from the reference actor, relative to the
// reference heading; any real value is accepted and wrapped to (-pi, pi].
Relation directional_sector(double rel_bearing_rad, const ExtractionConfig& config = {});

// Signed lateral coordinate of the subject in the reference frame, left positive.
std::optional<Relation> lateral_relation(double lateral_offset_m,
                                         const ExtractionConfig& config = {});

double wrap_angle(double radians);

// Perpendicular (closest-point) distance from p to a polyline.
double distance_to_polyline(Point2 p, std::span<const Point2> polyline);

class UnassignedEntityError : public std::runtime_error {
 public:
  explicit UnassignedEntityError(std::string entity_id)
      : std::runtime_error("no lane within tolerance of '" + entity_id + "'"),
        entity_id_(std::move(entity_id)) {}
  const std::string& entity_id() const { return entity_id_; }

 private:
  std::string entity_id_;
};

// Explicit lane wins; otherwise the nearest lane whose centerline lies within
// width/2 + tolerance. Distances within 1e-9 tie and go to the
// lexicographically smaller lane id.
std::string assign_membership(const std::string& entity_id, Point2 position,
                              const std::optional<std::string>& explicit_lane,
                              std::span<const LaneSpec> lanes,
                              const ExtractionConfig& config = {});

// Labels for the directed pair subject -> reference: proximity band,
// directional sector and lateral side, all measured in the reference actor's
// frame. Empty when the pair is beyond the visible band.
std::vector<Relation> pair_relations(const ActorState& subject, const ActorState& reference,
                                     const ExtractionConfig& config = {});

// Full-abstraction graph for one snapshot. Node ids are the snapshot ids.
// Throws SnapshotError for an invalid snapshot and UnassignedEntityError when
// an actor cannot be anchored.
SceneGraph build_graph(const SceneSnapshot& snapshot, const ExtractionConfig& config = {});

}  // namespace sgp
