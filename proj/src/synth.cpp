#include "sgp/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>

namespace sgp {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kIndexSalt = 0x632BE59BD9B4E019ULL;

constexpr double kRoadLength = 80.0;
constexpr double kPlacementRadius = 24.0;

constexpr std::array<NodeKind, 10> kActorKinds{
    NodeKind::kCar,   NodeKind::kVan,        NodeKind::kTaxi,    NodeKind::kElectricVehicle,
    NodeKind::kTruck, NodeKind::kBus,        NodeKind::kMotorcycle, NodeKind::kBicycle,
    NodeKind::kEmergency, NodeKind::kPedestrian};

constexpr std::array<NodeKind, 3> kDeviceKinds{NodeKind::kTrafficLight, NodeKind::kSpeedLimit,
                                               NodeKind::kStopSign};

constexpr std::array<std::string_view, 8> kCommands{
    "Turn left at the next intersection.",
    "Turn right at the next intersection.",
    "Go straight at the next intersection.",
    "Follow the current lane.",
    "Change to the left lane.",
    "Change to the right lane.",
    "Stop at the next traffic light.",
    "Keep driving along this road.",
};

double round_mm(double v) { return std::round(v * 1000.0) / 1000.0; }

struct LaneGeometry {
  Point2 start;
  Point2 dir;  // unit, travel direction
  double heading = 0.0;
};

// Parameter range s in [0, len] with |start + s * dir - center| <= radius.
bool chord(const LaneGeometry& lane, double len, Point2 center, double radius, double& s0,
           double& s1) {
  const double px = lane.start.x - center.x;
  const double py = lane.start.y - center.y;
  const double b = px * lane.dir.x + py * lane.dir.y;
  const double c = px * px + py * py - radius * radius;
  const double disc = b * b - c;
  if (disc < 0.0) return false;
  const double root = std::sqrt(disc);
  s0 = std::max(0.0, -b - root);
  s1 = std::min(len, -b + root);
  return s0 <= s1;
}

std::string numbered(NodeKind kind, std::map<NodeKind, int>& counters) {
  return std::string(name_of(kind)) + "_" + std::to_string(++counters[kind]);
}

}  // namespace

std::vector<std::string> validate_synth_config(const SynthConfig& c) {
  std::vector<std::string> errors;
  auto check = [&](const IntRange& r, const char* name, int min_lo) {
    if (r.lo < min_lo || r.lo > r.hi) {
      errors.push_back(std::string(name) + " range must satisfy " + std::to_string(min_lo) +
                       " <= lo <= hi");
    }
  };
  check(c.n_roads, "n_roads", 1);
  check(c.lanes_per_road, "lanes_per_road", 1);
  check(c.n_actors, "n_actors", 0);
  check(c.n_devices, "n_devices", 0);
  if (!(c.junction_probability >= 0.0 && c.junction_probability <= 1.0)) {
    errors.emplace_back("junction probability must be in [0, 1]");
  }
  if (!(c.area_m > 0.0)) errors.emplace_back("area must be positive");
  return errors;
}

SceneRng::SceneRng(std::uint64_t seed, std::uint64_t index)
    : key_(mix(seed) ^ mix(index + kIndexSalt)) {}

std::uint64_t SceneRng::mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SceneRng::next() { return mix(key_ + (++counter_) * kGolden); }

int SceneRng::uniform_int(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(static_cast<std::int64_t>(hi) - lo + 1);
  return lo + static_cast<int>(next() % span);
}

double SceneRng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

SceneSnapshot synth_scene(const SynthConfig& config, std::uint64_t index) {
  SceneRng rng(config.seed, index);
  SceneSnapshot s;
  char frame[32];
  std::snprintf(frame, sizeof frame, "frame_%06llu", static_cast<unsigned long long>(index));
  s.frame_id = frame;
  s.command = std::string(kCommands[rng.uniform_int(0, static_cast<int>(kCommands.size()) - 1)]);

  const int n_roads = rng.uniform_int(config.n_roads.lo, config.n_roads.hi);
  std::vector<std::vector<std::size_t>> road_lanes(n_roads);
  std::vector<LaneGeometry> geometry;
  std::vector<bool> forward;

  for (int k = 0; k < n_roads; ++k) {
    RoadSpec road{"road_" + std::to_string(k + 1), std::nullopt};
    if (rng.bernoulli(config.junction_probability)) {
      if (s.junctions.empty() || rng.bernoulli(0.5)) {
        s.junctions.push_back("junction_" + std::to_string(s.junctions.size() + 1));
        road.junction_id = s.junctions.back();
      } else {
        road.junction_id = s.junctions[rng.uniform_int(0, static_cast<int>(s.junctions.size()) - 1)];
      }
    }
    s.roads.push_back(road);

    // Road 1 runs through the origin; the others cross nearby half the time.
    Point2 center{0.0, 0.0};
    if (k > 0) {
      const double half = rng.bernoulli(0.5) ? 30.0 : config.area_m / 2.0;
      center = {rng.uniform(-half, half), rng.uniform(-half, half)};
    }
    const double heading = rng.uniform(-std::numbers::pi, std::numbers::pi);
    const Point2 dir{std::cos(heading), std::sin(heading)};
    const Point2 normal{-dir.y, dir.x};
    const int n_lanes = rng.uniform_int(config.lanes_per_road.lo, config.lanes_per_road.hi);
    const int n_forward = (n_lanes + 1) / 2;
    const double width = round_mm(rng.uniform(3.0, 3.75));

    for (int j = 0; j < n_lanes; ++j) {
      const double offset = (j - (n_lanes - 1) / 2.0) * width;
      const Point2 base{center.x + offset * normal.x, center.y + offset * normal.y};
      Point2 a{round_mm(base.x - dir.x * kRoadLength / 2), round_mm(base.y - dir.y * kRoadLength / 2)};
      Point2 m{round_mm(base.x), round_mm(base.y)};
      Point2 b{round_mm(base.x + dir.x * kRoadLength / 2), round_mm(base.y + dir.y * kRoadLength / 2)};
      const bool fwd = j < n_forward;
      if (!fwd) std::swap(a, b);

      LaneSpec lane;
      lane.id = "lane_" + std::to_string(s.lanes.size() + 1);
      lane.road_id = road.id;
      lane.centerline = {a, m, b};
      lane.width = width;
      road_lanes[k].push_back(s.lanes.size());
      const double lane_heading = fwd ? heading : std::remainder(heading + std::numbers::pi,
                                                                  2 * std::numbers::pi);
      geometry.push_back({a, {fwd ? dir.x : -dir.x, fwd ? dir.y : -dir.y}, lane_heading});
      forward.push_back(fwd);
      s.lanes.push_back(std::move(lane));
    }

    // Neighbors: forward lanes look toward higher offsets on their left,
    // reversed lanes toward lower offsets.
    const auto& ids = road_lanes[k];
    for (int j = 0; j < n_lanes; ++j) {
      LaneSpec& lane = s.lanes[ids[j]];
      const bool fwd = forward[ids[j]];
      const int left = fwd ? j + 1 : j - 1;
      const int right = fwd ? j - 1 : j + 1;
      if (left >= 0 && left < n_lanes) {
        lane.left_neighbor = NeighborRef{s.lanes[ids[left]].id, forward[ids[left]] == fwd};
      }
      if (right >= 0 && right < n_lanes) {
        lane.right_neighbor = NeighborRef{s.lanes[ids[right]].id, forward[ids[right]] == fwd};
      }
    }
  }

  // Successor chains from each road into the next, plus occasional links
  // inside a road.
  for (int k = 0; k < n_roads; ++k) {
    for (std::size_t li : road_lanes[k]) {
      LaneSpec& lane = s.lanes[li];
      auto add = [&](std::size_t target) {
        const std::string& id = s.lanes[target].id;
        if (id == lane.id) return;
        if (std::find(lane.successors.begin(), lane.successors.end(), id) == lane.successors.end()) {
          lane.successors.push_back(id);
        }
      };
      if (k + 1 < n_roads) {
        const auto& next = road_lanes[k + 1];
        add(next[rng.uniform_int(0, static_cast<int>(next.size()) - 1)]);
        if (rng.bernoulli(0.3)) add(next[rng.uniform_int(0, static_cast<int>(next.size()) - 1)]);
      }
      if (road_lanes[k].size() > 1 && rng.bernoulli(0.1)) {
        add(road_lanes[k][rng.uniform_int(0, static_cast<int>(road_lanes[k].size()) - 1)]);
      }
    }
  }

  // Ego on a forward lane of road 1.
  const auto& first = road_lanes[0];
  const int ego_forward = (static_cast<int>(first.size()) + 1) / 2;
  const std::size_t ego_lane = first[rng.uniform_int(0, ego_forward - 1)];
  {
    const LaneGeometry& g = geometry[ego_lane];
    const double along = kRoadLength / 2 + rng.uniform(-10.0, 10.0);
    s.ego.id = "ego";
    s.ego.kind = NodeKind::kEgo;
    s.ego.x = round_mm(g.start.x + g.dir.x * along);
    s.ego.y = round_mm(g.start.y + g.dir.y * along);
    s.ego.yaw = round_mm(g.heading);
    if (rng.bernoulli(0.5)) s.ego.lane_id = s.lanes[ego_lane].id;
  }
  const Point2 ego_pos{s.ego.x, s.ego.y};

  std::map<NodeKind, int> counters;
  const int n_actors = rng.uniform_int(config.n_actors.lo, config.n_actors.hi);
  for (int i = 0; i < n_actors; ++i) {
    const NodeKind kind = kActorKinds[rng.uniform_int(0, static_cast<int>(kActorKinds.size()) - 1)];
    std::size_t lane = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(s.lanes.size()) - 1));
    double s0 = 0.0;
    double s1 = 0.0;
    if (!chord(geometry[lane], kRoadLength, ego_pos, kPlacementRadius, s0, s1)) {
      lane = ego_lane;
      chord(geometry[lane], kRoadLength, ego_pos, kPlacementRadius, s0, s1);
    }
    const LaneGeometry& g = geometry[lane];
    const double along = rng.uniform(s0, s1);
    ActorState a;
    a.id = numbered(kind, counters);
    a.kind = kind;
    a.x = round_mm(g.start.x + g.dir.x * along);
    a.y = round_mm(g.start.y + g.dir.y * along);
    a.yaw = kind == NodeKind::kPedestrian ? round_mm(rng.uniform(-std::numbers::pi, std::numbers::pi))
                                          : round_mm(g.heading);
    if (rng.bernoulli(0.5)) a.lane_id = s.lanes[lane].id;
    s.actors.push_back(std::move(a));
  }

  const int n_devices = rng.uniform_int(config.n_devices.lo, config.n_devices.hi);
  for (int i = 0; i < n_devices; ++i) {
    const NodeKind kind = kDeviceKinds[rng.uniform_int(0, static_cast<int>(kDeviceKinds.size()) - 1)];
    const int road = rng.uniform_int(0, n_roads - 1);
    const auto& lanes = road_lanes[road];
    const std::size_t lane = lanes[rng.uniform_int(0, static_cast<int>(lanes.size()) - 1)];
    DeviceState d;
    d.id = numbered(kind, counters);
    d.kind = kind;
    d.lane_ids.push_back(s.lanes[lane].id);
    if (kind == NodeKind::kTrafficLight && lanes.size() > 1 && rng.bernoulli(0.5)) {
      const std::size_t other = lanes[rng.uniform_int(0, static_cast<int>(lanes.size()) - 1)];
      if (other != lane) d.lane_ids.push_back(s.lanes[other].id);
    }
    const Point2 end = s.lanes[lane].centerline.back();
    d.x = end.x;
    d.y = end.y;
    s.objects.push_back(std::move(d));
  }
  return s;
}

std::vector<SceneSnapshot> synth_corpus(const SynthConfig& config, std::size_t n) {
  std::vector<SceneSnapshot> corpus;
  corpus.reserve(n);
  for (std::size_t i = 0; i < n; ++i) corpus.push_back(synth_scene(config, i));
  return corpus;
}

}  // namespace sgp
