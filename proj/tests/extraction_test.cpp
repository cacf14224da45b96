#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sgp/extraction.hpp"
#include "sgp/synth.hpp"

namespace sgp {
namespace {

constexpr double kPi = std::numbers::pi;

double deg(double d) { return d * kPi / 180.0; }

LaneSpec straight_lane(std::string id, std::string road, double y, double width = 3.5) {
  LaneSpec l;
  l.id = std::move(id);
  l.road_id = std::move(road);
  l.centerline = {{-50.0, y}, {0.0, y}, {50.0, y}};
  l.width = width;
  return l;
}

SceneSnapshot one_lane_scene() {
  SceneSnapshot s;
  s.frame_id = "f1";
  s.command = "Follow the current lane.";
  s.roads = {{"road_1", std::nullopt}};
  s.lanes = {straight_lane("lane_1", "road_1", 0.0)};
  return s;
}

ActorState actor(std::string id, NodeKind kind, double x, double y, double yaw = 0.0) {
  return ActorState{std::move(id), kind, x, y, yaw, std::nullopt};
}

int band_rank(std::optional<Relation> r) {
  return r ? static_cast<int>(*r) : 6;  // none is loosest
}

TEST(ProximityBand, Examples) {
  EXPECT_EQ(proximity_band(0.0), Relation::kSafetyHazard);
  EXPECT_EQ(proximity_band(8.0), Relation::kVeryNear);
  EXPECT_EQ(proximity_band(30.0), std::nullopt);
}

TEST(ProximityBand, UpperBoundsInclusive) {
  const std::pair<double, Relation> cases[] = {
      {2.0, Relation::kSafetyHazard}, {2.01, Relation::kNearCollision},
      {4.0, Relation::kNearCollision}, {7.0, Relation::kSuperNear},
      {10.0, Relation::kVeryNear},     {16.0, Relation::kNear},
      {16.5, Relation::kVisible},      {25.0, Relation::kVisible}};
  for (const auto& [d, r] : cases) EXPECT_EQ(proximity_band(d), r) << d;
  EXPECT_EQ(proximity_band(25.0001), std::nullopt);
}

TEST(ProximityBand, MonotoneSweep) {
  int prev = band_rank(proximity_band(0.0));
  for (int cm = 1; cm <= 3000; ++cm) {
    const int rank = band_rank(proximity_band(cm / 100.0));
    EXPECT_GE(rank, prev) << cm;
    prev = rank;
  }
}

TEST(ProximityBand, CustomBands) {
  ExtractionConfig cfg;
  cfg.band_upper_m = {1, 2, 3, 4, 5, 6};
  EXPECT_EQ(proximity_band(5.5, cfg), Relation::kVisible);
  EXPECT_EQ(proximity_band(6.5, cfg), std::nullopt);
}

TEST(DirectionalSector, Examples) {
  EXPECT_EQ(directional_sector(0.0), Relation::kDirectFront);
  EXPECT_EQ(directional_sector(kPi), Relation::kDirectRear);
  EXPECT_EQ(directional_sector(deg(90)), Relation::kSideFront);
}

TEST(DirectionalSector, BoundariesGoFrontward) {
  EXPECT_EQ(directional_sector(deg(45)), Relation::kDirectFront);
  EXPECT_EQ(directional_sector(deg(-45)), Relation::kDirectFront);
  EXPECT_EQ(directional_sector(deg(-90)), Relation::kSideFront);
  EXPECT_EQ(directional_sector(deg(135)), Relation::kSideRear);
  EXPECT_EQ(directional_sector(deg(-135)), Relation::kSideRear);
  EXPECT_EQ(directional_sector(deg(135.1)), Relation::kDirectRear);
  EXPECT_EQ(directional_sector(-kPi), Relation::kDirectRear);
}

TEST(DirectionalSector, WrapsAnyAngle) {
  EXPECT_EQ(directional_sector(2 * kPi), Relation::kDirectFront);
  EXPECT_EQ(directional_sector(deg(-270)), Relation::kSideFront);
  EXPECT_NEAR(wrap_angle(-kPi), kPi, 1e-12);
  EXPECT_NEAR(wrap_angle(3 * kPi), kPi, 1e-12);
  EXPECT_NEAR(wrap_angle(deg(370)), deg(10), 1e-12);
}

TEST(DirectionalSector, SweepCoversEachBearingOnce) {
  std::map<Relation, int> hits;
  for (int tenth = -1799; tenth <= 1800; ++tenth) {
    const Relation r = directional_sector(deg(tenth / 10.0));
    EXPECT_EQ(group_of(r), RelationGroup::kDirectional);
    ++hits[r];
  }
  EXPECT_EQ(hits.size(), 4u);
  EXPECT_EQ(hits[Relation::kDirectFront], 901);  // [-45, 45]
  EXPECT_EQ(hits[Relation::kSideFront], 900);
  EXPECT_EQ(hits[Relation::kSideRear], 900);
  EXPECT_EQ(hits[Relation::kDirectRear], 899);
}

TEST(LateralRelation, Examples) {
  EXPECT_EQ(lateral_relation(3.0), Relation::kToLeftOf);
  EXPECT_EQ(lateral_relation(-3.0), Relation::kToRightOf);
  EXPECT_EQ(lateral_relation(0.0), std::nullopt);
  EXPECT_EQ(lateral_relation(1.75), std::nullopt);
  EXPECT_EQ(lateral_relation(-1.75), std::nullopt);
  EXPECT_EQ(lateral_relation(1.7501), Relation::kToLeftOf);
}

TEST(Config, DefaultsValidAndBadOnesRejected) {
  EXPECT_TRUE(validate_config({}).empty());
  ExtractionConfig c;
  c.band_upper_m[2] = c.band_upper_m[1];
  EXPECT_FALSE(validate_config(c).empty());
  c = {};
  c.lateral_threshold_m = 0.0;
  EXPECT_FALSE(validate_config(c).empty());
  c = {};
  c.band_upper_m[0] = -1.0;
  EXPECT_FALSE(validate_config(c).empty());
}

TEST(DistanceToPolyline, ClosestPoint) {
  const std::vector<Point2> line{{0, 0}, {10, 0}, {10, 10}};
  EXPECT_DOUBLE_EQ(distance_to_polyline({5, 3}, line), 3.0);
  EXPECT_DOUBLE_EQ(distance_to_polyline({13, 5}, line), 3.0);
  EXPECT_DOUBLE_EQ(distance_to_polyline({-3, -4}, line), 5.0);
}

TEST(AssignMembership, ExplicitLanePassesThrough) {
  const auto lanes = one_lane_scene().lanes;
  EXPECT_EQ(assign_membership("car_1", {999, 999}, std::string("lane_3"), lanes), "lane_3");
}

TEST(AssignMembership, MidpointOfCenterline) {
  const auto lanes = one_lane_scene().lanes;
  EXPECT_EQ(assign_membership("car_1", {0, 0}, std::nullopt, lanes), "lane_1");
}

TEST(AssignMembership, TieGoesToSmallerId) {
  std::vector<LaneSpec> lanes{straight_lane("lane_2", "road_1", 1.75),
                              straight_lane("lane_1", "road_1", -1.75)};
  // Brute-force check that the point is equidistant.
  const double d2 = distance_to_polyline({3, 0}, lanes[0].centerline);
  const double d1 = distance_to_polyline({3, 0}, lanes[1].centerline);
  ASSERT_NEAR(d1, d2, 1e-9);
  EXPECT_EQ(assign_membership("car_1", {3, 0}, std::nullopt, lanes), "lane_1");
}

TEST(AssignMembership, NearestWithinTolerance) {
  std::vector<LaneSpec> lanes{straight_lane("lane_1", "road_1", 0.0),
                              straight_lane("lane_2", "road_1", 3.5)};
  EXPECT_EQ(assign_membership("car_1", {0, 2.0}, std::nullopt, lanes), "lane_2");
  EXPECT_EQ(assign_membership("car_1", {0, -2.25}, std::nullopt, lanes), "lane_1");
}

TEST(AssignMembership, OutsideToleranceThrowsWithId) {
  const auto lanes = one_lane_scene().lanes;
  try {
    assign_membership("truck_4", {0, 2.26}, std::nullopt, lanes);
    FAIL() << "expected UnassignedEntityError";
  } catch (const UnassignedEntityError& e) {
    EXPECT_EQ(e.entity_id(), "truck_4");
  }
}

TEST(PairRelations, CarAheadOfEgo) {
  const auto rels = pair_relations(actor("car_1", NodeKind::kCar, 8, 0),
                                   actor("ego", NodeKind::kEgo, 0, 0));
  EXPECT_EQ(rels, (std::vector<Relation>{Relation::kVeryNear, Relation::kDirectFront}));
}

TEST(PairRelations, MeasuredInReferenceFrame) {
  // Reference faces +y; a subject at +x is then on its right.
  const auto rels = pair_relations(actor("car_1", NodeKind::kCar, 5, 0),
                                   actor("ego", NodeKind::kEgo, 0, 0, kPi / 2));
  EXPECT_EQ(rels, (std::vector<Relation>{Relation::kSuperNear, Relation::kSideFront,
                                         Relation::kToRightOf}));
}

TEST(PairRelations, BeyondVisibleIsEmpty) {
  EXPECT_TRUE(pair_relations(actor("car_1", NodeKind::kCar, 30, 0),
                             actor("ego", NodeKind::kEgo, 0, 0))
                  .empty());
}

TEST(PairRelations, SwappedRolesGiveComplementarySector) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(-20, 20);
  std::uniform_real_distribution<double> yaw(-kPi, kPi);
  const std::map<Relation, Relation> complement{
      {Relation::kDirectFront, Relation::kDirectRear},
      {Relation::kDirectRear, Relation::kDirectFront},
      {Relation::kSideFront, Relation::kSideRear},
      {Relation::kSideRear, Relation::kSideFront}};
  int checked = 0;
  while (checked < 2000) {
    const double heading = yaw(rng);
    const ActorState a = actor("car_1", NodeKind::kCar, pos(rng), pos(rng), heading);
    const ActorState b = actor("car_2", NodeKind::kCar, pos(rng), pos(rng), heading);
    const double bearing = std::abs(wrap_angle(std::atan2(a.y - b.y, a.x - b.x) - heading));
    bool near_boundary = false;
    for (double edge : {45.0, 90.0, 135.0}) near_boundary |= std::abs(bearing - deg(edge)) < 1e-6;
    const auto ab = pair_relations(a, b);
    if (near_boundary || ab.empty()) continue;
    const auto ba = pair_relations(b, a);
    ASSERT_FALSE(ba.empty());
    EXPECT_EQ(ab[0], ba[0]);
    EXPECT_EQ(complement.at(ab[1]), ba[1]);
    ++checked;
  }
}

TEST(BuildGraph, EgoAloneOnLane) {
  const SceneSnapshot s = one_lane_scene();
  const SceneGraph g = build_graph(s);
  SceneGraph expected("f1", Abstraction::kFull);
  expected.add_node("road_1", NodeKind::kRoad);
  expected.add_node("lane_1", NodeKind::kLane);
  expected.add_node("ego", NodeKind::kEgo);
  expected.add_edge("lane_1", "road_1", Relation::kIsIn);
  expected.add_edge("ego", "lane_1", Relation::kIsIn);
  EXPECT_TRUE(graph_equal(g, expected));
  EXPECT_EQ(g.abstraction(), Abstraction::kFull);
  EXPECT_EQ(g.frame_id(), "f1");
}

TEST(BuildGraph, CarAheadSameHeading) {
  SceneSnapshot s = one_lane_scene();
  s.actors.push_back(actor("car_1", NodeKind::kCar, 8, 0));
  const SceneGraph g = build_graph(s);
  EXPECT_TRUE(g.has_edge("car_1", "ego", Relation::kVeryNear));
  EXPECT_TRUE(g.has_edge("car_1", "ego", Relation::kDirectFront));
  EXPECT_FALSE(g.has_edge("car_1", "ego", Relation::kToLeftOf));
  EXPECT_FALSE(g.has_edge("car_1", "ego", Relation::kToRightOf));
  EXPECT_TRUE(g.has_edge("car_1", "lane_1", Relation::kIsIn));
  for (const Edge& e : g.edges()) {
    if (e.relation != Relation::kIsIn) EXPECT_NE(e.source, "ego") << name_of(e.relation);
  }
}

TEST(BuildGraph, TrafficLightGovernsEveryListedLane) {
  SceneSnapshot s = one_lane_scene();
  s.lanes.push_back(straight_lane("lane_2", "road_1", 3.5));
  s.lanes[0].left_neighbor = NeighborRef{"lane_2", true};
  s.lanes[1].right_neighbor = NeighborRef{"lane_1", true};
  s.objects.push_back(DeviceState{"traffic_light_1", NodeKind::kTrafficLight, 50, 0,
                                  {"lane_1", "lane_2"}});
  s.objects.push_back(DeviceState{"stop_sign_1", NodeKind::kStopSign, 50, 3.5, {"lane_2"}});
  const SceneGraph g = build_graph(s);
  EXPECT_TRUE(g.has_edge("traffic_light_1", "lane_1", Relation::kControlsTrafficOf));
  EXPECT_TRUE(g.has_edge("traffic_light_1", "lane_2", Relation::kControlsTrafficOf));
  EXPECT_TRUE(g.has_edge("traffic_light_1", "lane_1", Relation::kIsIn));
  EXPECT_FALSE(g.has_edge("traffic_light_1", "lane_2", Relation::kIsIn));
  EXPECT_TRUE(g.has_edge("stop_sign_1", "lane_2", Relation::kIsIn));
  EXPECT_FALSE(g.has_edge("stop_sign_1", "lane_2", Relation::kControlsTrafficOf));
  // lane_2 sits left of lane_1, travelling the same way.
  EXPECT_TRUE(g.has_edge("lane_2", "lane_1", Relation::kToLeftOf));
  EXPECT_TRUE(g.has_edge("lane_1", "lane_2", Relation::kToRightOf));
  EXPECT_TRUE(g.has_edge("lane_1", "lane_2", Relation::kLaneChange));
  EXPECT_TRUE(g.has_edge("lane_2", "lane_1", Relation::kLaneChange));
}

TEST(BuildGraph, OpposingNeighborAndSuccessorsAndJunction) {
  SceneSnapshot s = one_lane_scene();
  s.junctions = {"junction_1"};
  s.roads.push_back({"road_2", std::string("junction_1")});
  s.lanes.push_back(straight_lane("lane_2", "road_2", 40.0));
  s.lanes.push_back(straight_lane("lane_3", "road_1", 3.5));
  s.lanes[0].successors = {"lane_2"};
  s.lanes[0].left_neighbor = NeighborRef{"lane_3", false};
  const SceneGraph g = build_graph(s);
  EXPECT_TRUE(g.has_edge("lane_1", "lane_2", Relation::kTravelsTo));
  EXPECT_TRUE(g.has_edge("road_2", "junction_1", Relation::kIsIn));
  EXPECT_FALSE(g.has_edge("road_1", "junction_1", Relation::kIsIn));
  EXPECT_TRUE(g.has_edge("lane_1", "lane_3", Relation::kOpposes));
  EXPECT_TRUE(g.has_edge("lane_3", "lane_1", Relation::kToLeftOf));
  EXPECT_FALSE(g.has_edge("lane_1", "lane_3", Relation::kLaneChange));
}

TEST(BuildGraph, FarActorsDropped) {
  SceneSnapshot s = one_lane_scene();
  s.actors.push_back(actor("car_1", NodeKind::kCar, 30, 0));
  s.actors.push_back(actor("car_2", NodeKind::kCar, 20, 0));
  const SceneGraph g = build_graph(s);
  EXPECT_EQ(g.find_node("car_1"), nullptr);
  ASSERT_NE(g.find_node("car_2"), nullptr);
  // car_1 is within 10 m of car_2 but not observable from the ego.
  for (const Edge& e : g.edges()) EXPECT_NE(e.target, "car_1");
}

TEST(BuildGraph, NonEgoPairsUseNaturalIdOrder) {
  SceneSnapshot s = one_lane_scene();
  s.actors.push_back(actor("car_10", NodeKind::kCar, 5, 0));
  s.actors.push_back(actor("car_2", NodeKind::kCar, -5, 0));
  const SceneGraph g = build_graph(s);
  EXPECT_TRUE(g.has_edge("car_2", "car_10", Relation::kVeryNear));
  EXPECT_TRUE(g.has_edge("car_2", "car_10", Relation::kDirectRear));
  EXPECT_FALSE(g.has_edge("car_10", "car_2", Relation::kVeryNear));
}

TEST(BuildGraph, UnassignableActorPropagates) {
  SceneSnapshot s = one_lane_scene();
  s.actors.push_back(actor("pedestrian_1", NodeKind::kPedestrian, 0, 10));
  EXPECT_THROW(build_graph(s), UnassignedEntityError);
}

TEST(BuildGraph, InvalidSnapshotRejected) {
  SceneSnapshot s = one_lane_scene();
  s.lanes[0].road_id = "road_9";
  EXPECT_THROW(build_graph(s), SnapshotError);
}

TEST(BuildGraph, SynthesizedScenesAreTypingCleanAndDeterministic) {
  SynthConfig cfg;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const SceneSnapshot s = synth_scene(cfg, i);
    const SceneGraph g = build_graph(s);
    EXPECT_TRUE(validate_typing(g).empty()) << s.frame_id;
    EXPECT_TRUE(check_invariants(g).empty()) << s.frame_id;
    EXPECT_TRUE(graph_equal(g, build_graph(s)));
  }
}

}  // namespace
}  // namespace sgp
