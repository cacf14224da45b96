#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sgp {

enum class NodeGroup : std::uint8_t { kStructural, kActor, kObject };

// Order is significant: structural, then actors, then objects.
enum class NodeKind : std::uint8_t {
  kLane,
  kRoad,
  kJunction,
  kEgo,
  kCar,
  kVan,
  kTaxi,
  kElectricVehicle,
  kTruck,
  kBus,
  kMotorcycle,
  kBicycle,
  kEmergency,
  kPedestrian,
  kTrafficLight,
  kSpeedLimit,
  kStopSign,
};

inline constexpr std::size_t kNodeKindCount = 17;

enum class RelationGroup : std::uint8_t {
  kProximity,
  kDirectional,
  kLateral,
  kHierarchical,
  kTopological,
  kRegulatory,
};

// Proximity labels are ordered tightest first.
enum class Relation : std::uint8_t {
  kSafetyHazard,
  kNearCollision,
  kSuperNear,
  kVeryNear,
  kNear,
  kVisible,
  kDirectFront,
  kSideFront,
  kDirectRear,
  kSideRear,
  kToLeftOf,
  kToRightOf,
  kIsIn,
  kOpposes,
  kTravelsTo,
  kLaneChange,
  kControlsTrafficOf,
};

inline constexpr std::size_t kRelationCount = 17;

enum class Abstraction : std::uint8_t { kFull, kRoadLevel, kActorOnly };

const std::array<NodeKind, kNodeKindCount>& all_node_kinds();
const std::array<Relation, kRelationCount>& all_relations();
const std::array<Abstraction, 3>& all_abstractions();

NodeGroup group_of(NodeKind kind);
RelationGroup group_of(Relation relation);

// Class names use underscores ("traffic_light"); relation names come in two
// surfaces: the identifier ("direct_front") and the display form
// ("direct front") used by every serialization.
std::string_view name_of(NodeKind kind);
std::string_view name_of(Relation relation);
std::string_view display_name(Relation relation);
std::string_view name_of(Abstraction abstraction);
std::string_view name_of(NodeGroup group);
std::string_view name_of(RelationGroup group);

std::optional<NodeKind> node_kind_from_name(std::string_view name);
std::optional<Relation> relation_from_name(std::string_view name);
std::optional<Relation> relation_from_display(std::string_view display);
std::optional<Abstraction> abstraction_from_name(std::string_view name);

inline bool is_actor(NodeKind kind) { return group_of(kind) == NodeGroup::kActor; }
inline bool is_object(NodeKind kind) { return group_of(kind) == NodeGroup::kObject; }
inline bool is_structural(NodeKind kind) { return group_of(kind) == NodeGroup::kStructural; }

// Groups allowed at most once per ordered actor pair.
inline bool is_pair_group(RelationGroup g) {
  return g == RelationGroup::kProximity || g == RelationGroup::kDirectional ||
         g == RelationGroup::kLateral;
}

// The typing matrix: may an edge of this label join these node classes in a
// graph of the given abstraction?
bool relation_permitted(Abstraction abstraction, NodeKind source, Relation relation,
                        NodeKind target);

// "ego" for the ego, "<class name>_<k>" with k a positive integer otherwise.
bool is_canonical_id(std::string_view id, NodeKind kind);

// Orders ids by alternating text/number chunks so that "lane_2" < "lane_10".
bool natural_less(std::string_view a, std::string_view b);

struct NaturalLess {
  bool operator()(std::string_view a, std::string_view b) const { return natural_less(a, b); }
};

struct Node {
  std::string id;
  NodeKind kind = NodeKind::kEgo;
  // Carried through transforms, never serialized.
  std::map<std::string, std::string> attrs;
};

struct Edge {
  std::string source;
  std::string target;
  Relation relation = Relation::kIsIn;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

enum class GraphErrorCode : std::uint8_t {
  kDuplicateNode,
  kEmptyId,
  kUnknownNode,
  kSelfLoop,
  kDuplicateEdge,
  kCardinality,
  kTyping,
  kWrongAbstraction,
};

class GraphError : public std::runtime_error {
 public:
  GraphError(GraphErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  GraphErrorCode code() const { return code_; }

 private:
  GraphErrorCode code_;
};

// Directed, labeled multigraph for one frame. Nodes keep insertion order;
// edges keep insertion order. Lookups go through an id index.
class SceneGraph {
 public:
  SceneGraph() = default;
  SceneGraph(std::string frame_id, Abstraction abstraction)
      : frame_id_(std::move(frame_id)), abstraction_(abstraction) {}

  const std::string& frame_id() const { return frame_id_; }
  Abstraction abstraction() const { return abstraction_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }

  const Node* find_node(std::string_view id) const;
  bool has_edge(std::string_view source, std::string_view target, Relation relation) const;

  // Throws GraphError on an empty or repeated id.
  void add_node(Node node);
  void add_node(std::string id, NodeKind kind) { add_node(Node{std::move(id), kind, {}}); }

  // Checked insertion: endpoints must exist, the triple must be new, the
  // typing matrix must allow it, and an actor pair may hold at most one label
  // per proximity/directional/lateral group.
  void add_edge(const std::string& source, const std::string& target, Relation relation);

  // Inserts a triple if absent. Still rejects unknown endpoints and self loops,
  // but skips the typing and cardinality checks. Returns false on a repeat.
  bool insert_edge_unchecked(const std::string& source, const std::string& target,
                             Relation relation);

  // Returns false if the triple was not present.
  bool remove_edge(std::string_view source, std::string_view target, Relation relation);

 private:
  std::string frame_id_;
  Abstraction abstraction_ = Abstraction::kFull;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

enum class ViolationKind : std::uint8_t {
  kUnresolvedEndpoint,
  kSelfLoop,
  kTyping,
};

struct Violation {
  ViolationKind kind = ViolationKind::kTyping;
  Edge edge;
  std::string message;
};

// Edges breaking the typing matrix for graph.abstraction(). Unresolved
// endpoints and self loops are reported as structural violations with their
// own kind, so callers can tell them apart from typing problems.
std::vector<Violation> validate_typing(const SceneGraph& graph);

// Whole-graph invariants beyond per-edge typing: single ego, id format,
// duplicate triples, per-pair label cardinality, and functional membership
// (actors and lanes in full graphs, actors in road-level graphs).
std::vector<std::string> check_invariants(const SceneGraph& graph);

// Node (id, class) sets and edge multisets match. Attributes, frame ids and
// insertion order are ignored.
bool graph_equal(const SceneGraph& a, const SceneGraph& b);

// Sorted copy of the edge list, for multiset comparisons.
std::vector<Edge> sorted_edges(std::span<const Edge> edges);

}  // namespace sgp
