#pragma once

#include <set>
#include <string>
#include <utility>

#include "sgp/graph.hpp"

namespace sgp {

// Collapses lanes into their roads. Memberships and traffic-light control are
// remapped to the parent road, travels_to is lifted to road pairs when any
// lane pair across two distinct roads carries it, and the remaining
// lane-level relations are dropped. Throws GraphError(kWrongAbstraction) when
// the input is not a full graph.
SceneGraph to_road_level(const SceneGraph& full);

// Keeps ego and the other actors with their pairwise proximity, directional
// and lateral edges.
SceneGraph to_actor_only(const SceneGraph& full);

SceneGraph abstract(const SceneGraph& full, Abstraction level);

// Brute-force enumeration of the road pairs the lift must produce.
std::set<std::pair<std::string, std::string>> lift_oracle(const SceneGraph& full);

}  // namespace sgp
