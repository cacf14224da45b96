#include "sgp/snapshot.hpp"

#include <cmath>
#include <map>
#include <set>

#include "json.hpp"

namespace sgp {

using ordered_json = nlohmann::ordered_json;

namespace {

template <typename T>
T field(const ordered_json& j, const char* key, std::string_view where) {
  if (!j.contains(key)) {
    throw SnapshotError(std::string(where) + ": missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw SnapshotError(std::string(where) + ": field '" + key + "' has the wrong type");
  }
}

std::optional<std::string> optional_string(const ordered_json& j, const char* key,
                                           std::string_view where) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return field<std::string>(j, key, where);
}

NodeKind kind_field(const ordered_json& j, std::string_view where) {
  const auto name = field<std::string>(j, "class", where);
  const auto kind = node_kind_from_name(name);
  if (!kind) throw SnapshotError(std::string(where) + ": unknown class '" + name + "'");
  return *kind;
}

ActorState actor_from(const ordered_json& j, std::string_view where) {
  if (!j.is_object()) throw SnapshotError(std::string(where) + ": expected object");
  ActorState a;
  a.id = field<std::string>(j, "id", where);
  a.kind = kind_field(j, where);
  a.x = field<double>(j, "x", where);
  a.y = field<double>(j, "y", where);
  a.yaw = field<double>(j, "yaw", where);
  a.lane_id = optional_string(j, "lane_id", where);
  return a;
}

std::optional<NeighborRef> neighbor_from(const ordered_json& j, const char* key,
                                         std::string_view where) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  const auto& n = j.at(key);
  if (!n.is_object()) throw SnapshotError(std::string(where) + ": " + key + " must be an object");
  return NeighborRef{field<std::string>(n, "id", where), field<bool>(n, "same_direction", where)};
}

ordered_json actor_to(const ActorState& a) {
  ordered_json j;
  j["id"] = a.id;
  j["class"] = std::string(name_of(a.kind));
  j["x"] = a.x;
  j["y"] = a.y;
  j["yaw"] = a.yaw;
  if (a.lane_id) j["lane_id"] = *a.lane_id;
  return j;
}

ordered_json neighbor_to(const NeighborRef& n) {
  ordered_json j;
  j["id"] = n.id;
  j["same_direction"] = n.same_direction;
  return j;
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

SceneSnapshot snapshot_from_json(std::string_view line) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw SnapshotError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw SnapshotError("record is not a JSON object");

  SceneSnapshot s;
  s.frame_id = field<std::string>(j, "frame_id", "record");
  s.command = j.contains("command") ? field<std::string>(j, "command", "record") : "";
  s.ego = actor_from(field<ordered_json>(j, "ego", "record"), "ego");

  auto array = [&](const char* key) {
    if (!j.contains(key)) return ordered_json::array();
    auto a = j.at(key);
    if (!a.is_array()) throw SnapshotError(std::string("field '") + key + "' must be an array");
    return a;
  };

  for (const auto& a : array("actors")) s.actors.push_back(actor_from(a, "actor"));
  for (const auto& o : array("objects")) {
    if (!o.is_object()) throw SnapshotError("object: expected object");
    DeviceState d;
    d.id = field<std::string>(o, "id", "object");
    d.kind = kind_field(o, "object");
    d.x = field<double>(o, "x", "object");
    d.y = field<double>(o, "y", "object");
    d.lane_ids = field<std::vector<std::string>>(o, "lane_ids", "object");
    s.objects.push_back(std::move(d));
  }
  for (const auto& l : array("lanes")) {
    if (!l.is_object()) throw SnapshotError("lane: expected object");
    LaneSpec lane;
    lane.id = field<std::string>(l, "id", "lane");
    lane.road_id = field<std::string>(l, "road_id", "lane");
    for (const auto& p : field<std::vector<std::vector<double>>>(l, "centerline", "lane")) {
      if (p.size() != 2) throw SnapshotError("lane " + lane.id + ": centerline point needs [x, y]");
      lane.centerline.push_back({p[0], p[1]});
    }
    lane.width = field<double>(l, "width", "lane");
    if (l.contains("successors")) {
      lane.successors = field<std::vector<std::string>>(l, "successors", "lane");
    }
    lane.left_neighbor = neighbor_from(l, "left_neighbor", "lane " + lane.id);
    lane.right_neighbor = neighbor_from(l, "right_neighbor", "lane " + lane.id);
    s.lanes.push_back(std::move(lane));
  }
  for (const auto& r : array("roads")) {
    if (!r.is_object()) throw SnapshotError("road: expected object");
    s.roads.push_back(RoadSpec{field<std::string>(r, "id", "road"),
                               optional_string(r, "junction_id", "road")});
  }
  for (const auto& jn : array("junctions")) {
    if (!jn.is_string()) throw SnapshotError("junctions must be an array of ids");
    s.junctions.push_back(jn.get<std::string>());
  }
  return s;
}

std::string snapshot_to_json(const SceneSnapshot& s) {
  ordered_json j;
  j["frame_id"] = s.frame_id;
  j["command"] = s.command;
  j["ego"] = actor_to(s.ego);
  j["actors"] = ordered_json::array();
  for (const auto& a : s.actors) j["actors"].push_back(actor_to(a));
  j["objects"] = ordered_json::array();
  for (const auto& d : s.objects) {
    ordered_json o;
    o["id"] = d.id;
    o["class"] = std::string(name_of(d.kind));
    o["x"] = d.x;
    o["y"] = d.y;
    o["lane_ids"] = d.lane_ids;
    j["objects"].push_back(std::move(o));
  }
  j["lanes"] = ordered_json::array();
  for (const auto& l : s.lanes) {
    ordered_json o;
    o["id"] = l.id;
    o["road_id"] = l.road_id;
    o["centerline"] = ordered_json::array();
    for (const auto& p : l.centerline) o["centerline"].push_back({p.x, p.y});
    o["width"] = l.width;
    o["successors"] = l.successors;
    if (l.left_neighbor) o["left_neighbor"] = neighbor_to(*l.left_neighbor);
    if (l.right_neighbor) o["right_neighbor"] = neighbor_to(*l.right_neighbor);
    j["lanes"].push_back(std::move(o));
  }
  j["roads"] = ordered_json::array();
  for (const auto& r : s.roads) {
    ordered_json o;
    o["id"] = r.id;
    if (r.junction_id) o["junction_id"] = *r.junction_id;
    j["roads"].push_back(std::move(o));
  }
  j["junctions"] = s.junctions;
  return j.dump();
}

std::vector<std::string> validate_snapshot(const SceneSnapshot& s) {
  std::vector<std::string> errors;
  if (s.frame_id.empty()) errors.emplace_back("frame_id is empty");
  if (s.frame_id.find_first_of("/\\") != std::string::npos || s.frame_id == "." ||
      s.frame_id == "..") {
    errors.push_back("frame_id '" + s.frame_id + "' is not usable as a file name");
  }

  std::set<std::string> ids;
  auto claim = [&](const std::string& id, NodeKind kind) {
    if (!is_canonical_id(id, kind)) {
      errors.push_back("id '" + id + "' is not of the form " +
                       (kind == NodeKind::kEgo ? std::string("ego")
                                               : std::string(name_of(kind)) + "_<k>"));
    } else if (!ids.insert(id).second) {
      errors.push_back("duplicate id '" + id + "'");
    }
  };

  std::set<std::string> junctions;
  for (const auto& jn : s.junctions) {
    claim(jn, NodeKind::kJunction);
    junctions.insert(jn);
  }
  std::set<std::string> roads;
  for (const auto& r : s.roads) {
    claim(r.id, NodeKind::kRoad);
    roads.insert(r.id);
  }
  for (const auto& r : s.roads) {
    if (r.junction_id && !junctions.contains(*r.junction_id)) {
      errors.push_back("road " + r.id + ": junction_id '" + *r.junction_id + "' does not resolve");
    }
  }

  if (s.lanes.empty()) errors.emplace_back("snapshot has no lanes");
  std::set<std::string> lanes;
  for (const auto& l : s.lanes) {
    claim(l.id, NodeKind::kLane);
    lanes.insert(l.id);
  }
  for (const auto& l : s.lanes) {
    if (!roads.contains(l.road_id)) {
      errors.push_back("lane " + l.id + ": road_id '" + l.road_id + "' does not resolve");
    }
    if (l.centerline.size() < 2) errors.push_back("lane " + l.id + ": centerline needs >= 2 points");
    for (const auto& p : l.centerline) {
      if (!finite(p.x) || !finite(p.y)) {
        errors.push_back("lane " + l.id + ": non-finite centerline point");
        break;
      }
    }
    if (!(l.width > 0.0 && l.width <= 10.0)) {
      errors.push_back("lane " + l.id + ": width must be in (0, 10]");
    }
    std::set<std::string> succ;
    for (const auto& n : l.successors) {
      if (n == l.id) errors.push_back("lane " + l.id + ": lane is its own successor");
      else if (!lanes.contains(n)) {
        errors.push_back("lane " + l.id + ": successor '" + n + "' does not resolve");
      }
      if (!succ.insert(n).second) errors.push_back("lane " + l.id + ": repeated successor " + n);
    }
    for (const auto* nb : {&l.left_neighbor, &l.right_neighbor}) {
      if (!*nb) continue;
      if ((*nb)->id == l.id) errors.push_back("lane " + l.id + ": lane is its own neighbor");
      else if (!lanes.contains((*nb)->id)) {
        errors.push_back("lane " + l.id + ": neighbor '" + (*nb)->id + "' does not resolve");
      }
    }
    if (l.left_neighbor && l.right_neighbor && l.left_neighbor->id == l.right_neighbor->id) {
      errors.push_back("lane " + l.id + ": same lane on both sides");
    }
  }

  auto check_actor = [&](const ActorState& a, bool is_ego) {
    claim(a.id, a.kind);
    if (is_ego && a.kind != NodeKind::kEgo) errors.push_back("ego must have class 'ego'");
    if (!is_ego && (!is_actor(a.kind) || a.kind == NodeKind::kEgo)) {
      errors.push_back("actor " + a.id + ": class '" + std::string(name_of(a.kind)) +
                       "' is not a non-ego actor class");
    }
    if (!finite(a.x) || !finite(a.y) || !finite(a.yaw)) {
      errors.push_back("actor " + a.id + ": non-finite pose");
    }
    if (a.lane_id && !lanes.contains(*a.lane_id)) {
      errors.push_back("actor " + a.id + ": lane_id '" + *a.lane_id + "' does not resolve");
    }
  };
  check_actor(s.ego, true);
  for (const auto& a : s.actors) check_actor(a, false);

  for (const auto& d : s.objects) {
    claim(d.id, d.kind);
    if (!is_object(d.kind)) {
      errors.push_back("object " + d.id + ": class '" + std::string(name_of(d.kind)) +
                       "' is not a traffic object class");
    }
    if (!finite(d.x) || !finite(d.y)) errors.push_back("object " + d.id + ": non-finite position");
    if (d.lane_ids.empty()) errors.push_back("object " + d.id + ": lane_ids is empty");
    std::set<std::string> seen;
    for (const auto& l : d.lane_ids) {
      if (!lanes.contains(l)) {
        errors.push_back("object " + d.id + ": lane '" + l + "' does not resolve");
      }
      if (!seen.insert(l).second) errors.push_back("object " + d.id + ": repeated lane " + l);
    }
  }
  return errors;
}

}  // namespace sgp
