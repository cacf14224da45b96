#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sgp/graph.hpp"

namespace sgp {

enum class Format : std::uint8_t { kText, kJson, kYaml };

const std::array<Format, 3>& all_formats();
std::string_view name_of(Format format);
std::string_view file_extension(Format format);  // "txt", "json", "yaml"
std::optional<Format> format_from_name(std::string_view name);

struct SerializedGraph {
  Format format = Format::kText;
  std::string body;
  std::string source_frame;
};

// Emission blocks, in output order.
enum class Block : std::uint8_t {
  kRoadToJunction,
  kLaneToRoad,
  kConnectivity,
  kObjects,
  kActorMembership,
  kInteractions,
};

// One ordered node pair with every label it carries, in canonical label order
// (relation group first, then alphabetical within the group).
struct PairEntry {
  Block block = Block::kInteractions;
  std::string source;
  std::string target;
  std::vector<Relation> labels;
};

std::vector<PairEntry> canonical_order(const SceneGraph& graph);

// Node order shared by the json and yaml forms: junctions, roads, lanes,
// objects, actors, ego last; each run sorted by natural id order.
std::vector<const Node*> canonical_nodes(const SceneGraph& graph);

SerializedGraph serialize_text(const SceneGraph& graph);
SerializedGraph serialize_json(const SceneGraph& graph);
SerializedGraph serialize_yaml(const SceneGraph& graph);
SerializedGraph serialize(const SceneGraph& graph, Format format);

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what, std::optional<std::size_t> line = std::nullopt,
                      std::optional<std::size_t> column = std::nullopt)
      : std::runtime_error(what), line_(line), column_(column) {}
  std::optional<std::size_t> line() const { return line_; }
  std::optional<std::size_t> column() const { return column_; }

 private:
  std::optional<std::size_t> line_;
  std::optional<std::size_t> column_;
};

// Rebuild a graph from a json or yaml body. The abstraction is inferred from
// the node classes: lanes present means full, roads without lanes means road
// level, otherwise actor only. Throws ParseError on syntax errors (with a
// 1-based position), unknown class or label names, and typing violations.
SceneGraph parse_json(std::string_view body, std::string frame_id = {});
SceneGraph parse_yaml(std::string_view body, std::string frame_id = {});

}  // namespace sgp
