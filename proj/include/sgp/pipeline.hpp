#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sgp/extraction.hpp"
#include "sgp/graph.hpp"
#include "sgp/prompting.hpp"
#include "sgp/serialization.hpp"

namespace sgp {

struct PipelineConfig {
  ExtractionConfig extraction;
  Abstraction abstraction = Abstraction::kFull;
  Format format = Format::kText;
  std::optional<TemplateVersion> prompt_template = TemplateVersion::kV3;  // nullopt: "none"
  std::string tokenizer = "default";
  std::optional<std::string> template_override;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reads a JSON document mirroring PipelineConfig. Missing keys keep their
// defaults; unknown keys and bad values throw ConfigError.
//
//   {"extraction": {"bands": {"safety_hazard": 2.0, ..., "visible": 25.0},
//                   "direct_half_angle_deg": 45, "side_boundary_deg": 90,
//                   "rear_split_deg": 135, "lateral_threshold_m": 1.75,
//                   "membership_tolerance_m": 0.5},
//    "abstraction": "full", "format": "text", "template": "v3",
//    "tokenizer": "default", "template_override": null}
PipelineConfig parse_pipeline_config(std::string_view json_text);
std::string pipeline_config_to_json(const PipelineConfig& config);

// Serialized graph for one snapshot under the configured abstraction/format.
SerializedGraph run_graph_pipeline(const SceneSnapshot& snapshot, const PipelineConfig& config);

}  // namespace sgp
