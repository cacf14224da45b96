#include "sgp/pipeline.hpp"

#include <algorithm>
#include <array>

#include "json.hpp"
#include "sgp/abstraction.hpp"

namespace sgp {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::array<std::string_view, 6> kBandNames{"safety_hazard", "near_collision",
                                                     "super_near",    "very_near",
                                                     "near",          "visible"};

double number(const ordered_json& j, std::string_view key) {
  if (!j.is_number()) throw ConfigError("'" + std::string(key) + "' must be a number");
  return j.get<double>();
}

std::string text(const ordered_json& j, std::string_view key) {
  if (!j.is_string()) throw ConfigError("'" + std::string(key) + "' must be a string");
  return j.get<std::string>();
}

void read_extraction(const ordered_json& j, ExtractionConfig& cfg) {
  if (!j.is_object()) throw ConfigError("'extraction' must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "bands") {
      if (!value.is_object()) throw ConfigError("'bands' must be an object");
      for (const auto& [band, bound] : value.items()) {
        const auto it = std::find(kBandNames.begin(), kBandNames.end(), band);
        if (it == kBandNames.end()) throw ConfigError("unknown proximity band '" + band + "'");
        cfg.band_upper_m[static_cast<std::size_t>(it - kBandNames.begin())] = number(bound, band);
      }
    } else if (key == "direct_half_angle_deg") {
      cfg.direct_half_angle_deg = number(value, key);
    } else if (key == "side_boundary_deg") {
      cfg.side_boundary_deg = number(value, key);
    } else if (key == "rear_split_deg") {
      cfg.rear_split_deg = number(value, key);
    } else if (key == "lateral_threshold_m") {
      cfg.lateral_threshold_m = number(value, key);
    } else if (key == "membership_tolerance_m") {
      cfg.membership_tolerance_m = number(value, key);
    } else {
      throw ConfigError("unknown extraction key '" + key + "'");
    }
  }
  if (const auto errors = validate_config(cfg); !errors.empty()) throw ConfigError(errors.front());
}

}  // namespace

PipelineConfig parse_pipeline_config(std::string_view json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  PipelineConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    if (key == "extraction") {
      read_extraction(value, cfg.extraction);
    } else if (key == "abstraction") {
      const auto a = abstraction_from_name(text(value, key));
      if (!a) throw ConfigError("unknown abstraction '" + value.get<std::string>() + "'");
      cfg.abstraction = *a;
    } else if (key == "format") {
      const auto f = format_from_name(text(value, key));
      if (!f) throw ConfigError("unknown format '" + value.get<std::string>() + "'");
      cfg.format = *f;
    } else if (key == "template") {
      const std::string name = text(value, key);
      if (name == "none") {
        cfg.prompt_template.reset();
      } else if (const auto v = template_from_name(name)) {
        cfg.prompt_template = *v;
      } else {
        throw ConfigError("unknown template '" + name + "'");
      }
    } else if (key == "tokenizer") {
      cfg.tokenizer = text(value, key);
    } else if (key == "template_override") {
      if (value.is_null()) {
        cfg.template_override.reset();
      } else {
        cfg.template_override = text(value, key);
      }
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  return cfg;
}

std::string pipeline_config_to_json(const PipelineConfig& cfg) {
  ordered_json doc;
  ordered_json bands;
  for (std::size_t i = 0; i < kBandNames.size(); ++i) {
    bands[std::string(kBandNames[i])] = cfg.extraction.band_upper_m[i];
  }
  doc["extraction"]["bands"] = bands;
  doc["extraction"]["direct_half_angle_deg"] = cfg.extraction.direct_half_angle_deg;
  doc["extraction"]["side_boundary_deg"] = cfg.extraction.side_boundary_deg;
  doc["extraction"]["rear_split_deg"] = cfg.extraction.rear_split_deg;
  doc["extraction"]["lateral_threshold_m"] = cfg.extraction.lateral_threshold_m;
  doc["extraction"]["membership_tolerance_m"] = cfg.extraction.membership_tolerance_m;
  doc["abstraction"] = std::string(name_of(cfg.abstraction));
  doc["format"] = std::string(name_of(cfg.format));
  doc["template"] = cfg.prompt_template ? std::string(name_of(*cfg.prompt_template)) : "none";
  doc["tokenizer"] = cfg.tokenizer;
  doc["template_override"] =
      cfg.template_override ? ordered_json(*cfg.template_override) : ordered_json(nullptr);
  return doc.dump(2) + "\n";
}

SerializedGraph run_graph_pipeline(const SceneSnapshot& snapshot, const PipelineConfig& config) {
  const SceneGraph full = build_graph(snapshot, config.extraction);
  return serialize(abstract(full, config.abstraction), config.format);
}

}  // namespace sgp
