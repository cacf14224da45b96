#pragma once

#include <optional>
#include <string>
#include <utility>

#include "sgp/prompting.hpp"

namespace sgp::testing {

// Strips the fixed scaffolding of a built-in template and returns
// (command, graph). Assumes the command holds no newline.
inline std::optional<std::pair<std::string, std::string>> recover_payloads(
    TemplateVersion v, const std::string& rendered, const std::string& format_tag) {
  if (v == TemplateVersion::kV1) {
    const std::string sep = " Scene graph: ";
    const auto pos = rendered.find(sep);
    if (pos == std::string::npos) return std::nullopt;
    return std::pair{rendered.substr(0, pos), rendered.substr(pos + sep.size())};
  }
  const bool v2 = v == TemplateVersion::kV2;
  const std::string head =
      v2 ? "You are the ego vehicle.\n### Scene Graph\n"
         : "You are the ego vehicle.\n### Scene Graph (read-only)\n```" + format_tag + "\n";
  const std::string mid = v2 ? "\n### Navigation Command\n" : "\n```\n### Navigation Command\n";
  const std::string tail =
      v2 ? "\n" : "\n### Primary Objective\nFollow the navigation command above.\n";
  if (rendered.size() < head.size() + mid.size() + tail.size()) return std::nullopt;
  if (rendered.compare(0, head.size(), head) != 0) return std::nullopt;
  if (rendered.compare(rendered.size() - tail.size(), tail.size(), tail) != 0) return std::nullopt;
  const std::string inner =
      rendered.substr(head.size(), rendered.size() - head.size() - tail.size());
  const auto pos = inner.rfind(mid);
  if (pos == std::string::npos) return std::nullopt;
  return std::pair{inner.substr(pos + mid.size()), inner.substr(0, pos)};
}

}  // namespace sgp::testing
