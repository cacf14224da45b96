#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sgp/serialization.hpp"

namespace sgp {

enum class TemplateVersion : std::uint8_t { kV1, kV2, kV3 };

std::string_view name_of(TemplateVersion version);
std::optional<TemplateVersion> template_from_name(std::string_view name);

class PromptError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Prompt layout with {command}, {graph} and (v3 only) {format} placeholders.
// Substitution is single-pass, so payloads that happen to contain placeholder
// text are copied verbatim.
class PromptTemplate {
 public:
  // Throws PromptError unless {command} and {graph} each occur exactly once
  // and {format} occurs exactly once for v3 and never otherwise.
  PromptTemplate(TemplateVersion version, std::string text);

  static PromptTemplate builtin(TemplateVersion version);
  // Variant without the scene-graph section, for graph-free inference prompts.
  // Only {command} (and nothing else) is substituted.
  static std::string_view builtin_without_graph(TemplateVersion version);

  TemplateVersion version() const { return version_; }
  const std::string& text() const { return text_; }

  std::string substitute(std::string_view command, std::string_view graph,
                         std::string_view format_tag) const;

 private:
  TemplateVersion version_;
  std::string text_;
};

struct PromptBundle {
  TemplateVersion version = TemplateVersion::kV1;
  Format format = Format::kText;
  std::string command;
  std::string graph_body;
  bool with_graph = true;
  std::string rendered;
};

// "<command> Scene graph: <graph>".
PromptBundle render_v1(std::string_view command, std::string_view graph_body);
// Ego-role sentence, then a headed graph block and a headed command block.
PromptBundle render_v2(std::string_view command, std::string_view graph_body);
// Like v2, but the graph sits in a fence tagged with its format and a short
// primary objective closes the prompt. Rejects bodies containing "```".
PromptBundle render_v3(std::string_view command, std::string_view graph_body, Format format);

// Renders with an explicit template (built-in or loaded from a file).
PromptBundle render(const PromptTemplate& tmpl, std::string_view command,
                    std::string_view graph_body, Format format);

// Graph-free prompt: the scene-graph section is dropped entirely.
PromptBundle render_without_graph(TemplateVersion version, std::string_view command);

}  // namespace sgp
