#include "sgp/prompting.hpp"

#include <array>

namespace sgp {

namespace {

constexpr std::string_view kCommandSlot = "{command}";
constexpr std::string_view kGraphSlot = "{graph}";
constexpr std::string_view kFormatSlot = "{format}";
constexpr std::string_view kFence = "```";

constexpr std::string_view kV1 = "{command} Scene graph: {graph}";
constexpr std::string_view kV2 =
    "You are the ego vehicle.\n"
    "### Scene Graph\n"
    "{graph}\n"
    "### Navigation Command\n"
    "{command}\n";
constexpr std::string_view kV3 =
    "You are the ego vehicle.\n"
    "### Scene Graph (read-only)\n"
    "```{format}\n"
    "{graph}\n"
    "```\n"
    "### Navigation Command\n"
    "{command}\n"
    "### Primary Objective\n"
    "Follow the navigation command above.\n";

constexpr std::string_view kV1NoGraph = "{command}";
constexpr std::string_view kV2NoGraph =
    "You are the ego vehicle.\n"
    "### Navigation Command\n"
    "{command}\n";
constexpr std::string_view kV3NoGraph =
    "You are the ego vehicle.\n"
    "### Navigation Command\n"
    "{command}\n"
    "### Primary Objective\n"
    "Follow the navigation command above.\n";

std::size_t occurrences(std::string_view haystack, std::string_view needle) {
  std::size_t count = 0;
  for (std::size_t pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

void require_command(std::string_view command) {
  if (command.empty()) throw PromptError("navigation command is empty");
}

}  // namespace

std::string_view name_of(TemplateVersion version) {
  switch (version) {
    case TemplateVersion::kV1:
      return "v1";
    case TemplateVersion::kV2:
      return "v2";
    case TemplateVersion::kV3:
      return "v3";
  }
  return "v1";
}

std::optional<TemplateVersion> template_from_name(std::string_view name) {
  for (auto v : {TemplateVersion::kV1, TemplateVersion::kV2, TemplateVersion::kV3}) {
    if (name_of(v) == name) return v;
  }
  return std::nullopt;
}

PromptTemplate::PromptTemplate(TemplateVersion version, std::string text)
    : version_(version), text_(std::move(text)) {
  if (occurrences(text_, kCommandSlot) != 1) {
    throw PromptError("template must contain {command} exactly once");
  }
  if (occurrences(text_, kGraphSlot) != 1) {
    throw PromptError("template must contain {graph} exactly once");
  }
  const std::size_t formats = occurrences(text_, kFormatSlot);
  if (version_ == TemplateVersion::kV3 && formats != 1) {
    throw PromptError("v3 template must contain {format} exactly once");
  }
  if (version_ != TemplateVersion::kV3 && formats != 0) {
    throw PromptError("{format} is only allowed in v3 templates");
  }
}

PromptTemplate PromptTemplate::builtin(TemplateVersion version) {
  switch (version) {
    case TemplateVersion::kV1:
      return {version, std::string(kV1)};
    case TemplateVersion::kV2:
      return {version, std::string(kV2)};
    case TemplateVersion::kV3:
      return {version, std::string(kV3)};
  }
  return {version, std::string(kV1)};
}

std::string_view PromptTemplate::builtin_without_graph(TemplateVersion version) {
  switch (version) {
    case TemplateVersion::kV1:
      return kV1NoGraph;
    case TemplateVersion::kV2:
      return kV2NoGraph;
    case TemplateVersion::kV3:
      return kV3NoGraph;
  }
  return kV1NoGraph;
}

std::string PromptTemplate::substitute(std::string_view command, std::string_view graph,
                                       std::string_view format_tag) const {
  std::string out;
  out.reserve(text_.size() + command.size() + graph.size());
  const std::string_view text = text_;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t open = text.find('{', pos);
    if (open == std::string_view::npos) {
      out.append(text.substr(pos));
      break;
    }
    out.append(text.substr(pos, open - pos));
    const std::string_view rest = text.substr(open);
    if (rest.starts_with(kCommandSlot)) {
      out.append(command);
      pos = open + kCommandSlot.size();
    } else if (rest.starts_with(kGraphSlot)) {
      out.append(graph);
      pos = open + kGraphSlot.size();
    } else if (rest.starts_with(kFormatSlot)) {
      out.append(format_tag);
      pos = open + kFormatSlot.size();
    } else {
      out.push_back('{');
      pos = open + 1;
    }
  }
  return out;
}

PromptBundle render(const PromptTemplate& tmpl, std::string_view command,
                    std::string_view graph_body, Format format) {
  require_command(command);
  if (tmpl.version() == TemplateVersion::kV3 && graph_body.find(kFence) != std::string_view::npos) {
    throw PromptError("graph body contains a ``` fence delimiter");
  }
  PromptBundle bundle;
  bundle.version = tmpl.version();
  bundle.format = format;
  bundle.command = std::string(command);
  bundle.graph_body = std::string(graph_body);
  bundle.rendered = tmpl.substitute(command, graph_body, name_of(format));
  return bundle;
}

PromptBundle render_v1(std::string_view command, std::string_view graph_body) {
  return render(PromptTemplate::builtin(TemplateVersion::kV1), command, graph_body, Format::kText);
}

PromptBundle render_v2(std::string_view command, std::string_view graph_body) {
  return render(PromptTemplate::builtin(TemplateVersion::kV2), command, graph_body, Format::kText);
}

PromptBundle render_v3(std::string_view command, std::string_view graph_body, Format format) {
  return render(PromptTemplate::builtin(TemplateVersion::kV3), command, graph_body, format);
}

PromptBundle render_without_graph(TemplateVersion version, std::string_view command) {
  require_command(command);
  PromptBundle bundle;
  bundle.version = version;
  bundle.command = std::string(command);
  bundle.with_graph = false;
  const std::string_view text = PromptTemplate::builtin_without_graph(version);
  const std::size_t slot = text.find(kCommandSlot);
  bundle.rendered = std::string(text.substr(0, slot));
  bundle.rendered += command;
  bundle.rendered += text.substr(slot + kCommandSlot.size());
  return bundle;
}

}  // namespace sgp
