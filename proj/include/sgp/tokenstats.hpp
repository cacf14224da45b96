#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sgp/extraction.hpp"
#include "sgp/serialization.hpp"

namespace sgp {

class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::string_view name() const = 0;
  virtual std::size_t count(std::string_view body) const = 0;
};

// Built-in approximation of a subword tokenizer. Whitespace separates pieces;
// a maximal run of alphanumeric bytes (bytes >= 0x80 count as alphanumeric)
// costs ceil(len / 4) tokens and every other byte is a one-token piece.
class ApproxTokenizer final : public Tokenizer {
 public:
  std::string_view name() const override { return "default"; }
  std::size_t count(std::string_view body) const override;
};

// One token per whitespace-separated word.
class WhitespaceTokenizer final : public Tokenizer {
 public:
  std::string_view name() const override { return "whitespace"; }
  std::size_t count(std::string_view body) const override;
};

class UnknownTokenizerError : public std::runtime_error {
 public:
  explicit UnknownTokenizerError(const std::string& name)
      : std::runtime_error("unknown tokenizer '" + name + "'") {}
};

std::vector<std::string> tokenizer_names();
// Throws UnknownTokenizerError.
const Tokenizer& tokenizer_by_name(std::string_view name);

std::size_t count_tokens(std::string_view body, const Tokenizer& tokenizer);
std::size_t count_tokens(std::string_view body, std::string_view tokenizer_name);

struct TokenSummary {
  std::size_t n = 0;
  double mean = 0.0;
  std::size_t min = 0;
  std::size_t p50 = 0;
  std::size_t p99 = 0;
  std::size_t max = 0;

  friend bool operator==(const TokenSummary&, const TokenSummary&) = default;
};

// Nearest-rank percentiles. Throws std::invalid_argument on an empty sample.
TokenSummary summarize(std::vector<std::size_t> counts);

using VariantKey = std::pair<Abstraction, Format>;

struct CorpusStats {
  std::string tokenizer;
  std::size_t corpus_size = 0;
  std::map<VariantKey, TokenSummary> rows;

  const TokenSummary& at(Abstraction a, Format f) const { return rows.at({a, f}); }
  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

class PipelineError : public std::runtime_error {
 public:
  PipelineError(std::string frame_id, const std::string& message)
      : std::runtime_error("frame " + frame_id + ": " + message), frame_id_(std::move(frame_id)) {}
  const std::string& frame_id() const { return frame_id_; }

 private:
  std::string frame_id_;
};

// One serialized graph body with its origin.
struct VariantBody {
  std::string frame_id;
  Abstraction abstraction = Abstraction::kFull;
  Format format = Format::kText;
  std::string body;
};

// build -> abstract -> serialize for every (abstraction, format) pair, in
// scene order then abstraction then format. Throws PipelineError naming the
// offending frame.
std::vector<VariantBody> variant_bodies(const std::vector<SceneSnapshot>& scenes,
                                        const ExtractionConfig& config, std::size_t jobs = 1);

CorpusStats corpus_stats(const std::vector<SceneSnapshot>& scenes, const ExtractionConfig& config,
                         const Tokenizer& tokenizer, std::size_t jobs = 1);

// Aggregates counts over already serialized bodies.
CorpusStats stats_from_counts(const std::vector<VariantBody>& bodies,
                              const std::vector<std::size_t>& counts, std::string tokenizer_name);

// Lowercase hex SHA-256 of a body; keys for external count files.
std::string body_digest(std::string_view body);
inline constexpr std::string_view kDigestAlgorithm = "sha256";

// Parses "<hex digest> <count>" lines; blank lines and lines starting with
// '#' are skipped. Throws std::runtime_error with the line number on a
// malformed record.
std::map<std::string, std::size_t> parse_counts_file(std::string_view text);

// Stats from externally produced counts. Throws PipelineError naming the
// frame whose body digest is missing.
CorpusStats external_token_counts(const std::vector<VariantBody>& bodies,
                                  const std::map<std::string, std::size_t>& counts,
                                  std::string tokenizer_name = "external");

// Reports. The CSV has a header line and one row per (abstraction, format).
std::string stats_csv(const CorpusStats& stats);
std::string stats_json(const CorpusStats& stats);

}  // namespace sgp
