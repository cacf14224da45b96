#include "sgp/tokenstats.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "sgp/abstraction.hpp"
#include "sgp/parallel.hpp"

namespace sgp {

namespace {

bool is_space(unsigned char c) { return std::isspace(c) != 0; }
bool is_word(unsigned char c) { return c >= 0x80 || std::isalnum(c) != 0; }

std::string format_mean(double mean) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", mean);
  return buf;
}

}  // namespace

std::size_t ApproxTokenizer::count(std::string_view body) const {
  std::size_t tokens = 0;
  std::size_t i = 0;
  while (i < body.size()) {
    const auto c = static_cast<unsigned char>(body[i]);
    if (is_space(c)) {
      ++i;
    } else if (is_word(c)) {
      std::size_t run = 0;
      while (i < body.size() && is_word(static_cast<unsigned char>(body[i]))) {
        ++run;
        ++i;
      }
      tokens += (run + 3) / 4;
    } else {
      ++tokens;
      ++i;
    }
  }
  return tokens;
}

std::size_t WhitespaceTokenizer::count(std::string_view body) const {
  std::size_t words = 0;
  bool in_word = false;
  for (char ch : body) {
    const bool space = is_space(static_cast<unsigned char>(ch));
    if (!space && !in_word) ++words;
    in_word = !space;
  }
  return words;
}

std::vector<std::string> tokenizer_names() { return {"default", "whitespace"}; }

const Tokenizer& tokenizer_by_name(std::string_view name) {
  static const ApproxTokenizer approx;
  static const WhitespaceTokenizer whitespace;
  if (name == approx.name()) return approx;
  if (name == whitespace.name()) return whitespace;
  throw UnknownTokenizerError(std::string(name));
}

std::size_t count_tokens(std::string_view body, const Tokenizer& tokenizer) {
  return tokenizer.count(body);
}

std::size_t count_tokens(std::string_view body, std::string_view tokenizer_name) {
  return tokenizer_by_name(tokenizer_name).count(body);
}

TokenSummary summarize(std::vector<std::size_t> counts) {
  if (counts.empty()) throw std::invalid_argument("cannot summarize an empty sample");
  std::sort(counts.begin(), counts.end());
  const std::size_t n = counts.size();
  auto nearest_rank = [&](std::size_t percent) {
    const std::size_t rank = (percent * n + 99) / 100;  // ceil(p/100 * n)
    return counts[std::max<std::size_t>(rank, 1) - 1];
  };
  TokenSummary s;
  s.n = n;
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  s.mean = total / static_cast<double>(n);
  s.min = counts.front();
  s.max = counts.back();
  s.p50 = nearest_rank(50);
  s.p99 = nearest_rank(99);
  return s;
}

std::vector<VariantBody> variant_bodies(const std::vector<SceneSnapshot>& scenes,
                                        const ExtractionConfig& config, std::size_t jobs) {
  constexpr std::size_t kPerScene = 9;
  std::vector<VariantBody> out(scenes.size() * kPerScene);
  parallel_for(scenes.size(), jobs, [&](std::size_t i) {
    const SceneSnapshot& scene = scenes[i];
    try {
      const SceneGraph full = build_graph(scene, config);
      std::size_t slot = i * kPerScene;
      for (Abstraction a : all_abstractions()) {
        const SceneGraph g = abstract(full, a);
        for (Format f : all_formats()) {
          out[slot++] = VariantBody{scene.frame_id, a, f, serialize(g, f).body};
        }
      }
    } catch (const PipelineError&) {
      throw;
    } catch (const std::exception& e) {
      throw PipelineError(scene.frame_id, e.what());
    }
  });
  return out;
}

CorpusStats stats_from_counts(const std::vector<VariantBody>& bodies,
                              const std::vector<std::size_t>& counts, std::string tokenizer_name) {
  std::map<VariantKey, std::vector<std::size_t>> grouped;
  std::map<std::string, bool> frames;
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    grouped[{bodies[i].abstraction, bodies[i].format}].push_back(counts.at(i));
    frames[bodies[i].frame_id] = true;
  }
  CorpusStats stats;
  stats.tokenizer = std::move(tokenizer_name);
  stats.corpus_size = frames.size();
  for (auto& [key, values] : grouped) stats.rows.emplace(key, summarize(std::move(values)));
  return stats;
}

CorpusStats corpus_stats(const std::vector<SceneSnapshot>& scenes, const ExtractionConfig& config,
                         const Tokenizer& tokenizer, std::size_t jobs) {
  if (scenes.empty()) throw std::invalid_argument("corpus is empty");
  const auto bodies = variant_bodies(scenes, config, jobs);
  std::vector<std::size_t> counts(bodies.size());
  parallel_for(bodies.size(), jobs,
               [&](std::size_t i) { counts[i] = tokenizer.count(bodies[i].body); });
  return stats_from_counts(bodies, counts, std::string(tokenizer.name()));
}

std::string body_digest(std::string_view body) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(body.data(), body.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0x0f]);
  }
  return hex;
}

std::map<std::string, std::size_t> parse_counts_file(std::string_view text) {
  std::map<std::string, std::size_t> counts;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string digest;
    std::string count_text;
    std::string extra;
    fields >> digest >> count_text;
    std::size_t value = 0;
    const auto [ptr, ec] =
        std::from_chars(count_text.data(), count_text.data() + count_text.size(), value);
    const bool hex_ok = !digest.empty() && std::all_of(digest.begin(), digest.end(), [](char c) {
      return std::isxdigit(static_cast<unsigned char>(c)) != 0;
    });
    if (!hex_ok || count_text.empty() || ec != std::errc{} ||
        ptr != count_text.data() + count_text.size() || (fields >> extra)) {
      throw std::runtime_error("counts file line " + std::to_string(line_no) +
                               ": expected '<hex digest> <count>'");
    }
    std::transform(digest.begin(), digest.end(), digest.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    counts[digest] = value;
  }
  return counts;
}

CorpusStats external_token_counts(const std::vector<VariantBody>& bodies,
                                  const std::map<std::string, std::size_t>& counts,
                                  std::string tokenizer_name) {
  if (bodies.empty()) throw std::invalid_argument("no bodies to aggregate");
  std::vector<std::size_t> values;
  values.reserve(bodies.size());
  for (const auto& b : bodies) {
    const auto it = counts.find(body_digest(b.body));
    if (it == counts.end()) {
      throw PipelineError(b.frame_id, "no external count for the " +
                                          std::string(name_of(b.abstraction)) + "/" +
                                          std::string(name_of(b.format)) + " body");
    }
    values.push_back(it->second);
  }
  return stats_from_counts(bodies, values, std::move(tokenizer_name));
}

std::string stats_csv(const CorpusStats& stats) {
  std::string out = "abstraction,format,n,mean,min,p50,p99,max\n";
  for (Abstraction a : all_abstractions()) {
    for (Format f : all_formats()) {
      const auto it = stats.rows.find({a, f});
      if (it == stats.rows.end()) continue;
      const TokenSummary& s = it->second;
      out += std::string(name_of(a)) + "," + std::string(name_of(f)) + "," +
             std::to_string(s.n) + "," + format_mean(s.mean) + "," + std::to_string(s.min) +
             "," + std::to_string(s.p50) + "," + std::to_string(s.p99) + "," +
             std::to_string(s.max) + "\n";
    }
  }
  return out;
}

std::string stats_json(const CorpusStats& stats) {
  nlohmann::ordered_json doc;
  doc["tokenizer"] = stats.tokenizer;
  doc["digest_algorithm"] = std::string(kDigestAlgorithm);
  doc["corpus_size"] = stats.corpus_size;
  doc["rows"] = nlohmann::ordered_json::array();
  for (Abstraction a : all_abstractions()) {
    for (Format f : all_formats()) {
      const auto it = stats.rows.find({a, f});
      if (it == stats.rows.end()) continue;
      const TokenSummary& s = it->second;
      nlohmann::ordered_json row;
      row["abstraction"] = std::string(name_of(a));
      row["format"] = std::string(name_of(f));
      row["n"] = s.n;
      row["mean"] = s.mean;
      row["min"] = s.min;
      row["p50"] = s.p50;
      row["p99"] = s.p99;
      row["max"] = s.max;
      doc["rows"].push_back(std::move(row));
    }
  }
  return doc.dump(2) + "\n";
}

}  // namespace sgp
