#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sgp/snapshot.hpp"

namespace sgp {

struct IntRange {
  int lo = 0;
  int hi = 0;
};

struct SynthConfig {
  std::uint64_t seed = 42;
  IntRange n_roads{2, 6};
  IntRange lanes_per_road{1, 4};
  IntRange n_actors{0, 6};
  IntRange n_devices{0, 4};
  double junction_probability = 0.3;
  double area_m = 200.0;
};

// Empty when the config is usable.
std::vector<std::string> validate_synth_config(const SynthConfig& config);

// SplitMix64 used as a counter-based generator: draw k of a stream is
// mix(key + (k + 1) * 0x9E3779B97F4A7C15), where the stream key for scene
// `index` is mix(seed) ^ mix(index + 0x632BE59BD9B4E019). Scenes are therefore
// independent and addressable by index.
class SceneRng {
 public:
  SceneRng(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next();
  // Uniform in [lo, hi], by modulo reduction of one draw.
  int uniform_int(int lo, int hi);
  // Uniform in [0, 1), from the top 53 bits of one draw.
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  bool bernoulli(double p) { return uniform01() < p; }

  static std::uint64_t mix(std::uint64_t z);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Deterministic in (config.seed, index). Straight parallel lanes per road,
// successor chains from each road to the next, actors on lane centerlines
// within 24 m of the ego, devices anchored on random lanes.
SceneSnapshot synth_scene(const SynthConfig& config, std::uint64_t index);

std::vector<SceneSnapshot> synth_corpus(const SynthConfig& config, std::size_t n);

}  // namespace sgp
