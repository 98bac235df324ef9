#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "svt/scenario.hpp"

namespace svt {

inline constexpr int kSceneSchemaVersion = 1;
inline constexpr std::size_t kDefaultTestPoolSize = 1000;

// One training mix: sample counts per functional scenario.
struct MixSpec {
  std::size_t n_acc{0};
  std::size_t n_lk{0};
  std::size_t n_acc_lk{0};

  std::size_t total() const { return n_acc + n_lk + n_acc_lk; }
  std::string label() const;
};

// JSON Lines, one scene per line, stable key order, numbers written with
// round-trip precision. Returns the number of records written.
std::size_t write_scenes(const std::vector<SceneRecord>& records,
                         const std::string& path);

// Parses and validates; throws with the offending line number on
// malformed input, on schema_version mismatch, and on invariant
// violations.
std::vector<SceneRecord> read_scenes(const std::string& path);

struct ScenePools {
  std::vector<SceneRecord> training;
  std::map<ScenarioKind, std::vector<SceneRecord>> test;
};

// Deterministic mix assembly: per kind, the last `test_pool_size` records
// of the source form that kind's test pool and the training records are
// taken from the front. Throws when a source cannot cover both.
ScenePools assemble_mix(
    const MixSpec& spec,
    const std::map<ScenarioKind, std::vector<SceneRecord>>& sources,
    std::size_t test_pool_size = kDefaultTestPoolSize);

// Deterministic shuffled split into floor(ratio*N) / remainder.
std::pair<std::vector<SceneRecord>, std::vector<SceneRecord>> split_train_val(
    const std::vector<SceneRecord>& pool, double ratio, std::uint64_t seed);

}  // namespace svt
