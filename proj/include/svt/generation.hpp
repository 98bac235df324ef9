#pragma once

#include <cstdint>
#include <vector>

#include "svt/simulator.hpp"

namespace svt {

struct GenerationJob {
  ScenarioKind kind{ScenarioKind::kAcc};
  std::uint64_t master_seed{0};
  std::size_t count{0};
  SimParams sim{};
};

// Sample -> lane geometry -> simulate -> metrics for one record index.
// Pure function of (kind, master_seed, index, sim).
SceneRecord generate_record(ScenarioKind kind, std::uint64_t master_seed,
                            std::uint64_t index, const SimParams& sim = {});

// Serial reference implementation.
std::vector<SceneRecord> generate_records_serial(const GenerationJob& job);

// OpenMP over record indices; per-record substreams make the output
// bit-identical to the serial reference.
std::vector<SceneRecord> generate_records(const GenerationJob& job);

}  // namespace svt
