#include "svt/generation.hpp"

namespace svt {

SceneRecord generate_record(ScenarioKind kind, std::uint64_t master_seed,
                            std::uint64_t index, const SimParams& sim) {
  SamplerConfig config{kind, master_seed, index + 1};
  const ConcreteScenario scenario = sample_concrete(config, index);
  const LaneGeometry lanes = sample_lane_geometry(scenario);
  return simulate(scenario, lanes, sim);
}

std::vector<SceneRecord> generate_records_serial(const GenerationJob& job) {
  std::vector<SceneRecord> records(job.count);
  for (std::size_t i = 0; i < job.count; ++i) {
    records[i] = generate_record(job.kind, job.master_seed, i, job.sim);
  }
  return records;
}

std::vector<SceneRecord> generate_records(const GenerationJob& job) {
  std::vector<SceneRecord> records(job.count);
  const long long n = static_cast<long long>(job.count);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
  for (long long i = 0; i < n; ++i) {
    records[i] = generate_record(job.kind, job.master_seed,
                                 static_cast<std::uint64_t>(i), job.sim);
  }
  return records;
}

}  // namespace svt
