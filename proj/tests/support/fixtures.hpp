#pragma once

#include <string>

#include "ada/model_io.hpp"
#include "ada/sim_io.hpp"

namespace fixtures {

inline std::string examples_dir() { return ADA_EXAMPLES_DIR; }

inline ada::SystemModel ferry() {
  return ada::load_model(examples_dir() + "/ferry.json");
}

inline std::vector<ada::CausalFactorRecord> ferry_factors() {
  return ada::load_factors(examples_dir() + "/factors_mpcs.json");
}

inline ada::ScenarioParams crossing_scenario() {
  return ada::load_scenario(examples_dir() + "/scenario_crossing.json");
}

// A short obstacle-free scenario useful for fast pipeline tests.
inline ada::ScenarioParams short_scenario(std::uint64_t seed, double duration_s = 30.0) {
  ada::ScenarioParams p = crossing_scenario();
  p.scenario_id = "short-" + std::to_string(seed);
  p.duration_s = duration_s;
  p.obstacles.clear();
  p.seed = seed;
  return p;
}

// Randomized short crossing scenario for monitor/oracle comparisons.
inline ada::ScenarioParams random_scenario(ada::Rng& rng, bool allow_violations) {
  ada::ScenarioParams p = crossing_scenario();
  p.scenario_id = "random";
  p.duration_s = 40.0;
  p.seed = rng.next_bits();
  p.obstacles[0].range_m = rng.uniform(60.0, 350.0);
  p.obstacles[0].bearing_rad = rng.uniform(0.0, ada::kTwoPi);
  p.obstacles[0].speed_mps = rng.uniform(0.0, 3.0);
  p.obstacles[0].course_rad = rng.uniform(0.0, ada::kTwoPi);
  if (allow_violations) {
    switch (rng.next_bits() % 4) {
      case 0:
        p.noise_mode = {true, rng.uniform(1.5, 4.0)};
        break;
      case 1:
        p.obstacles[0].behaviour = {true, rng.uniform(2.0, 30.0),
                                    rng.uniform(0.0, ada::kTwoPi)};
        break;
      case 2:
        p.obstacles[0].speed_mps = rng.uniform(3.0, 5.0);  // breaks the speed cap
        break;
      default:
        p.mpcs_policy = ada::MpcsPolicy::IgnoreAccuracy;
        break;
    }
  }
  return p;
}

}  // namespace fixtures
