// Test-side reference implementations, kept independent of the library's
// algorithms: brute-force sweeps and naive per-tick re-evaluations that the
// production code paths are checked against.
#pragma once

#include <string>
#include <vector>

#include "ada/contract.hpp"
#include "ada/monitors.hpp"
#include "ada/rng.hpp"
#include "ada/sim.hpp"

namespace oracle {

// Minimum separation of two constant-velocity tracks found by time sweep.
ada::CpaResult cpa_sweep(const ada::Vec2& pos_a, const ada::Vec2& vel_a, const ada::Vec2& pos_b,
                         const ada::Vec2& vel_b, double horizon_s, double dt);

// Worst (largest) value of req(t) - sep(t) over [0, horizon], found by dense
// sampling followed by local ternary refinement of the sampled maximum.
double max_deficit_sweep(const ada::Vec2& rel_pos, const ada::Vec2& rel_vel, double req0,
                         double slope, double horizon_s, double dt);

// Exhaustive re-implementation of the speed selection: same candidate grid,
// admissibility decided by the sweep above at the given resolution.
double mpcs_choice_sweep(const ada::BeliefState& belief, const ada::MpcsConfig& cfg,
                         const ada::DpParams& dp, double dt);

// Naive per-tick re-evaluations of each monitor kind. Status and first
// violating tick must match the production monitors.
struct Outcome {
  ada::MonitorStatus status = ada::MonitorStatus::NotApplicable;
  int first_tick = -1;
};

Outcome state_error_recheck(const ada::Trace& trace, const ada::StateErrorBound& bound);
Outcome separation_recheck(const ada::Trace& trace, const ada::SeparationBound& bound);
Outcome tracking_recheck(const ada::Trace& trace, const ada::TrackingBound& bound);
Outcome behaviour_recheck(const ada::Trace& trace, const ada::ObstacleBehaviour& bound);
Outcome config_recheck(const ada::Trace& trace, const ada::ConfigValid& bound);
Outcome setpoint_recheck(const ada::Trace& trace, const ada::SafeSetpointRule& rule);

// Random generators for property suites (deterministic in the seed).
ada::PredicateSpec random_predicate(ada::Rng& rng);
ada::PredicateSpec random_predicate_same_variant(const ada::PredicateSpec& like, ada::Rng& rng);
ada::BeliefState random_crossing_belief(ada::Rng& rng, int max_obstacles = 2);

// Property suites shared by the unit tests and the acceptance runner. Each
// returns the number of failed cases out of n.
int entails_reflexivity_failures(int n, std::uint64_t seed);
int entails_transitivity_failures(int n, std::uint64_t seed);
int entails_antisymmetry_failures(int n, std::uint64_t seed);
int entails_monotonicity_failures(int n, std::uint64_t seed);
int stub_mapping_failures();

}  // namespace oracle
