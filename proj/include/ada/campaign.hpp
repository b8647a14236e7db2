#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "ada/evidence.hpp"
#include "ada/monitors.hpp"
#include "ada/rng.hpp"
#include "ada/sim.hpp"

namespace ada {

// ---------------------------------------------------------------------------
// Parameter space
// ---------------------------------------------------------------------------

struct SpaceDimension {
  std::string name;
  std::string unit;
  double lower = 0.0;
  double upper = 0.0;
  std::string source;  // clause id, or "environment" for operating-area bounds
};

struct ParameterSpace {
  std::vector<SpaceDimension> dimensions;
  std::map<std::string, double> fixed;
  std::map<std::string, std::string> fixed_strings;

  std::size_t size() const { return dimensions.size(); }

  double denormalize(std::size_t dim, double x) const {
    const auto& d = dimensions.at(dim);
    return d.lower + (d.upper - d.lower) * x;
  }
};

namespace detail {

// The clause set whose predicates shape the test space: the component's own
// assumptions plus the assumptions of the components providing them. Same
// expansion the monitor builder uses, so what gets sampled is what gets
// monitored.
inline std::vector<const Clause*> testable_assumptions(const SystemModel& model,
                                                       const Component& component) {
  std::vector<const Clause*> out;
  const DischargeMap discharge = build_discharge_map(model);
  std::set<std::string> provider_ids;
  for (const auto& a : component.contract.assumptions) {
    out.push_back(&a);
    if (const auto* entry = discharge.find(a.id)) {
      if (entry->kind == DischargeKind::DischargedBy) {
        if (auto provider = model.find_clause(entry->provider)) {
          provider_ids.insert(provider.component->id);
        }
      }
    }
  }
  for (const auto& id : provider_ids) {
    if (const auto* provider = model.find_component(id)) {
      for (const auto& a : provider->contract.assumptions) out.push_back(&a);
    }
  }
  return out;
}

inline const Component* parent_of(const Component& node, const std::string& child_id) {
  for (const auto& child : node.children) {
    if (child.id == child_id) return &node;
    if (const auto* hit = parent_of(child, child_id)) return hit;
  }
  return nullptr;
}

}  // namespace detail

// Builds the campaign parameter space for one component from its contract:
// operating-area dimensions come from the parent composite's ODD record,
// state-error assumptions contribute a noise-amplitude dimension over
// (0, epsilon], the obstacle-behaviour assumption caps the obstacle speed
// range, and configuration/tracking assumptions pin fixed values.
inline ParameterSpace derive_parameter_space(const SystemModel& model,
                                             const std::string& component_id) {
  const Component* component = model.find_component(component_id);
  if (!component) throw Error("component " + component_id + " not found");

  const bool own_predicate = std::any_of(
      component->contract.assumptions.begin(), component->contract.assumptions.end(),
      [](const Clause& c) { return c.predicate.has_value(); });
  if (!own_predicate) {
    throw Error("component " + component_id +
                " has no testable assumptions (informal clauses only)");
  }
  const auto assumptions = detail::testable_assumptions(model, *component);

  const Component* parent = detail::parent_of(model.composite, component_id);
  const Component* odd_holder = (parent && parent->odd) ? parent : &model.composite;
  if (!odd_holder->odd) throw Error("no ODD record on composite " + odd_holder->id);
  const OddRecord& odd = *odd_holder->odd;

  ParameterSpace space;
  for (const auto& env : odd.environment) {
    space.dimensions.push_back({env.name, env.unit, env.lower, env.upper, "environment"});
  }

  auto find_dim = [&](const std::string& name) -> SpaceDimension* {
    for (auto& d : space.dimensions) {
      if (d.name == name) return &d;
    }
    return nullptr;
  };

  const DischargeMap discharge = build_discharge_map(model);
  for (const auto* clause : assumptions) {
    if (!clause->predicate) continue;
    if (const auto* b = std::get_if<StateErrorBound>(&*clause->predicate)) {
      if (b->signal != Signal::PositionM) continue;  // only position noise is swept
      // The environment injects what the provider promised, so a guarantee
      // tighter than the assumption shrinks the swept range.
      double upper = b->epsilon;
      if (const auto* entry = discharge.find(clause->id)) {
        if (entry->kind == DischargeKind::DischargedBy) {
          if (const auto provider = model.find_clause(entry->provider)) {
            if (provider.clause->predicate) {
              if (const auto* pb = std::get_if<StateErrorBound>(&*provider.clause->predicate)) {
                upper = std::min(upper, pb->epsilon);
              }
            }
          }
        }
      }
      const std::string name =
          b->subject == Subject::Obstacle ? "eps_pos_obstacle_m" : "eps_pos_own_m";
      if (!find_dim(name)) {
        space.dimensions.push_back({name, "m", 0.0, upper, clause->id});
      }
    } else if (const auto* b = std::get_if<ObstacleBehaviour>(&*clause->predicate)) {
      if (auto* dim = find_dim("obstacle_speed_mps")) {
        dim->upper = std::min(dim->upper, b->max_speed);
        dim->source = clause->id;
      } else {
        space.dimensions.push_back(
            {"obstacle_speed_mps", "m/s", 0.1 * b->max_speed, b->max_speed, clause->id});
      }
    } else if (const auto* b = std::get_if<ConfigValid>(&*clause->predicate)) {
      space.fixed_strings["route_id"] = b->route_id;
      space.fixed["d_min_m"] = b->d_min;
    } else if (const auto* b = std::get_if<TrackingBound>(&*clause->predicate)) {
      space.fixed["dp_eps_pos_m"] = b->eps_pos;
      space.fixed["dp_eps_speed_mps"] = b->eps_speed;
      space.fixed["dp_settle_time_s"] = b->settle_time;
    }
  }

  for (const auto& d : space.dimensions) {
    if (!(d.lower < d.upper)) {
      throw Error("parameter space dimension " + d.name + " has empty range");
    }
  }
  return space;
}

// ---------------------------------------------------------------------------
// Latin hypercube sampling
// ---------------------------------------------------------------------------

// n points in [0,1]^dims with exactly one point per stratum per dimension.
inline std::vector<std::vector<double>> lhs_normalized(std::size_t dims, std::size_t n,
                                                       std::uint64_t seed) {
  if (n == 0) throw Error("lhs sample count must be >= 1");
  std::vector<std::vector<double>> points(n, std::vector<double>(dims, 0.0));
  const Rng base(seed);
  for (std::size_t d = 0; d < dims; ++d) {
    std::vector<std::size_t> strata(n);
    std::iota(strata.begin(), strata.end(), 0);
    Rng perm_rng = base.fork(2 * d);
    for (std::size_t i = n; i > 1; --i) {
      const std::size_t j = perm_rng.next_bits() % i;
      std::swap(strata[i - 1], strata[j]);
    }
    Rng offset_rng = base.fork(2 * d + 1);
    for (std::size_t i = 0; i < n; ++i) {
      points[i][d] = (static_cast<double>(strata[i]) + offset_rng.uniform()) /
                     static_cast<double>(n);
    }
  }
  return points;
}

// ---------------------------------------------------------------------------
// Scenario construction from a point of the space
// ---------------------------------------------------------------------------

struct CampaignOverrides {
  MpcsPolicy policy = MpcsPolicy::Nominal;
  NoiseMode noise_mode;
  bool maneuvering_obstacles = false;  // mid-run course change, breaks the CV assumption
};

class ScenarioFactory {
 public:
  ScenarioFactory(const SystemModel& model, const std::string& component_id)
      : space_(derive_parameter_space(model, component_id)) {
    const Component* parent = detail::parent_of(model.composite, component_id);
    const Component* holder = (parent && parent->odd) ? parent : &model.composite;
    odd_ = *holder->odd;
  }

  const ParameterSpace& space() const { return space_; }

  ScenarioParams make(const std::vector<double>& x, std::uint64_t master_seed,
                      std::size_t index, const CampaignOverrides& overrides) const {
    if (x.size() != space_.size()) throw Error("sample dimensionality mismatch");

    ScenarioParams p;
    char idbuf[16];
    std::snprintf(idbuf, sizeof idbuf, "%04zu", index);
    p.scenario_id = idbuf;
    p.route_id = value_or(space_.fixed_strings, "route_id", odd_.route_id);
    if (odd_.path.size() < 2) throw Error("ODD defaults must provide a two-point path");
    p.path = {Vec2{odd_.path[0][0], odd_.path[0][1]}, Vec2{odd_.path[1][0], odd_.path[1][1]}};
    p.v_max_mps = odd_.v_max_mps;
    p.dv_mps = odd_.dv_mps;
    p.d_min_m = value_or(space_.fixed, "d_min_m", 50.0);
    p.duration_s = odd_.duration_s;
    p.dt_s = odd_.dt_s;
    p.control_period_s = odd_.control_period_s;
    p.horizon_s = horizon_s_;
    p.mpcs_window_s = -1.0;  // plan over the full transit
    p.mpcs_margin_m = odd_.mpcs_margin_m;
    p.dp.tau_s = odd_.tau_s;
    p.dp.eps_pos_m = value_or(space_.fixed, "dp_eps_pos_m", 1.0);
    p.dp.eps_speed_mps = value_or(space_.fixed, "dp_eps_speed_mps", 0.2);
    p.dp.settle_time_s = value_or(space_.fixed, "dp_settle_time_s", 10.0);
    p.dp.disturbance_speed = odd_.dp_disturbance_speed;
    p.dp.disturbance_cross = odd_.dp_disturbance_cross;
    p.own_accuracy = odd_.own_accuracy;
    p.obstacle_accuracy = odd_.obstacle_accuracy;
    p.noise_mode = overrides.noise_mode;
    p.mpcs_policy = overrides.policy;
    p.seed = Rng::derive_seed(master_seed, index);

    ObstacleSpec obstacle;
    obstacle.id = "obs-1";
    obstacle.dimensions_m = odd_.obstacle_dimensions_m;

    for (std::size_t d = 0; d < space_.size(); ++d) {
      const double value = space_.denormalize(d, x[d]);
      const std::string& name = space_.dimensions[d].name;
      if (name == "obstacle_range_m") {
        obstacle.range_m = value;
      } else if (name == "obstacle_bearing_rad") {
        obstacle.bearing_rad = value;
      } else if (name == "obstacle_speed_mps") {
        obstacle.speed_mps = value;
      } else if (name == "obstacle_course_rad") {
        obstacle.course_rad = wrap_angle(value);
      } else if (name == "eps_pos_obstacle_m") {
        p.obstacle_pos_noise_m = value;
      } else if (name == "eps_pos_own_m") {
        p.own_pos_noise_m = value;
      } else {
        throw Error("no scenario binding for dimension '" + name + "'");
      }
    }

    if (overrides.maneuvering_obstacles) {
      obstacle.behaviour.enabled = true;
      obstacle.behaviour.turn_time_s = 0.25 * p.duration_s;
      obstacle.behaviour.new_course_rad = wrap_angle(obstacle.course_rad + 1.0);
    }
    p.obstacles.push_back(obstacle);
    return p;
  }

  void set_horizon(double horizon_s) { horizon_s_ = horizon_s; }

 private:
  template <typename Map, typename V>
  static V value_or(const Map& m, const std::string& key, const V& fallback) {
    const auto it = m.find(key);
    return it == m.end() ? fallback : it->second;
  }

  ParameterSpace space_;
  OddRecord odd_;
  double horizon_s_ = 60.0;
};

// Convenience: full Latin hypercube draw materialized as scenarios.
inline std::vector<ScenarioParams> lhs_sample(const ParameterSpace& space,
                                              const ScenarioFactory& factory, std::size_t n,
                                              std::uint64_t seed,
                                              const CampaignOverrides& overrides = {}) {
  const auto points = lhs_normalized(space.size(), n, seed);
  std::vector<ScenarioParams> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(factory.make(points[i], seed, i, overrides));
  return out;
}

// ---------------------------------------------------------------------------
// Campaign
// ---------------------------------------------------------------------------

struct CampaignPlan {
  std::size_t n = 100;   // initial Latin hypercube size
  std::size_t k = 10;    // seeds per refinement round / boundary size
  int rounds = 0;        // adaptive refinement rounds
  double sigma0 = 0.15;  // initial jitter scale in normalized space
  std::uint64_t master_seed = 0;
  int jobs = 1;
  int shrink_budget = 40;  // simulations per falsified scenario during shrinking
};

struct CampaignSample {
  std::string id;
  std::size_t index = 0;
  std::vector<double> x;  // normalized coordinates
  std::string origin;     // "lhs" or "refine-r<round>"
};

struct BoundaryPoint {
  std::string scenario_id;
  double margin_m = 0.0;
};

struct CampaignReport {
  std::string campaign_id;
  std::string component;
  ParameterSpace space;
  CampaignPlan plan;
  CampaignOverrides overrides;
  std::vector<CampaignSample> samples;
  std::vector<ScenarioVerdict> verdicts;  // index-aligned with samples
  int falsification_count = 0;
  int vacuous_count = 0;
  int pass_count = 0;
  double coverage = 0.0;
  std::vector<BoundaryPoint> boundary;  // k smallest passing margins
  EvidenceItem evidence;
};

// Fraction of hit cells on a fixed 10-bin-per-dimension marginal grid.
inline double grid_coverage(const std::vector<CampaignSample>& samples, std::size_t dims) {
  if (dims == 0) return 0.0;
  std::set<std::pair<std::size_t, int>> hit;
  for (const auto& s : samples) {
    for (std::size_t d = 0; d < dims; ++d) {
      const int bin = std::min(9, static_cast<int>(s.x[d] * 10.0));
      hit.emplace(d, bin);
    }
  }
  return static_cast<double>(hit.size()) / static_cast<double>(10 * dims);
}

namespace detail {

// Margin used for ranking scenarios by how close they came to violation.
// Falsified runs rank by (negative) violation depth so they sort ahead of
// every passing run.
inline double ranking_margin(const ScenarioVerdict& v) {
  if (v.classification == VerdictClass::Falsified) {
    double worst = 0.0;
    for (const auto& o : v.outcomes) {
      if (o.clause_kind == ClauseKind::Guarantee &&
          o.outcome.status == MonitorStatus::Violated) {
        worst = std::max(worst, o.outcome.worst_value);
      }
    }
    const double depth = -worst;
    return std::isfinite(v.margin_m) ? std::min(v.margin_m, depth) : depth;
  }
  return v.margin_m;
}

inline void run_indexed(std::size_t count, int jobs, const std::function<void(std::size_t)>& work) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const int workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) work(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace detail

using TraceSink = std::function<void(const CampaignSample&, const Trace&)>;

// Drives simulate-and-classify for one component: owns the factory, the
// monitor set and the overrides. Refinement and shrinking reuse it so every
// verdict in a campaign is produced by the same pipeline.
class CampaignRunner {
 public:
  CampaignRunner(const SystemModel& model, const std::string& component_id,
                 const CampaignOverrides& overrides)
      : factory_(model, component_id),
        monitors_(build_monitors(model, component_id)),
        overrides_(overrides) {
    // The setpoint-rule horizon doubles as the planning horizon.
    const Component* component = model.find_component(component_id);
    for (const auto& g : component->contract.guarantees) {
      if (g.predicate) {
        if (const auto* r = std::get_if<SafeSetpointRule>(&*g.predicate)) {
          factory_.set_horizon(r->horizon_s);
        }
      }
    }
  }

  const ParameterSpace& space() const { return factory_.space(); }
  const ScenarioFactory& factory() const { return factory_; }
  const CampaignOverrides& overrides() const { return overrides_; }

  ScenarioVerdict simulate_classify(const CampaignSample& sample, std::uint64_t master_seed,
                                    const TraceSink& sink = nullptr) const {
    const ScenarioParams params = factory_.make(sample.x, master_seed, sample.index, overrides_);
    const Trace trace = run_scenario(params);
    ScenarioVerdict verdict = classify_verdict(trace, monitors_);
    verdict.scenario_id = sample.id;
    if (sink) sink(sample, trace);
    return verdict;
  }

 private:
  ScenarioFactory factory_;
  MonitorSet monitors_;
  CampaignOverrides overrides_;
};

// Gaussian local search around the lowest-margin scenarios: each round takes
// the k closest-to-violation runs, jitters them in normalized space with a
// decaying scale, and merges the results. Finds boundary cases a plain
// space-filling design walks past.
inline void adaptive_refine(CampaignReport& report, const CampaignRunner& runner,
                            const TraceSink& sink = nullptr) {
  const auto& plan = report.plan;
  const std::size_t dims = report.space.size();
  for (int round = 0; round < plan.rounds; ++round) {
    std::vector<std::size_t> order(report.verdicts.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return detail::ranking_margin(report.verdicts[a]) <
             detail::ranking_margin(report.verdicts[b]);
    });
    const std::size_t seeds = std::min(plan.k, order.size());
    const double scale = plan.sigma0 * std::pow(0.5, round);

    std::vector<CampaignSample> fresh;
    for (std::size_t s = 0; s < seeds; ++s) {
      const CampaignSample& parent = report.samples[order[s]];
      Rng rng = Rng(plan.master_seed)
                    .fork(0x5eedu + static_cast<std::uint64_t>(round))
                    .fork(parent.index);
      CampaignSample child;
      child.index = report.samples.size() + fresh.size();
      char idbuf[16];
      std::snprintf(idbuf, sizeof idbuf, "%04zu", child.index);
      child.id = idbuf;
      child.origin = "refine-r" + std::to_string(round);
      child.x = parent.x;
      for (std::size_t d = 0; d < dims; ++d) {
        child.x[d] = std::clamp(child.x[d] + scale * rng.gaussian(), 0.0, 1.0);
      }
      fresh.push_back(std::move(child));
    }

    std::vector<ScenarioVerdict> fresh_verdicts(fresh.size());
    detail::run_indexed(fresh.size(), plan.jobs, [&](std::size_t i) {
      fresh_verdicts[i] = runner.simulate_classify(fresh[i], plan.master_seed, sink);
    });
    for (std::size_t i = 0; i < fresh.size(); ++i) {
      report.samples.push_back(std::move(fresh[i]));
      report.verdicts.push_back(std::move(fresh_verdicts[i]));
    }
  }
}

// Pulls a falsifying scenario toward the space midpoint one coordinate at a
// time, keeping only moves that still falsify. Returns the normalized
// coordinates of the shrunk counterexample.
inline std::vector<double> shrink_counterexample(const std::vector<double>& x0,
                                                 const CampaignRunner& runner,
                                                 std::uint64_t master_seed, std::size_t index,
                                                 int budget) {
  std::vector<double> x = x0;
  int sims = 0;
  auto falsifies = [&](const std::vector<double>& candidate) {
    CampaignSample sample;
    sample.index = index;
    sample.id = "shrink";
    sample.x = candidate;
    return runner.simulate_classify(sample, master_seed).classification ==
           VerdictClass::Falsified;
  };
  for (std::size_t d = 0; d < x.size(); ++d) {
    double keep = x[d];
    double target = 0.5;
    while (sims < budget && std::fabs(target - keep) > 0.02) {
      const double mid = 0.5 * (keep + target);
      std::vector<double> trial = x;
      trial[d] = mid;
      ++sims;
      if (falsifies(trial)) {
        keep = mid;
        x[d] = mid;
      } else {
        target = mid;
      }
    }
    if (sims >= budget) break;
  }
  return x;
}

// Full campaign: Latin hypercube draw, simulate and classify everything,
// adaptive refinement, then the aggregate report with its observation
// evidence item. Scenario execution may be parallel; the report content is a
// deterministic function of (model, component, plan, overrides).
inline CampaignReport run_campaign(const SystemModel& model, const std::string& component_id,
                                   const CampaignPlan& plan, const CampaignOverrides& overrides,
                                   const TraceSink& sink = nullptr) {
  CampaignRunner runner(model, component_id, overrides);

  CampaignReport report;
  report.component = component_id;
  report.space = runner.space();
  report.plan = plan;
  report.overrides = overrides;
  report.campaign_id = component_id + "-n" + std::to_string(plan.n) + "-seed" +
                       std::to_string(plan.master_seed);
  if (overrides.policy == MpcsPolicy::IgnoreAccuracy) report.campaign_id += "-mutant";
  if (overrides.noise_mode.violating) report.campaign_id += "-violating";
  if (overrides.maneuvering_obstacles) report.campaign_id += "-maneuver";

  const auto points = lhs_normalized(report.space.size(), plan.n, plan.master_seed);
  for (std::size_t i = 0; i < plan.n; ++i) {
    CampaignSample s;
    s.index = i;
    char idbuf[16];
    std::snprintf(idbuf, sizeof idbuf, "%04zu", i);
    s.id = idbuf;
    s.x = points[i];
    s.origin = "lhs";
    report.samples.push_back(std::move(s));
  }

  report.verdicts.resize(report.samples.size());
  detail::run_indexed(report.samples.size(), plan.jobs, [&](std::size_t i) {
    report.verdicts[i] = runner.simulate_classify(report.samples[i], plan.master_seed, sink);
  });

  adaptive_refine(report, runner, sink);

  for (const auto& v : report.verdicts) {
    switch (v.classification) {
      case VerdictClass::Pass: report.pass_count++; break;
      case VerdictClass::Falsified: report.falsification_count++; break;
      case VerdictClass::Vacuous: report.vacuous_count++; break;
    }
  }
  report.coverage = grid_coverage(report.samples, report.space.size());

  std::vector<BoundaryPoint> passing;
  for (const auto& v : report.verdicts) {
    if (v.classification == VerdictClass::Pass && std::isfinite(v.margin_m)) {
      passing.push_back({v.scenario_id, v.margin_m});
    }
  }
  std::stable_sort(passing.begin(), passing.end(),
                   [](const BoundaryPoint& a, const BoundaryPoint& b) {
                     return a.margin_m < b.margin_m;
                   });
  if (passing.size() > plan.k) passing.resize(plan.k);
  report.boundary = std::move(passing);

  // One observation evidence item per campaign, targeting the guarantees the
  // monitors watched.
  EvidenceItem evidence;
  evidence.id = "ev-" + report.campaign_id;
  evidence.kind = EvidenceKind::Observation;
  {
    std::set<std::string> targets;
    const MonitorSet monitors = build_monitors(model, component_id);
    for (const auto& m : monitors.guarantees) targets.insert(m.clause_id);
    evidence.target_clauses.assign(targets.begin(), targets.end());
  }
  evidence.source = report.campaign_id;
  evidence.coverage = report.coverage;
  if (report.falsification_count > 0) {
    evidence.result = EvidenceResult::Refutes;
    for (const auto& v : report.verdicts) {
      if (v.classification == VerdictClass::Falsified) {
        evidence.falsifying_scenarios.push_back(v.scenario_id);
      }
    }
  } else if (report.pass_count > 0) {
    evidence.result = EvidenceResult::Supports;
  } else {
    evidence.result = EvidenceResult::Inconclusive;
  }
  evidence.strength = std::to_string(report.pass_count) + " passing / " +
                      std::to_string(report.vacuous_count) + " vacuous of " +
                      std::to_string(report.verdicts.size()) + " scenarios";
  evidence.relevance = "simulation-based verification of " + component_id;
  report.evidence = std::move(evidence);
  return report;
}

}  // namespace ada
