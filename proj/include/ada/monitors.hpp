#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ada/discharge.hpp"
#include "ada/model.hpp"
#include "ada/sim.hpp"

namespace ada {

enum class MonitorStatus { Held, Violated, NotApplicable };

inline const char* to_string(MonitorStatus s) {
  switch (s) {
    case MonitorStatus::Held: return "held";
    case MonitorStatus::Violated: return "violated";
    case MonitorStatus::NotApplicable: return "not_applicable";
  }
  return "?";
}

struct MonitorOutcome {
  MonitorStatus status = MonitorStatus::NotApplicable;
  int first_tick = -1;        // first violating tick when violated
  double worst_value = 0.0;   // largest observed exceedance of the bound
};

// Pure, total evaluator for one clause predicate over a trace.
struct ClauseMonitor {
  std::string clause_id;
  ClauseKind clause_kind = ClauseKind::Assumption;
  std::function<MonitorOutcome(const Trace&)> evaluate;
};

namespace detail {

// Slack for comparisons that re-derive a bound the simulator enforces by
// exact clamping; keeps projection-onto-bound states from reading as
// violations through float noise.
inline constexpr double kMonitorSlack = 1e-9;

struct Accumulator {
  MonitorOutcome out;
  bool any_applicable = false;

  void applicable() {
    any_applicable = true;
    if (out.status == MonitorStatus::NotApplicable) out.status = MonitorStatus::Held;
  }
  void exceed(int tick, double amount) {
    if (out.status != MonitorStatus::Violated) {
      out.status = MonitorStatus::Violated;
      out.first_tick = tick;
    }
    out.worst_value = std::max(out.worst_value, amount);
  }
};

inline double signal_error(Signal signal, const VesselState& truth, const VesselState& estimate) {
  switch (signal) {
    case Signal::PositionM: return (estimate.position - truth.position).norm();
    case Signal::SpeedMps: return std::fabs(estimate.speed - truth.speed);
    case Signal::HeadingRad: return angular_distance(estimate.heading, truth.heading);
    case Signal::CourseRad: return angular_distance(estimate.course, truth.course);
    case Signal::DimensionsM: return 0.0;  // handled separately, needs dimensions
  }
  return 0.0;
}

inline ClauseMonitor make_state_error_monitor(const Clause& clause, const StateErrorBound& bound) {
  return {clause.id, clause.kind, [bound](const Trace& trace) {
            Accumulator acc;
            for (const auto& tick : trace.ticks) {
              if (bound.subject == Subject::Own) {
                if (bound.signal == Signal::DimensionsM) continue;  // ownship has no extent estimate
                acc.applicable();
                const double err = signal_error(bound.signal, tick.own_truth, tick.own_belief.state);
                if (err > bound.epsilon + kMonitorSlack) acc.exceed(tick.index, err - bound.epsilon);
              } else {
                for (const auto& o : tick.obstacles) {
                  acc.applicable();
                  double err = 0.0;
                  if (bound.signal == Signal::DimensionsM) {
                    err = std::max(std::fabs(o.belief.dimensions_m[0] - o.true_dimensions_m[0]),
                                   std::fabs(o.belief.dimensions_m[1] - o.true_dimensions_m[1]));
                  } else {
                    err = signal_error(bound.signal, o.truth, o.belief.state);
                  }
                  if (err > bound.epsilon + kMonitorSlack) acc.exceed(tick.index, err - bound.epsilon);
                }
              }
            }
            return acc.out;
          }};
}

inline ClauseMonitor make_separation_monitor(const Clause& clause, const SeparationBound& bound) {
  return {clause.id, clause.kind, [bound](const Trace& trace) {
            Accumulator acc;
            for (const auto& tick : trace.ticks) {
              for (const auto& o : tick.obstacles) {
                acc.applicable();
                const double sep =
                    separation(tick.own_truth.position, o.truth.position, o.true_dimensions_m);
                if (sep < bound.d_min) acc.exceed(tick.index, bound.d_min - sep);
              }
            }
            return acc.out;  // NotApplicable when there was nothing to separate from
          }};
}

inline ClauseMonitor make_tracking_monitor(const Clause& clause, const TrackingBound& bound) {
  return {clause.id, clause.kind, [bound](const Trace& trace) {
            Accumulator acc;
            const auto& p = trace.params;
            const Vec2 dir = p.path_dir();
            const Vec2 normal{dir.north, -dir.east};
            double held_since = 0.0;
            double held_cmd = trace.ticks.empty() ? 0.0 : trace.ticks.front().setpoint.cmd_mps;
            for (const auto& tick : trace.ticks) {
              acc.applicable();
              const double cross = std::fabs((tick.own_truth.position - p.path[0]).dot(normal));
              if (cross > bound.eps_pos + kMonitorSlack) {
                acc.exceed(tick.index, cross - bound.eps_pos);
              }
              if (tick.setpoint.cmd_mps != held_cmd) {
                held_cmd = tick.setpoint.cmd_mps;
                held_since = tick.t;
              }
              if (tick.t - held_since >= bound.settle_time) {
                const double err = std::fabs(tick.own_truth.speed - held_cmd);
                if (err > bound.eps_speed + kMonitorSlack) {
                  acc.exceed(tick.index, err - bound.eps_speed);
                }
              }
            }
            return acc.out;
          }};
}

inline ClauseMonitor make_behaviour_monitor(const Clause& clause, const ObstacleBehaviour& bound) {
  return {clause.id, clause.kind, [bound](const Trace& trace) {
            Accumulator acc;
            const double dt = trace.params.dt_s;
            for (std::size_t i = 0; i < trace.ticks.size(); ++i) {
              const auto& tick = trace.ticks[i];
              for (std::size_t j = 0; j < tick.obstacles.size(); ++j) {
                acc.applicable();
                const auto& truth = tick.obstacles[j].truth;
                if (truth.speed > bound.max_speed + kMonitorSlack) {
                  acc.exceed(tick.index, truth.speed - bound.max_speed);
                }
                if (i + 1 < trace.ticks.size() && j < trace.ticks[i + 1].obstacles.size()) {
                  const auto& next = trace.ticks[i + 1].obstacles[j].truth;
                  const double turn = angular_distance(next.course, truth.course);
                  if (turn > bound.max_turn_rate * dt + kMonitorSlack) {
                    acc.exceed(tick.index, turn - bound.max_turn_rate * dt);
                  }
                  const double accel = std::fabs(next.speed - truth.speed);
                  if (accel > kMonitorSlack) acc.exceed(tick.index, accel);
                }
              }
            }
            return acc.out;
          }};
}

inline ClauseMonitor make_config_monitor(const Clause& clause, const ConfigValid& bound) {
  return {clause.id, clause.kind, [bound](const Trace& trace) {
            MonitorOutcome out;
            out.status = MonitorStatus::Held;
            if (trace.params.route_id != bound.route_id ||
                trace.params.d_min_m != bound.d_min) {
              out.status = MonitorStatus::Violated;
              out.first_tick = 0;
              out.worst_value = std::fabs(trace.params.d_min_m - bound.d_min);
            }
            return out;
          }};
}

// Re-derives the admissibility of every logged setpoint from the logged
// beliefs, the declared accuracies and the nominal required-separation rule.
// A decision logic that plans against weaker margins (the ignore_accuracy
// mutant) violates this monitor even in runs where true separation survives.
inline ClauseMonitor make_setpoint_monitor(const Clause& clause, const SafeSetpointRule& rule) {
  return {clause.id, clause.kind, [rule](const Trace& trace) {
            Accumulator acc;
            const auto& p = trace.params;
            const int control_every =
                std::max(1, static_cast<int>(std::llround(p.control_period_s / p.dt_s)));
            const Vec2 dir = p.path_dir();
            const double slope = p.own_accuracy.speed_mps + p.obstacle_accuracy.speed_mps;
            for (const auto& tick : trace.ticks) {
              if (tick.index % control_every != 0) continue;
              if (tick.obstacles.empty()) continue;
              acc.applicable();
              const Vec2 own_vel = dir * tick.setpoint.cmd_mps;
              for (const auto& o : tick.obstacles) {
                const double extent = half_extent(o.belief.dimensions_m);
                const double req0 =
                    required_separation(0.0, p.d_min_m, p.own_accuracy, p.obstacle_accuracy,
                                        p.dp, extent, MpcsPolicy::Nominal);
                const Vec2 rel_pos = o.belief.state.position - tick.own_belief.state.position;
                const Vec2 rel_vel = o.belief.state.velocity() - own_vel;
                const auto check =
                    check_separation_rule(rel_pos, rel_vel, req0, slope, rule.horizon_s);
                if (!check.admissible && check.deficit > kMonitorSlack) {
                  acc.exceed(tick.index, check.deficit);
                }
              }
            }
            return acc.out;
          }};
}

}  // namespace detail

// Monitor for one predicate-bearing clause; informal clauses have none.
inline std::optional<ClauseMonitor> make_monitor(const Clause& clause) {
  if (!clause.predicate) return std::nullopt;
  if (const auto* b = std::get_if<StateErrorBound>(&*clause.predicate)) {
    return detail::make_state_error_monitor(clause, *b);
  }
  if (const auto* b = std::get_if<SeparationBound>(&*clause.predicate)) {
    return detail::make_separation_monitor(clause, *b);
  }
  if (const auto* b = std::get_if<TrackingBound>(&*clause.predicate)) {
    return detail::make_tracking_monitor(clause, *b);
  }
  if (const auto* b = std::get_if<ObstacleBehaviour>(&*clause.predicate)) {
    return detail::make_behaviour_monitor(clause, *b);
  }
  if (const auto* b = std::get_if<ConfigValid>(&*clause.predicate)) {
    return detail::make_config_monitor(clause, *b);
  }
  if (const auto* b = std::get_if<SafeSetpointRule>(&*clause.predicate)) {
    return detail::make_setpoint_monitor(clause, *b);
  }
  return std::nullopt;
}

struct MonitorSet {
  std::vector<ClauseMonitor> assumptions;
  std::vector<ClauseMonitor> guarantees;
};

// Monitors for verifying one component in its simulated environment: the
// component's own assumptions, the assumptions of the components providing
// them (the simulated environment must behave as those providers promised),
// and the guarantees of the component and its parent composite.
inline MonitorSet build_monitors(const SystemModel& model, const std::string& component_id) {
  const Component* component = model.find_component(component_id);
  if (!component) throw Error("component " + component_id + " not found");

  MonitorSet set;
  std::set<std::string> seen;
  auto add_assumption = [&](const Clause& c) {
    if (!seen.insert(c.id).second) return;
    if (auto m = make_monitor(c)) set.assumptions.push_back(std::move(*m));
  };

  const DischargeMap discharge = build_discharge_map(model);
  std::set<std::string> provider_components;
  for (const auto& a : component->contract.assumptions) {
    add_assumption(a);
    if (const auto* entry = discharge.find(a.id)) {
      if (entry->kind == DischargeKind::DischargedBy) {
        if (auto provider = model.find_clause(entry->provider)) {
          provider_components.insert(provider.component->id);
        }
      }
    }
  }
  for (const auto& pc : provider_components) {
    const Component* provider = model.find_component(pc);
    if (!provider) continue;
    for (const auto& a : provider->contract.assumptions) add_assumption(a);
  }

  for (const auto& g : component->contract.guarantees) {
    if (auto m = make_monitor(g)) set.guarantees.push_back(std::move(*m));
  }
  // The composite-level promise the component's responsibility rolls up to.
  if (component->id != model.composite.id) {
    for (const auto& g : model.composite.contract.guarantees) {
      if (auto m = make_monitor(g)) set.guarantees.push_back(std::move(*m));
    }
  }
  return set;
}

// ---------------------------------------------------------------------------
// Verdict
// ---------------------------------------------------------------------------

enum class VerdictClass { Pass, Falsified, Vacuous };

inline const char* to_string(VerdictClass v) {
  switch (v) {
    case VerdictClass::Pass: return "pass";
    case VerdictClass::Falsified: return "falsified";
    case VerdictClass::Vacuous: return "vacuous";
  }
  return "?";
}

struct ClauseOutcome {
  std::string clause_id;
  ClauseKind clause_kind = ClauseKind::Assumption;
  MonitorOutcome outcome;
};

struct ScenarioVerdict {
  std::string scenario_id;
  std::vector<ClauseOutcome> outcomes;
  VerdictClass classification = VerdictClass::Pass;
  std::vector<std::string> falsified_guarantees;
  std::vector<std::string> violated_assumptions;
  double min_separation_m = kInfSeparation;
  double margin_m = kInfSeparation;
};

// Assumption monitors are evaluated first; any violation makes the run
// vacuous and the guarantee outcomes moot (a broken environment cannot
// falsify the component). Only with every assumption intact can a guarantee
// violation count as falsification.
inline ScenarioVerdict classify_verdict(const Trace& trace, const MonitorSet& monitors) {
  if (trace.ticks.empty()) throw Error("cannot classify an empty trace");

  ScenarioVerdict verdict;
  verdict.scenario_id = trace.params.scenario_id;
  verdict.min_separation_m = trace.min_separation_m;
  verdict.margin_m = trace.min_margin_m;

  for (const auto& monitor : monitors.assumptions) {
    const MonitorOutcome out = monitor.evaluate(trace);
    verdict.outcomes.push_back({monitor.clause_id, ClauseKind::Assumption, out});
    if (out.status == MonitorStatus::Violated) {
      verdict.violated_assumptions.push_back(monitor.clause_id);
    }
  }
  for (const auto& monitor : monitors.guarantees) {
    const MonitorOutcome out = monitor.evaluate(trace);
    verdict.outcomes.push_back({monitor.clause_id, ClauseKind::Guarantee, out});
    if (out.status == MonitorStatus::Violated) {
      verdict.falsified_guarantees.push_back(monitor.clause_id);
    }
  }

  if (!verdict.violated_assumptions.empty()) {
    verdict.classification = VerdictClass::Vacuous;
    verdict.falsified_guarantees.clear();  // untested, not falsified
  } else if (!verdict.falsified_guarantees.empty()) {
    verdict.classification = VerdictClass::Falsified;
  } else {
    verdict.classification = VerdictClass::Pass;
  }
  return verdict;
}

}  // namespace ada
