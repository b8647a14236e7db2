#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "ada/identify.hpp"
#include "ada/model.hpp"

namespace oracle {

ada::CpaResult cpa_sweep(const ada::Vec2& pos_a, const ada::Vec2& vel_a, const ada::Vec2& pos_b,
                         const ada::Vec2& vel_b, double horizon_s, double dt) {
  ada::CpaResult best{0.0, (pos_b - pos_a).norm()};
  for (double t = 0.0; t <= horizon_s; t += dt) {
    const double d = ((pos_b + vel_b * t) - (pos_a + vel_a * t)).norm();
    if (d < best.d_cpa) best = {t, d};
  }
  return best;
}

namespace {

double deficit_at(const ada::Vec2& rel_pos, const ada::Vec2& rel_vel, double req0, double slope,
                  double t) {
  return (req0 + slope * t) - (rel_pos + rel_vel * t).norm();
}

}  // namespace

double max_deficit_sweep(const ada::Vec2& rel_pos, const ada::Vec2& rel_vel, double req0,
                         double slope, double horizon_s, double dt) {
  double best_t = 0.0;
  double best = deficit_at(rel_pos, rel_vel, req0, slope, 0.0);
  for (double t = dt; t <= horizon_s + 1e-12; t += dt) {
    const double d = deficit_at(rel_pos, rel_vel, req0, slope, std::min(t, horizon_s));
    if (d > best) {
      best = d;
      best_t = std::min(t, horizon_s);
    }
  }
  // Ternary refinement around the sampled maximum; the deficit is unimodal
  // within one sampling window.
  double lo = std::max(0.0, best_t - dt);
  double hi = std::min(horizon_s, best_t + dt);
  for (int i = 0; i < 80; ++i) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (deficit_at(rel_pos, rel_vel, req0, slope, m1) <
        deficit_at(rel_pos, rel_vel, req0, slope, m2)) {
      lo = m1;
    } else {
      hi = m2;
    }
  }
  return std::max(best, deficit_at(rel_pos, rel_vel, req0, slope, 0.5 * (lo + hi)));
}

double mpcs_choice_sweep(const ada::BeliefState& belief, const ada::MpcsConfig& cfg,
                         const ada::DpParams& dp, double dt) {
  const bool nominal = cfg.policy == ada::MpcsPolicy::Nominal;
  const int steps = static_cast<int>(std::floor(cfg.v_max_mps / cfg.dv_mps + 1e-9));
  for (int k = steps; k >= 1; --k) {
    const double v = k * cfg.dv_mps;
    bool admissible = true;
    for (const auto& obstacle : belief.obstacles) {
      const double extent = ada::half_extent(obstacle.dimensions_m);
      const double req0 =
          ada::required_separation(0.0, cfg.d_min_m, belief.own_accuracy,
                                   belief.obstacle_accuracy, dp, extent, cfg.policy) +
          (nominal ? cfg.margin_m : 0.0);
      const double slope = nominal ? belief.own_accuracy.speed_mps +
                                         belief.obstacle_accuracy.speed_mps
                                   : 0.0;
      const ada::Vec2 rel_pos = obstacle.state.position - belief.own.state.position;
      const ada::Vec2 rel_vel = obstacle.state.velocity() - cfg.path_dir * v;
      if (max_deficit_sweep(rel_pos, rel_vel, req0, slope, cfg.window_s, dt) > 0.0) {
        admissible = false;
        break;
      }
    }
    if (admissible) return v;
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Monitor re-evaluations
// ---------------------------------------------------------------------------

namespace {

struct Check {
  Outcome out;
  void applicable() {
    if (out.status == ada::MonitorStatus::NotApplicable) out.status = ada::MonitorStatus::Held;
  }
  void violated(int tick) {
    if (out.status != ada::MonitorStatus::Violated) {
      out.status = ada::MonitorStatus::Violated;
      out.first_tick = tick;
    }
  }
};

}  // namespace

Outcome state_error_recheck(const ada::Trace& trace, const ada::StateErrorBound& bound) {
  Check check;
  const double slack = 1e-9;
  for (const auto& tick : trace.ticks) {
    if (bound.subject == ada::Subject::Own) {
      if (bound.signal == ada::Signal::DimensionsM) continue;
      check.applicable();
      double err = 0.0;
      switch (bound.signal) {
        case ada::Signal::PositionM:
          err = (tick.own_belief.state.position - tick.own_truth.position).norm();
          break;
        case ada::Signal::SpeedMps:
          err = std::fabs(tick.own_belief.state.speed - tick.own_truth.speed);
          break;
        case ada::Signal::HeadingRad:
          err = ada::angular_distance(tick.own_belief.state.heading, tick.own_truth.heading);
          break;
        case ada::Signal::CourseRad:
          err = ada::angular_distance(tick.own_belief.state.course, tick.own_truth.course);
          break;
        default:
          break;
      }
      if (err > bound.epsilon + slack) check.violated(tick.index);
    } else {
      for (const auto& o : tick.obstacles) {
        check.applicable();
        double err = 0.0;
        switch (bound.signal) {
          case ada::Signal::PositionM:
            err = (o.belief.state.position - o.truth.position).norm();
            break;
          case ada::Signal::SpeedMps:
            err = std::fabs(o.belief.state.speed - o.truth.speed);
            break;
          case ada::Signal::HeadingRad:
            err = ada::angular_distance(o.belief.state.heading, o.truth.heading);
            break;
          case ada::Signal::CourseRad:
            err = ada::angular_distance(o.belief.state.course, o.truth.course);
            break;
          case ada::Signal::DimensionsM:
            err = std::max(std::fabs(o.belief.dimensions_m[0] - o.true_dimensions_m[0]),
                           std::fabs(o.belief.dimensions_m[1] - o.true_dimensions_m[1]));
            break;
        }
        if (err > bound.epsilon + slack) check.violated(tick.index);
      }
    }
  }
  return check.out;
}

Outcome separation_recheck(const ada::Trace& trace, const ada::SeparationBound& bound) {
  Check check;
  for (const auto& tick : trace.ticks) {
    for (const auto& o : tick.obstacles) {
      check.applicable();
      const double centre = (o.truth.position - tick.own_truth.position).norm();
      const double sep = std::max(0.0, centre - 0.5 * std::hypot(o.true_dimensions_m[0],
                                                                 o.true_dimensions_m[1]));
      if (sep < bound.d_min) check.violated(tick.index);
    }
  }
  return check.out;
}

Outcome tracking_recheck(const ada::Trace& trace, const ada::TrackingBound& bound) {
  Check check;
  const auto& p = trace.params;
  const ada::Vec2 dir = p.path_dir();
  const ada::Vec2 normal{dir.north, -dir.east};
  double held_since = 0.0;
  double held_cmd = trace.ticks.empty() ? 0.0 : trace.ticks.front().setpoint.cmd_mps;
  for (const auto& tick : trace.ticks) {
    check.applicable();
    if (std::fabs((tick.own_truth.position - p.path[0]).dot(normal)) > bound.eps_pos + 1e-9) {
      check.violated(tick.index);
    }
    if (tick.setpoint.cmd_mps != held_cmd) {
      held_cmd = tick.setpoint.cmd_mps;
      held_since = tick.t;
    }
    if (tick.t - held_since >= bound.settle_time &&
        std::fabs(tick.own_truth.speed - held_cmd) > bound.eps_speed + 1e-9) {
      check.violated(tick.index);
    }
  }
  return check.out;
}

Outcome behaviour_recheck(const ada::Trace& trace, const ada::ObstacleBehaviour& bound) {
  Check check;
  for (std::size_t i = 0; i < trace.ticks.size(); ++i) {
    const auto& tick = trace.ticks[i];
    for (std::size_t j = 0; j < tick.obstacles.size(); ++j) {
      check.applicable();
      if (tick.obstacles[j].truth.speed > bound.max_speed + 1e-9) check.violated(tick.index);
      if (i + 1 < trace.ticks.size() && j < trace.ticks[i + 1].obstacles.size()) {
        const auto& next = trace.ticks[i + 1].obstacles[j].truth;
        const double turn = ada::angular_distance(next.course, tick.obstacles[j].truth.course);
        if (turn > bound.max_turn_rate * trace.params.dt_s + 1e-9) check.violated(tick.index);
        if (std::fabs(next.speed - tick.obstacles[j].truth.speed) > 1e-9) {
          check.violated(tick.index);
        }
      }
    }
  }
  return check.out;
}

Outcome config_recheck(const ada::Trace& trace, const ada::ConfigValid& bound) {
  Outcome out;
  out.status = ada::MonitorStatus::Held;
  if (trace.params.route_id != bound.route_id || trace.params.d_min_m != bound.d_min) {
    out.status = ada::MonitorStatus::Violated;
    out.first_tick = 0;
  }
  return out;
}

Outcome setpoint_recheck(const ada::Trace& trace, const ada::SafeSetpointRule& rule) {
  Check check;
  const auto& p = trace.params;
  const int control_every = std::max(1, static_cast<int>(std::llround(p.control_period_s / p.dt_s)));
  const ada::Vec2 dir = p.path_dir();
  const double slope = p.own_accuracy.speed_mps + p.obstacle_accuracy.speed_mps;
  for (const auto& tick : trace.ticks) {
    if (tick.index % control_every != 0) continue;
    if (tick.obstacles.empty()) continue;
    check.applicable();
    for (const auto& o : tick.obstacles) {
      const double extent = ada::half_extent(o.belief.dimensions_m);
      const double req0 = ada::required_separation(0.0, p.d_min_m, p.own_accuracy,
                                                   p.obstacle_accuracy, p.dp, extent,
                                                   ada::MpcsPolicy::Nominal);
      const ada::Vec2 rel_pos = o.belief.state.position - tick.own_belief.state.position;
      const ada::Vec2 rel_vel = o.belief.state.velocity() - dir * tick.setpoint.cmd_mps;
      if (max_deficit_sweep(rel_pos, rel_vel, req0, slope, rule.horizon_s, 0.01) > 1e-9) {
        check.violated(tick.index);
      }
    }
  }
  return check.out;
}

// ---------------------------------------------------------------------------
// Random generators
// ---------------------------------------------------------------------------

ada::PredicateSpec random_predicate(ada::Rng& rng) {
  switch (rng.next_bits() % 6) {
    case 0: {
      const ada::Signal signals[] = {ada::Signal::PositionM, ada::Signal::SpeedMps,
                                     ada::Signal::HeadingRad, ada::Signal::CourseRad,
                                     ada::Signal::DimensionsM};
      return ada::StateErrorBound{signals[rng.next_bits() % 5],
                                  rng.next_bits() % 2 ? ada::Subject::Own : ada::Subject::Obstacle,
                                  rng.uniform(0.0, 10.0)};
    }
    case 1:
      return ada::SeparationBound{rng.uniform(1.0, 200.0)};
    case 2:
      return ada::TrackingBound{rng.uniform(0.0, 5.0), rng.uniform(0.0, 1.0),
                                rng.uniform(0.0, 30.0)};
    case 3:
      return ada::ConfigValid{rng.next_bits() % 2 ? "route-a" : "route-b",
                              rng.uniform(10.0, 100.0)};
    case 4:
      return ada::SafeSetpointRule{rng.uniform(1.0, 120.0)};
    default:
      return ada::ObstacleBehaviour{ada::BehaviourModel::ConstantVelocity, rng.uniform(0.0, 6.0),
                                    rng.uniform(0.0, 0.5)};
  }
}

ada::PredicateSpec random_predicate_same_variant(const ada::PredicateSpec& like, ada::Rng& rng) {
  if (const auto* s = std::get_if<ada::StateErrorBound>(&like)) {
    return ada::StateErrorBound{s->signal, s->subject, rng.uniform(0.0, 10.0)};
  }
  if (std::holds_alternative<ada::SeparationBound>(like)) {
    return ada::SeparationBound{rng.uniform(1.0, 200.0)};
  }
  if (std::holds_alternative<ada::TrackingBound>(like)) {
    return ada::TrackingBound{rng.uniform(0.0, 5.0), rng.uniform(0.0, 1.0),
                              rng.uniform(0.0, 30.0)};
  }
  if (const auto* c = std::get_if<ada::ConfigValid>(&like)) {
    return ada::ConfigValid{c->route_id, rng.next_bits() % 2 ? c->d_min : rng.uniform(10.0, 100.0)};
  }
  if (std::holds_alternative<ada::SafeSetpointRule>(like)) {
    return ada::SafeSetpointRule{rng.uniform(1.0, 120.0)};
  }
  return ada::ObstacleBehaviour{ada::BehaviourModel::ConstantVelocity, rng.uniform(0.0, 6.0),
                                rng.uniform(0.0, 0.5)};
}

ada::BeliefState random_crossing_belief(ada::Rng& rng, int max_obstacles) {
  ada::BeliefState belief;
  belief.own.state.position = {rng.uniform(-2.0, 2.0), rng.uniform(-1.0, 1.0)};
  belief.own.state.speed = rng.uniform(0.0, 2.0);
  belief.own.state.course = ada::kPi / 2.0;
  belief.own.state.heading = belief.own.state.course;
  belief.own_accuracy = {2.0, 0.1, 0.02, 0.0};
  belief.obstacle_accuracy = {5.0, 0.3, 0.05, 0.5};
  const int count = 1 + static_cast<int>(rng.next_bits() % static_cast<std::uint64_t>(max_obstacles));
  for (int i = 0; i < count; ++i) {
    ada::ObjectEstimate est;
    const double range = rng.uniform(62.0, 320.0);
    const double bearing = rng.uniform(0.0, ada::kTwoPi);
    est.state.position = belief.own.state.position + ada::course_unit(bearing) * range;
    est.state.speed = rng.uniform(0.0, 3.0);
    est.state.course = rng.uniform(0.0, ada::kTwoPi);
    est.state.heading = est.state.course;
    est.dimensions_m = {rng.uniform(2.0, 10.0), rng.uniform(1.0, 4.0)};
    belief.obstacles.push_back(est);
  }
  return belief;
}

// ---------------------------------------------------------------------------
// Property suites
// ---------------------------------------------------------------------------

namespace {

ada::Clause guarantee_of(const ada::PredicateSpec& p, const std::string& id) {
  ada::Clause c;
  c.id = id;
  c.kind = ada::ClauseKind::Guarantee;
  c.predicate = p;
  return c;
}

ada::Clause assumption_of(const ada::PredicateSpec& p, const std::string& id) {
  ada::Clause c;
  c.id = id;
  c.kind = ada::ClauseKind::Assumption;
  c.predicate = p;
  return c;
}

// Loosen a predicate: the returned spec demands no more than the input.
ada::PredicateSpec weakened(const ada::PredicateSpec& p, double amount) {
  if (const auto* s = std::get_if<ada::StateErrorBound>(&p)) {
    return ada::StateErrorBound{s->signal, s->subject, s->epsilon + amount};
  }
  if (const auto* s = std::get_if<ada::SeparationBound>(&p)) {
    return ada::SeparationBound{std::max(0.5, s->d_min - amount)};
  }
  if (const auto* t = std::get_if<ada::TrackingBound>(&p)) {
    return ada::TrackingBound{t->eps_pos + amount, t->eps_speed + amount,
                              t->settle_time + amount};
  }
  if (const auto* r = std::get_if<ada::SafeSetpointRule>(&p)) {
    return ada::SafeSetpointRule{std::max(0.1, r->horizon_s - amount)};
  }
  if (const auto* b = std::get_if<ada::ObstacleBehaviour>(&p)) {
    return ada::ObstacleBehaviour{b->model, b->max_speed + amount, b->max_turn_rate + amount};
  }
  return p;  // ConfigValid has no order to weaken along
}

}  // namespace

int entails_reflexivity_failures(int n, std::uint64_t seed) {
  ada::Rng rng(seed);
  int failures = 0;
  for (int i = 0; i < n; ++i) {
    const auto p = random_predicate(rng);
    if (!ada::entails(guarantee_of(p, "X.G1"), assumption_of(p, "Y.A1"))) failures++;
  }
  return failures;
}

int entails_transitivity_failures(int n, std::uint64_t seed) {
  ada::Rng rng(seed);
  int failures = 0;
  for (int i = 0; i < n; ++i) {
    const auto a = random_predicate(rng);
    const auto b = random_predicate_same_variant(a, rng);
    const auto c = random_predicate_same_variant(a, rng);
    const bool ab = ada::predicate_entails(a, b);
    const bool bc = ada::predicate_entails(b, c);
    if (ab && bc && !ada::predicate_entails(a, c)) failures++;
  }
  return failures;
}

int entails_antisymmetry_failures(int n, std::uint64_t seed) {
  ada::Rng rng(seed);
  int failures = 0;
  for (int i = 0; i < n; ++i) {
    const ada::Signal signals[] = {ada::Signal::PositionM, ada::Signal::SpeedMps,
                                   ada::Signal::HeadingRad, ada::Signal::CourseRad,
                                   ada::Signal::DimensionsM};
    const ada::Signal signal = signals[rng.next_bits() % 5];
    const ada::Subject subject =
        rng.next_bits() % 2 ? ada::Subject::Own : ada::Subject::Obstacle;
    const ada::StateErrorBound a{signal, subject, rng.uniform(0.0, 10.0)};
    const ada::StateErrorBound b{signal, subject,
                                 rng.next_bits() % 4 == 0 ? a.epsilon : rng.uniform(0.0, 10.0)};
    const bool ab = ada::predicate_entails(a, b);
    const bool ba = ada::predicate_entails(b, a);
    if (ab && ba && a.epsilon != b.epsilon) failures++;
    if (a.epsilon == b.epsilon && !(ab && ba)) failures++;
  }
  return failures;
}

int entails_monotonicity_failures(int n, std::uint64_t seed) {
  ada::Rng rng(seed);
  int failures = 0;
  for (int i = 0; i < n; ++i) {
    const auto provider = random_predicate(rng);
    const auto consumer = random_predicate_same_variant(provider, rng);
    if (ada::predicate_entails(provider, consumer)) continue;  // already compatible
    // Weakening an incompatible provider must never make it compatible.
    const auto weaker = weakened(provider, rng.uniform(0.0, 5.0));
    if (ada::predicate_entails(weaker, consumer)) failures++;
  }
  return failures;
}

int stub_mapping_failures() {
  using ada::ClauseKind;
  using ada::StubKind;

  ada::SystemModel model;
  model.composite.id = "Sys";
  model.composite.kind = ada::ComponentKind::Composite;
  {
    ada::Clause g;
    g.id = "Sys.G1";
    g.kind = ClauseKind::Guarantee;
    g.text = "top guarantee";
    model.composite.contract.guarantees.push_back(g);
  }
  ada::Component decision;
  decision.id = "Dec";
  decision.kind = ada::ComponentKind::Decision;
  {
    ada::Clause g;
    g.id = "Dec.G1";
    g.kind = ClauseKind::Guarantee;
    decision.contract.guarantees.push_back(g);
  }
  ada::Component sitaw;
  sitaw.id = "Bel";
  sitaw.kind = ada::ComponentKind::Sitaw;
  {
    ada::Clause g;
    g.id = "Bel.G1";
    g.kind = ClauseKind::Guarantee;
    sitaw.contract.guarantees.push_back(g);
  }
  ada::Component action;
  action.id = "Act";
  action.kind = ada::ComponentKind::Action;
  {
    ada::Clause g;
    g.id = "Act.G1";
    g.kind = ClauseKind::Guarantee;
    action.contract.guarantees.push_back(g);
  }
  model.composite.children = {decision, sitaw, action};

  int failures = 0;
  auto cf = [](int rs) {
    ada::CausalFactorRecord r;
    r.id = "cf";
    r.scenario = "scenario text";
    r.rs_type = rs;
    r.target_decision = "Dec";
    return r;
  };

  {  // type 1: one Decision assumption stub
    const auto stubs = ada::derive_clause_stubs(cf(1), model);
    if (stubs.size() != 1 || stubs[0].kind != StubKind::AssumptionStub ||
        stubs[0].target_component != "Dec" ||
        stubs[0].text.find("scenario text") == std::string::npos) {
      failures++;
    }
  }
  {  // type 2: marker only
    const auto stubs = ada::derive_clause_stubs(cf(2), model);
    if (stubs.size() != 1 || stubs[0].kind != StubKind::SubIdentificationMarker ||
        stubs[0].text.find("Dec") == std::string::npos) {
      failures++;
    }
  }
  {  // type 3: Decision assumption + SITAW guarantee
    const auto stubs = ada::derive_clause_stubs(cf(3), model);
    if (stubs.size() != 2 || stubs[0].kind != StubKind::AssumptionStub ||
        stubs[0].target_component != "Dec" || stubs[1].kind != StubKind::GuaranteeStub ||
        stubs[1].target_component != "Bel") {
      failures++;
    }
  }
  {  // type 4: Decision assumption + Action guarantee + marker
    const auto stubs = ada::derive_clause_stubs(cf(4), model);
    if (stubs.size() != 3 || stubs[0].kind != StubKind::AssumptionStub ||
        stubs[1].kind != StubKind::GuaranteeStub || stubs[1].target_component != "Act" ||
        stubs[2].kind != StubKind::SubIdentificationMarker ||
        stubs[2].text.find("Act") == std::string::npos) {
      failures++;
    }
  }
  return failures;
}

}  // namespace oracle
