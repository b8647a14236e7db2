#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ada/contract.hpp"
#include "ada/geometry.hpp"
#include "ada/model.hpp"
#include "ada/rng.hpp"

namespace ada {

inline constexpr double kInfSeparation = std::numeric_limits<double>::infinity();

struct VesselState {
  Vec2 position;       // east/north, metres
  double speed = 0.0;  // m/s, >= 0
  double heading = 0.0;  // rad in [0, 2pi)
  double course = 0.0;   // rad in [0, 2pi)

  Vec2 velocity() const { return course_unit(course) * speed; }
};

// Closest point of approach of two vessels under constant-velocity
// extrapolation, clamped to [0, horizon].
inline CpaResult predict_cpa(const VesselState& a, const VesselState& b, double horizon_s) {
  if (horizon_s <= 0.0) throw Error("predict_cpa: horizon must be > 0");
  return predict_cpa_tracks(a.position, a.velocity(), b.position, b.velocity(), horizon_s);
}

struct ManeuverSpec {
  bool enabled = false;      // constant velocity when false
  double turn_time_s = 0.0;  // instant course change at this time
  double new_course_rad = 0.0;
};

struct ObstacleTruth {
  std::string id;
  VesselState state;
  std::array<double, 2> dimensions_m = {0.0, 0.0};  // length, beam
  ManeuverSpec behaviour;
};

// Circumscribing circle of the length x beam rectangle; obstacle extent is
// folded into separation as this single radius.
inline double half_extent(const std::array<double, 2>& dimensions_m) {
  return 0.5 * std::hypot(dimensions_m[0], dimensions_m[1]);
}

// True separation: centre distance minus obstacle half extent, floored at 0.
inline double separation(const Vec2& own_pos, const Vec2& obstacle_pos,
                         const std::array<double, 2>& obstacle_dims) {
  return std::max(0.0, (obstacle_pos - own_pos).norm() - half_extent(obstacle_dims));
}

struct ObjectEstimate {
  VesselState state;
  std::array<double, 2> dimensions_m = {0.0, 0.0};

  // Constant-velocity prediction at lookahead t.
  Vec2 predict(double t) const { return state.position + state.velocity() * t; }
};

// What the situational-awareness component hands the decision logic: state
// estimates plus the accuracy it declares for them. The declared sets mirror
// the accuracy bounds promised in the SITAW guarantees, not the noise a
// particular scenario happens to inject.
struct BeliefState {
  ObjectEstimate own;
  std::vector<ObjectEstimate> obstacles;  // index-aligned with the truth list
  AccuracySet own_accuracy;
  AccuracySet obstacle_accuracy;
};

struct Setpoint {
  double cmd_mps = 0.0;
  std::string path_id;
};

// ---------------------------------------------------------------------------
// Scenario parameters
// ---------------------------------------------------------------------------

struct NoiseMode {
  bool violating = false;
  double scale = 1.0;  // multiplies every declared bound when violating
};

struct ObstacleSpec {
  std::string id;
  double range_m = 0.0;    // initial distance from path start
  double bearing_rad = 0.0;  // initial bearing from path start (cw from north)
  double speed_mps = 0.0;
  double course_rad = 0.0;
  std::array<double, 2> dimensions_m = {6.0, 2.5};
  ManeuverSpec behaviour;
};

struct DpParams {
  double tau_s = 2.0;          // first-order speed lag constant
  double eps_pos_m = 1.0;      // cross-track bound (TrackingBound eps_pos)
  double eps_speed_mps = 0.2;  // settled speed bound (TrackingBound eps_speed)
  double settle_time_s = 10.0;
  double disturbance_speed = 0.02;  // m/s^2 amplitude on the speed lag
  double disturbance_cross = 0.05;  // m/s amplitude of cross-track drift
};

enum class MpcsPolicy {
  Nominal,
  // Diagnostic mutant: plans against the bare safety distance, dropping every
  // accuracy inflation term. Exists so campaigns can demonstrate that the
  // harness detects a decision logic that ignores its declared dependencies.
  IgnoreAccuracy,
};

inline const char* to_string(MpcsPolicy p) {
  return p == MpcsPolicy::Nominal ? "nominal" : "ignore_accuracy";
}

struct ScenarioParams {
  std::string scenario_id = "scenario";
  std::string route_id;
  std::array<Vec2, 2> path;  // straight crossing: start, end
  double v_max_mps = 2.0;
  double dv_mps = 0.2;
  double d_min_m = 50.0;
  double duration_s = 300.0;
  double dt_s = 0.1;
  double control_period_s = 1.0;
  double horizon_s = 60.0;        // lookahead of the monitored setpoint rule
  double mpcs_window_s = -1.0;    // planning lookahead; < 0 means duration_s
  double mpcs_margin_m = 50.0;    // planner's private slack over the rule
  DpParams dp;
  AccuracySet own_accuracy;       // declared bounds (decision logic plans with these)
  AccuracySet obstacle_accuracy;  // declared bounds
  // Injected position-noise amplitudes; negative means "use the declared
  // bound". Campaigns sweep these across (0, declared].
  double own_pos_noise_m = -1.0;
  double obstacle_pos_noise_m = -1.0;
  NoiseMode noise_mode;
  MpcsPolicy mpcs_policy = MpcsPolicy::Nominal;
  std::vector<ObstacleSpec> obstacles;
  std::uint64_t seed = 0;

  Vec2 path_dir() const {
    const Vec2 d = path[1] - path[0];
    const double n = d.norm();
    return n > 0.0 ? d * (1.0 / n) : Vec2{1.0, 0.0};
  }
  double path_course() const {
    const Vec2 d = path_dir();
    return wrap_angle(std::atan2(d.east, d.north));
  }
  double path_length() const { return (path[1] - path[0]).norm(); }
};

inline std::vector<Finding> validate_scenario(const ScenarioParams& p) {
  std::vector<Finding> out;
  auto bad = [&](const std::string& msg) { out.push_back({"invalid scenario", p.scenario_id, msg}); };
  auto pos_finite = [&](double v, const char* name) {
    if (!std::isfinite(v) || v <= 0.0) bad(std::string(name) + " must be finite and > 0");
  };
  pos_finite(p.dt_s, "dt_s");
  pos_finite(p.d_min_m, "d_min_m");
  pos_finite(p.duration_s, "duration_s");
  pos_finite(p.v_max_mps, "v_max_mps");
  pos_finite(p.dv_mps, "dv_mps");
  pos_finite(p.control_period_s, "control_period_s");
  pos_finite(p.horizon_s, "horizon_s");
  pos_finite(p.dp.tau_s, "dp.tau_s");
  if (std::isfinite(p.dt_s) && std::isfinite(p.dp.tau_s) && p.dt_s >= p.dp.tau_s) {
    bad("dt_s must be smaller than the DP lag constant tau_s");
  }
  if (p.path_length() <= 0.0) bad("path endpoints must differ");
  if (p.noise_mode.violating && p.noise_mode.scale <= 1.0) {
    bad("violating noise_mode requires scale > 1");
  }
  for (const auto& o : p.obstacles) {
    if (o.range_m <= p.d_min_m) bad("obstacle " + o.id + " starts inside d_min");
    if (o.speed_mps < 0.0) bad("obstacle " + o.id + " speed must be >= 0");
    if (o.dimensions_m[0] <= 0.0 || o.dimensions_m[1] <= 0.0) {
      bad("obstacle " + o.id + " dimensions must be > 0");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// SITAW observation
// ---------------------------------------------------------------------------

namespace detail {

// Position error is drawn uniformly over a disk, so its Euclidean norm stays
// strictly below the amplitude by construction.
inline Vec2 disk_noise(Rng& rng, double amplitude) {
  const double angle = rng.uniform(0.0, kTwoPi);
  const double radius = amplitude * std::sqrt(rng.uniform());
  return {radius * std::sin(angle), radius * std::cos(angle)};
}

struct NoiseAmplitudes {
  double pos, speed, course, dim;
};

inline NoiseAmplitudes amplitudes_for(const AccuracySet& declared, double pos_override,
                                      const NoiseMode& mode) {
  if (mode.violating) {
    return {declared.pos_m * mode.scale, declared.speed_mps * mode.scale,
            declared.course_rad * mode.scale, declared.dim_m * mode.scale};
  }
  const double pos = pos_override >= 0.0 ? pos_override : declared.pos_m;
  return {pos, declared.speed_mps, declared.course_rad, declared.dim_m};
}

inline VesselState observe_state(const VesselState& truth, const NoiseAmplitudes& amp, Rng& rng) {
  VesselState est = truth;
  est.position = truth.position + disk_noise(rng, amp.pos);
  est.speed = std::max(0.0, truth.speed + rng.jitter(amp.speed));
  est.heading = wrap_angle(truth.heading + rng.jitter(amp.course));
  est.course = wrap_angle(truth.course + rng.jitter(amp.course));
  return est;
}

}  // namespace detail

// One observation of the world. In bounded mode every estimate stays within
// the declared accuracy by construction; in violating mode the injected noise
// exceeds the declared bounds with positive probability. The rng must be the
// scenario stream forked for this tick.
inline BeliefState sitaw_observe(const VesselState& own_truth,
                                 const std::vector<ObstacleTruth>& obstacles,
                                 const ScenarioParams& p, Rng tick_rng) {
  BeliefState belief;
  belief.own_accuracy = p.own_accuracy;
  belief.obstacle_accuracy = p.obstacle_accuracy;

  const auto own_amp = detail::amplitudes_for(p.own_accuracy, p.own_pos_noise_m, p.noise_mode);
  Rng own_rng = tick_rng.fork(0);
  belief.own.state = detail::observe_state(own_truth, own_amp, own_rng);

  const auto obs_amp =
      detail::amplitudes_for(p.obstacle_accuracy, p.obstacle_pos_noise_m, p.noise_mode);
  for (std::size_t j = 0; j < obstacles.size(); ++j) {
    Rng obs_rng = tick_rng.fork(j + 1);
    ObjectEstimate est;
    est.state = detail::observe_state(obstacles[j].state, obs_amp, obs_rng);
    est.dimensions_m = {
        std::max(1e-6, obstacles[j].dimensions_m[0] + obs_rng.jitter(obs_amp.dim)),
        std::max(1e-6, obstacles[j].dimensions_m[1] + obs_rng.jitter(obs_amp.dim))};
    belief.obstacles.push_back(est);
  }
  return belief;
}

// ---------------------------------------------------------------------------
// MPCS decision rule
// ---------------------------------------------------------------------------

// Separation the planner must keep at lookahead t against one obstacle:
// the configured minimum inflated by the declared position accuracies, the
// actuation tracking bound, the speed-accuracy drift over the lookahead, and
// the obstacle's believed extent. The single place the inflation is defined.
inline double required_separation(double t, double d_min, const AccuracySet& own,
                                  const AccuracySet& obstacle, const DpParams& dp,
                                  double obstacle_half_extent, MpcsPolicy policy) {
  if (policy == MpcsPolicy::IgnoreAccuracy) return d_min + obstacle_half_extent;
  return d_min + own.pos_m + obstacle.pos_m + dp.eps_pos_m +
         (own.speed_mps + obstacle.speed_mps) * t + obstacle_half_extent;
}

// Exact admissibility of one relative track against the linear requirement
// req(t) = req0 + slope*t over [0, horizon]. With req >= 0 the condition
// sep(t) >= req(t) is equivalent to g(t) = sep(t)^2 - req(t)^2 >= 0, and g is
// a parabola in t, so its minimum lies at an endpoint or its vertex. No
// lookahead sampling, no dips missed between samples.
struct SeparationRuleCheck {
  bool admissible = true;
  double t_worst = 0.0;   // instant of the binding violation when inadmissible
  double deficit = 0.0;   // req - sep at that instant
};

inline SeparationRuleCheck check_separation_rule(const Vec2& rel_pos, const Vec2& rel_vel,
                                                 double req0, double slope, double horizon_s) {
  SeparationRuleCheck out;
  auto consider = [&](double t) {
    const double deficit = (req0 + slope * t) - (rel_pos + rel_vel * t).norm();
    if (deficit > out.deficit) {
      out.deficit = deficit;
      out.t_worst = t;
      out.admissible = false;
    }
  };
  consider(0.0);
  consider(horizon_s);
  const double a = rel_vel.dot(rel_vel) - slope * slope;
  const double b = 2.0 * (rel_pos.dot(rel_vel) - req0 * slope);
  if (a > 0.0) {
    const double t_vertex = -b / (2.0 * a);
    if (t_vertex > 0.0 && t_vertex < horizon_s) consider(t_vertex);
  }
  return out;
}

struct MpcsConfig {
  double d_min_m = 50.0;
  double v_max_mps = 2.0;
  double dv_mps = 0.2;
  // Planning lookahead. Covers the whole transit so that slow crossing
  // traffic constrains the decision from the start instead of surfacing at a
  // rolling-horizon edge when the ferry is already committed.
  double window_s = 300.0;
  // Private slack on top of the required separation. Beliefs are resampled
  // every tick, so a plan that tracked the bare requirement would be pushed
  // over it by estimate jitter alone; the margin keeps issued setpoints clear
  // of the monitored rule.
  double margin_m = 50.0;
  Vec2 path_dir{1.0, 0.0};
  std::string route_id;
  MpcsPolicy policy = MpcsPolicy::Nominal;
};

namespace detail {

inline bool setpoint_admissible(double v, const BeliefState& belief, const MpcsConfig& cfg,
                                const DpParams& dp) {
  const Vec2 own_vel = cfg.path_dir * v;
  const bool nominal = cfg.policy == MpcsPolicy::Nominal;
  const double slope =
      nominal ? belief.own_accuracy.speed_mps + belief.obstacle_accuracy.speed_mps : 0.0;
  for (const auto& obstacle : belief.obstacles) {
    const double extent = half_extent(obstacle.dimensions_m);
    const double req0 = required_separation(0.0, cfg.d_min_m, belief.own_accuracy,
                                            belief.obstacle_accuracy, dp, extent, cfg.policy) +
                        (nominal ? cfg.margin_m : 0.0);
    const Vec2 rel_pos = obstacle.state.position - belief.own.state.position;
    const Vec2 rel_vel = obstacle.state.velocity() - own_vel;
    if (!check_separation_rule(rel_pos, rel_vel, req0, slope, cfg.window_s).admissible) {
      return false;
    }
  }
  return true;
}

}  // namespace detail

// Grid search over candidate speeds {0, dv, 2dv, ...} up to v_max: a
// candidate is admissible when the believed separation to every obstacle
// stays above required_separation over the whole lookahead horizon (checked
// in closed form). Returns the largest admissible candidate, falling back
// to 0.
inline Setpoint mpcs_decide(const BeliefState& belief, const MpcsConfig& cfg, const DpParams& dp) {
  const int steps = static_cast<int>(std::floor(cfg.v_max_mps / cfg.dv_mps + 1e-9));
  for (int k = steps; k >= 1; --k) {
    const double v = k * cfg.dv_mps;
    if (detail::setpoint_admissible(v, belief, cfg, dp)) return {v, cfg.route_id};
  }
  return {0.0, cfg.route_id};
}

// ---------------------------------------------------------------------------
// DP actuation
// ---------------------------------------------------------------------------

struct PathFrame {
  Vec2 origin;
  Vec2 dir;     // unit along-track
  Vec2 normal;  // unit cross-track (dir rotated +90deg)
  double course = 0.0;

  static PathFrame from(const ScenarioParams& p) {
    const Vec2 dir = p.path_dir();
    return {p.path[0], dir, Vec2{dir.north, -dir.east}, p.path_course()};
  }
};

// One integration step of the actuation model: first-order speed lag toward
// the command plus a bounded speed disturbance, forward motion along the
// path, and a bounded cross-track drift projected back inside the declared
// eps_pos corridor. Heading stays on the path course; the vessel does not
// turn to avoid.
inline VesselState dp_step(const VesselState& state, const Setpoint& sp, const PathFrame& frame,
                           const DpParams& dp, double dt, Rng& rng) {
  const Vec2 offset = state.position - frame.origin;
  const double along = offset.dot(frame.dir);
  const double cross = offset.dot(frame.normal);

  double v = state.speed + dt * (sp.cmd_mps - state.speed) / dp.tau_s +
             dt * rng.jitter(dp.disturbance_speed);
  v = std::max(0.0, v);

  const double new_along = along + dt * v;
  double new_cross = cross + dt * rng.jitter(dp.disturbance_cross);
  new_cross = std::clamp(new_cross, -dp.eps_pos_m, dp.eps_pos_m);

  VesselState next;
  next.position = frame.origin + frame.dir * new_along + frame.normal * new_cross;
  next.speed = v;
  next.heading = frame.course;
  next.course = frame.course;
  return next;
}

// ---------------------------------------------------------------------------
// Scenario execution
// ---------------------------------------------------------------------------

struct ObstacleTickRecord {
  VesselState truth;
  std::array<double, 2> true_dimensions_m;
  ObjectEstimate belief;
  double separation_m = 0.0;       // true separation, extent subtracted
  double believed_margin_m = 0.0;  // believed separation minus required at t=0
};

struct TickRecord {
  int index = 0;
  double t = 0.0;
  VesselState own_truth;
  ObjectEstimate own_belief;
  Setpoint setpoint;  // command active during this tick
  std::vector<ObstacleTickRecord> obstacles;
  double sep_min_m = kInfSeparation;
  double margin_m = kInfSeparation;  // sep_min - d_min
};

struct Trace {
  ScenarioParams params;
  std::vector<TickRecord> ticks;
  double min_separation_m = kInfSeparation;
  double min_margin_m = kInfSeparation;
  double final_progress_m = 0.0;  // along-track distance covered
};

// Deterministic fixed-step simulation of one transit: observe, decide at the
// control period, actuate. A pure function of the parameters; the rng is
// derived from (seed, tick, object) only.
inline Trace run_scenario(const ScenarioParams& p) {
  {
    const auto findings = validate_scenario(p);
    if (!findings.empty()) {
      std::string msg = "scenario validation failed:";
      for (const auto& f : findings) msg += "\n  " + f.to_string();
      throw Error(msg);
    }
  }

  Trace trace;
  trace.params = p;

  const PathFrame frame = PathFrame::from(p);
  const int ticks = static_cast<int>(std::llround(p.duration_s / p.dt_s));
  const int control_every = std::max(1, static_cast<int>(std::llround(p.control_period_s / p.dt_s)));

  MpcsConfig cfg;
  cfg.d_min_m = p.d_min_m;
  cfg.v_max_mps = p.v_max_mps;
  cfg.dv_mps = p.dv_mps;
  // The plan must cover at least the monitored lookahead; otherwise an
  // issued setpoint could violate the rule just beyond the planning window.
  cfg.window_s = std::max(p.mpcs_window_s > 0.0 ? p.mpcs_window_s : p.duration_s, p.horizon_s);
  cfg.margin_m = p.mpcs_margin_m;
  cfg.path_dir = frame.dir;
  cfg.route_id = p.route_id;
  cfg.policy = p.mpcs_policy;

  VesselState own;
  own.position = p.path[0];
  own.speed = 0.0;
  own.heading = frame.course;
  own.course = frame.course;

  std::vector<ObstacleTruth> obstacles;
  for (const auto& spec : p.obstacles) {
    ObstacleTruth o;
    o.id = spec.id;
    o.state.position = p.path[0] + course_unit(spec.bearing_rad) * spec.range_m;
    o.state.speed = spec.speed_mps;
    o.state.heading = wrap_angle(spec.course_rad);
    o.state.course = wrap_angle(spec.course_rad);
    o.dimensions_m = spec.dimensions_m;
    o.behaviour = spec.behaviour;
    obstacles.push_back(o);
  }
  std::vector<bool> turned(obstacles.size(), false);

  const Rng base(p.seed);
  Setpoint setpoint{0.0, p.route_id};

  trace.ticks.reserve(static_cast<std::size_t>(ticks));
  for (int i = 0; i < ticks; ++i) {
    const double t = i * p.dt_s;
    const Rng tick_rng = base.fork(static_cast<std::uint64_t>(i));

    const BeliefState belief = sitaw_observe(own, obstacles, p, tick_rng.fork(1));
    if (i % control_every == 0) setpoint = mpcs_decide(belief, cfg, p.dp);

    TickRecord rec;
    rec.index = i;
    rec.t = t;
    rec.own_truth = own;
    rec.own_belief.state = belief.own.state;
    rec.setpoint = setpoint;
    for (std::size_t j = 0; j < obstacles.size(); ++j) {
      ObstacleTickRecord orec;
      orec.truth = obstacles[j].state;
      orec.true_dimensions_m = obstacles[j].dimensions_m;
      orec.belief = belief.obstacles[j];
      orec.separation_m = separation(own.position, obstacles[j].state.position,
                                     obstacles[j].dimensions_m);
      const double believed_sep =
          (belief.obstacles[j].state.position - belief.own.state.position).norm();
      orec.believed_margin_m =
          believed_sep - required_separation(0.0, p.d_min_m, p.own_accuracy, p.obstacle_accuracy,
                                             p.dp, half_extent(belief.obstacles[j].dimensions_m),
                                             p.mpcs_policy);
      rec.sep_min_m = std::min(rec.sep_min_m, orec.separation_m);
      rec.obstacles.push_back(orec);
    }
    rec.margin_m = rec.sep_min_m - p.d_min_m;
    if (rec.sep_min_m == kInfSeparation) rec.margin_m = kInfSeparation;
    trace.min_separation_m = std::min(trace.min_separation_m, rec.sep_min_m);
    trace.ticks.push_back(std::move(rec));

    // Advance truth to t + dt.
    for (std::size_t j = 0; j < obstacles.size(); ++j) {
      auto& o = obstacles[j];
      if (o.behaviour.enabled && !turned[j] && t + p.dt_s >= o.behaviour.turn_time_s) {
        o.state.course = wrap_angle(o.behaviour.new_course_rad);
        o.state.heading = o.state.course;
        turned[j] = true;
      }
      o.state.position = o.state.position + o.state.velocity() * p.dt_s;
    }
    Rng dp_rng = tick_rng.fork(0);
    own = dp_step(own, setpoint, frame, p.dp, p.dt_s, dp_rng);
  }

  trace.min_margin_m = trace.min_separation_m == kInfSeparation
                           ? kInfSeparation
                           : trace.min_separation_m - p.d_min_m;
  trace.final_progress_m = (own.position - frame.origin).dot(frame.dir);
  return trace;
}

}  // namespace ada
