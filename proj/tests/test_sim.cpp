#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "ada/sim.hpp"
#include "ada/sim_io.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace ada;

namespace {

VesselState vessel(Vec2 pos, double speed, double course) {
  VesselState s;
  s.position = pos;
  s.speed = speed;
  s.course = wrap_angle(course);
  s.heading = s.course;
  return s;
}

}  // namespace

TEST_CASE("predict_cpa: symmetric head-on meets at half time, zero distance") {
  const VesselState a = vessel({0.0, 0.0}, 1.0, kPi / 2.0);   // east at 1 m/s
  const VesselState b = vessel({10.0, 0.0}, 1.0, 3.0 * kPi / 2.0);  // west at 1 m/s
  const CpaResult r = predict_cpa(a, b, 60.0);
  CHECK(r.t_cpa == Catch::Approx(5.0).margin(1e-12));
  CHECK(r.d_cpa == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("predict_cpa: identical velocities keep the initial distance") {
  const VesselState a = vessel({0.0, 0.0}, 1.3, 0.7);
  const VesselState b = vessel({30.0, 40.0}, 1.3, 0.7);
  const CpaResult r = predict_cpa(a, b, 60.0);
  CHECK(r.t_cpa == 0.0);
  CHECK(r.d_cpa == Catch::Approx(50.0));
}

TEST_CASE("predict_cpa: departing tracks clamp to t=0") {
  const VesselState a = vessel({0.0, 0.0}, 1.0, kPi / 2.0);
  const VesselState b = vessel({10.0, 0.0}, 1.0, kPi / 2.0 + 0.2);
  // b starts ahead and diverges; the minimum over [0,H] sits at 0.
  const CpaResult r = predict_cpa(a, b, 60.0);
  CHECK(r.t_cpa >= 0.0);
  CHECK(r.d_cpa <= 10.0 + 1e-9);
}

TEST_CASE("predict_cpa matches the brute-force sweep on 100 random pairs") {
  Rng rng(2024);
  for (int i = 0; i < 100; ++i) {
    const VesselState a = vessel({rng.uniform(-200.0, 200.0), rng.uniform(-200.0, 200.0)},
                                 rng.uniform(0.0, 3.0), rng.uniform(0.0, kTwoPi));
    const VesselState b = vessel({rng.uniform(-200.0, 200.0), rng.uniform(-200.0, 200.0)},
                                 rng.uniform(0.0, 3.0), rng.uniform(0.0, kTwoPi));
    const CpaResult fast = predict_cpa(a, b, 60.0);
    const CpaResult slow = oracle::cpa_sweep(a.position, a.velocity(), b.position, b.velocity(),
                                             60.0, 0.001);
    CHECK(std::fabs(fast.d_cpa - slow.d_cpa) < 1e-3);
  }
}

TEST_CASE("sitaw_observe with zero accuracies reproduces the truth") {
  ScenarioParams p = fixtures::crossing_scenario();
  p.own_accuracy = {};
  p.obstacle_accuracy = {};
  p.own_pos_noise_m = -1.0;
  p.obstacle_pos_noise_m = -1.0;

  const VesselState own = vessel({10.0, 20.0}, 1.5, kPi / 2.0);
  ObstacleTruth obstacle;
  obstacle.state = vessel({100.0, 50.0}, 2.0, kPi);
  obstacle.dimensions_m = {6.0, 2.5};

  const BeliefState belief = sitaw_observe(own, {obstacle}, p, Rng(7));
  CHECK(belief.own.state.position.east == own.position.east);
  CHECK(belief.own.state.position.north == own.position.north);
  CHECK(belief.own.state.speed == own.speed);
  CHECK(belief.obstacles[0].state.position.east == obstacle.state.position.east);
  CHECK(belief.obstacles[0].dimensions_m[0] == obstacle.dimensions_m[0]);
}

TEST_CASE("sitaw_observe bounded noise stays inside every declared bound") {
  ScenarioParams p = fixtures::crossing_scenario();
  const VesselState own = vessel({10.0, 20.0}, 1.0, kPi / 2.0);
  ObstacleTruth obstacle;
  obstacle.state = vessel({150.0, 70.0}, 1.5, 3.0);
  obstacle.dimensions_m = {6.0, 2.5};

  const Rng base(99);
  for (int i = 0; i < 100000; ++i) {
    const BeliefState belief = sitaw_observe(own, {obstacle}, p, base.fork(i));
    CHECK((belief.own.state.position - own.position).norm() <= p.own_accuracy.pos_m);
    CHECK(std::fabs(belief.own.state.speed - own.speed) <= p.own_accuracy.speed_mps);
    CHECK(angular_distance(belief.own.state.course, own.course) <= p.own_accuracy.course_rad);
    const auto& est = belief.obstacles[0];
    CHECK((est.state.position - obstacle.state.position).norm() <= p.obstacle_accuracy.pos_m);
    CHECK(std::fabs(est.state.speed - obstacle.state.speed) <= p.obstacle_accuracy.speed_mps);
    CHECK(std::fabs(est.dimensions_m[0] - obstacle.dimensions_m[0]) <=
          p.obstacle_accuracy.dim_m);
  }
}

TEST_CASE("sitaw_observe violating mode exceeds the declared bound with positive rate") {
  ScenarioParams p = fixtures::crossing_scenario();
  p.noise_mode = {true, 3.0};
  const VesselState own = vessel({10.0, 20.0}, 1.0, kPi / 2.0);
  ObstacleTruth obstacle;
  obstacle.state = vessel({150.0, 70.0}, 1.5, 3.0);
  obstacle.dimensions_m = {6.0, 2.5};

  const Rng base(123);
  int exceed = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const BeliefState belief = sitaw_observe(own, {obstacle}, p, base.fork(i));
    if ((belief.obstacles[0].state.position - obstacle.state.position).norm() >
        p.obstacle_accuracy.pos_m) {
      exceed++;
    }
  }
  // Disk radius scaled 3x: P(within bound) = 1/9, so ~8/9 of draws exceed.
  CHECK(exceed > draws / 2);
  CHECK(exceed < draws);
}

TEST_CASE("dp_step at equilibrium advances along the path at constant speed") {
  ScenarioParams p = fixtures::crossing_scenario();
  p.dp.disturbance_speed = 0.0;
  p.dp.disturbance_cross = 0.0;
  const PathFrame frame = PathFrame::from(p);
  VesselState s = vessel(p.path[0], 1.5, frame.course);
  Rng rng(5);
  const VesselState next = dp_step(s, {1.5, "r"}, frame, p.dp, 0.1, rng);
  CHECK(next.speed == Catch::Approx(1.5));
  CHECK((next.position - s.position).norm() == Catch::Approx(0.15));
  CHECK(next.position.north == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("dp_step settles a 0 to 2 m/s command within eps_speed after 5 tau") {
  ScenarioParams p = fixtures::crossing_scenario();
  const PathFrame frame = PathFrame::from(p);
  VesselState s = vessel(p.path[0], 0.0, frame.course);
  const Rng base(17);
  const double dt = p.dt_s;
  const int steps = static_cast<int>(std::llround(5.0 * p.dp.tau_s / dt));
  for (int i = 0; i < steps; ++i) {
    Rng rng = base.fork(i);
    s = dp_step(s, {2.0, "r"}, frame, p.dp, dt, rng);
  }
  // Independent check: the exact lag solution plus the worst disturbance
  // accumulation bounds the remaining error.
  const double exact_residual = 2.0 * std::exp(-5.0);
  const double disturbance_bound = p.dp.disturbance_speed * p.dp.tau_s;
  REQUIRE(exact_residual + disturbance_bound < p.dp.eps_speed_mps);
  CHECK(std::fabs(s.speed - 2.0) <= p.dp.eps_speed_mps);
}

TEST_CASE("dp_step keeps cross-track inside eps_pos under persistent disturbance") {
  ScenarioParams p = fixtures::crossing_scenario();
  p.dp.disturbance_cross = 5.0;  // absurdly strong drift; projection must cap it
  const PathFrame frame = PathFrame::from(p);
  VesselState s = vessel(p.path[0], 1.0, frame.course);
  const Rng base(31);
  for (int i = 0; i < 1000; ++i) {
    Rng rng = base.fork(i);
    s = dp_step(s, {1.0, "r"}, frame, p.dp, p.dt_s, rng);
    const double cross = std::fabs((s.position - frame.origin).dot(frame.normal));
    CHECK(cross <= p.dp.eps_pos_m + 1e-9);
  }
}

TEST_CASE("run_scenario without obstacles reports the infinite-separation sentinel") {
  const ScenarioParams p = fixtures::short_scenario(1, 300.0);
  const Trace trace = run_scenario(p);
  CHECK(std::isinf(trace.min_separation_m));
  CHECK(std::isinf(trace.min_margin_m));
  // Progress approaches v_max * duration, short of the spin-up lag.
  CHECK(trace.final_progress_m > p.v_max_mps * p.duration_s - 3.0 * p.v_max_mps * p.dp.tau_s);
  CHECK(trace.final_progress_m <= p.v_max_mps * p.duration_s + 1.0);
}

TEST_CASE("run_scenario is byte-identical for the same seed") {
  const ScenarioParams p = fixtures::crossing_scenario();
  const std::string a = trace_to_ndjson(run_scenario(p));
  const std::string b = trace_to_ndjson(run_scenario(p));
  CHECK(a == b);

  ScenarioParams q = p;
  q.seed = p.seed + 1;
  CHECK(trace_to_ndjson(run_scenario(q)) != a);
}

TEST_CASE("run_scenario rejects invalid parameters before stepping") {
  ScenarioParams p = fixtures::crossing_scenario();
  p.dt_s = -0.1;
  CHECK_THROWS_AS(run_scenario(p), Error);

  ScenarioParams q = fixtures::crossing_scenario();
  q.obstacles[0].range_m = 10.0;  // starts inside d_min
  CHECK_THROWS_AS(run_scenario(q), Error);
}

TEST_CASE("trace ndjson round-trips and the CSV has the documented header") {
  ScenarioParams p = fixtures::crossing_scenario();
  p.duration_s = 5.0;
  const Trace trace = run_scenario(p);
  const Trace reparsed = trace_from_ndjson(trace_to_ndjson(trace));
  CHECK(reparsed.ticks.size() == trace.ticks.size());
  CHECK(trace_to_ndjson(reparsed) == trace_to_ndjson(trace));

  const std::string csv = trace_to_csv(trace);
  CHECK(csv.rfind("t,sep_min,margin,cmd_speed,", 0) == 0);
}
