#include <algorithm>
#include <set>

#include <catch2/catch_amalgamated.hpp>

#include "ada/campaign.hpp"
#include "ada/campaign_io.hpp"
#include "support/fixtures.hpp"

using namespace ada;

namespace {

CampaignPlan small_plan(std::size_t n, std::uint64_t seed, int rounds = 0) {
  CampaignPlan plan;
  plan.n = n;
  plan.k = 5;
  plan.rounds = rounds;
  plan.master_seed = seed;
  plan.jobs = 1;
  return plan;
}

// Fast model variant for campaign mechanics tests: short scenarios, same
// contracts.
SystemModel quick_ferry() {
  auto model = fixtures::ferry();
  auto& odd = *model.composite.odd;
  odd.duration_s = 40.0;
  return model;
}

}  // namespace

TEST_CASE("derive_parameter_space builds the documented six dimensions for MPCS") {
  const auto model = fixtures::ferry();
  const ParameterSpace space = derive_parameter_space(model, "MPCS");

  std::vector<std::string> names;
  for (const auto& d : space.dimensions) names.push_back(d.name);
  std::sort(names.begin(), names.end());
  CHECK(names == std::vector<std::string>{"eps_pos_obstacle_m", "eps_pos_own_m",
                                          "obstacle_bearing_rad", "obstacle_course_rad",
                                          "obstacle_range_m", "obstacle_speed_mps"});

  for (const auto& d : space.dimensions) {
    CHECK(d.lower < d.upper);
    if (d.name == "eps_pos_obstacle_m") {
      CHECK(d.source == "MPCS.A2");
      CHECK(d.upper == Catch::Approx(5.0));
    }
    if (d.name == "eps_pos_own_m") {
      CHECK(d.source == "MPCS.A3");
      CHECK(d.upper == Catch::Approx(2.0));
    }
    if (d.name == "obstacle_speed_mps") {
      CHECK(d.source == "SITAW.A1");
      CHECK(d.upper <= 3.0);
    }
    if (d.name == "obstacle_range_m" || d.name == "obstacle_bearing_rad" ||
        d.name == "obstacle_course_rad") {
      CHECK(d.source == "environment");
    }
  }
  CHECK(space.fixed.at("d_min_m") == 50.0);
  CHECK(space.fixed_strings.at("route_id") == "crossing-route-1");
}

TEST_CASE("tightening the provider guarantee shrinks the swept noise range") {
  auto model = fixtures::ferry();
  auto* sitaw = const_cast<Component*>(model.find_component("SITAW"));
  sitaw->contract.guarantees[0].predicate =
      StateErrorBound{Signal::PositionM, Subject::Obstacle, 3.0};
  const ParameterSpace space = derive_parameter_space(model, "MPCS");
  for (const auto& d : space.dimensions) {
    if (d.name == "eps_pos_obstacle_m") CHECK(d.upper == Catch::Approx(3.0));
  }
}

TEST_CASE("a component with only informal clauses has no testable assumptions") {
  auto model = fixtures::ferry();
  CHECK_THROWS_WITH(derive_parameter_space(model, "DP"),
                    Catch::Matchers::ContainsSubstring("no testable assumptions"));
}

TEST_CASE("lhs stratification: every stratum of every dimension holds one point") {
  for (const std::size_t n : {4u, 16u, 1000u}) {
    const auto points = lhs_normalized(2, n, 99);
    for (std::size_t d = 0; d < 2; ++d) {
      std::set<std::size_t> strata;
      for (const auto& x : points) {
        CHECK(x[d] > 0.0);
        CHECK(x[d] < 1.0);
        strata.insert(static_cast<std::size_t>(x[d] * static_cast<double>(n)));
      }
      CHECK(strata.size() == n);
    }
  }
}

TEST_CASE("lhs sampling is deterministic in the seed") {
  CHECK(lhs_normalized(4, 64, 7) == lhs_normalized(4, 64, 7));
  CHECK(lhs_normalized(4, 64, 7) != lhs_normalized(4, 64, 8));
}

TEST_CASE("lhs_sample materializes scenarios inside the space bounds") {
  const auto model = fixtures::ferry();
  ScenarioFactory factory(model, "MPCS");
  const auto scenarios = lhs_sample(factory.space(), factory, 32, 5);
  REQUIRE(scenarios.size() == 32);
  for (const auto& p : scenarios) {
    REQUIRE(p.obstacles.size() == 1);
    CHECK(p.obstacles[0].range_m >= 150.0);
    CHECK(p.obstacles[0].range_m <= 400.0);
    CHECK(p.obstacles[0].speed_mps <= 2.5);
    CHECK(p.obstacle_pos_noise_m > 0.0);
    CHECK(p.obstacle_pos_noise_m <= 5.0);
    CHECK(p.d_min_m == 50.0);
    CHECK(validate_scenario(p).empty());
  }
}

TEST_CASE("campaigns are deterministic and order-independent") {
  const auto model = quick_ferry();
  const CampaignPlan plan = small_plan(24, 42, 1);

  const Json a = to_json(run_campaign(model, "MPCS", plan, {}));
  const Json b = to_json(run_campaign(model, "MPCS", plan, {}));
  CHECK(a == b);

  CampaignPlan parallel = plan;
  parallel.jobs = 4;
  const Json c = to_json(run_campaign(model, "MPCS", parallel, {}));
  CHECK(a == c);
}

TEST_CASE("rounds=0 leaves the sample set at the plain Latin hypercube") {
  const auto model = quick_ferry();
  const CampaignReport report = run_campaign(model, "MPCS", small_plan(12, 3, 0), {});
  CHECK(report.samples.size() == 12);
  for (const auto& s : report.samples) CHECK(s.origin == "lhs");
}

TEST_CASE("adaptive refinement adds k scenarios per round and keeps counts consistent") {
  const auto model = quick_ferry();
  const CampaignReport report = run_campaign(model, "MPCS", small_plan(12, 3, 2), {});
  CHECK(report.samples.size() == 12 + 2 * 5);
  CHECK(report.verdicts.size() == report.samples.size());
  CHECK(report.pass_count + report.falsification_count + report.vacuous_count ==
        static_cast<int>(report.verdicts.size()));
  int refined = 0;
  for (const auto& s : report.samples) {
    if (s.origin.rfind("refine-", 0) == 0) refined++;
    for (const double x : s.x) {
      CHECK(x >= 0.0);
      CHECK(x <= 1.0);
    }
  }
  CHECK(refined == 10);
}

TEST_CASE("refinement runs even when all margins are equal (degenerate case)") {
  // Obstacle-free model: every margin is the infinite sentinel.
  auto model = quick_ferry();
  auto& odd = *model.composite.odd;
  odd.environment[0] = {"obstacle_range_m", "m", 2000.0, 3000.0};  // far out of reach
  const CampaignReport report = run_campaign(model, "MPCS", small_plan(8, 11, 1), {});
  CHECK(report.samples.size() == 8 + 5);
  CHECK(report.falsification_count == 0);
}

TEST_CASE("coverage is a marginal-bin fraction and never decreases with more samples") {
  std::vector<CampaignSample> samples;
  for (int i = 0; i < 32; ++i) {
    CampaignSample s;
    s.x = lhs_normalized(3, 32, 500)[static_cast<std::size_t>(i)];
    samples.push_back(s);
    const double before = grid_coverage(std::vector<CampaignSample>(samples.begin(),
                                                                    samples.end() - 1),
                                        3);
    const double after = grid_coverage(samples, 3);
    CHECK(after >= before);
    CHECK(after <= 1.0);
  }
  // 32 LHS points cover all 10 bins of each of the 3 dimensions.
  CHECK(grid_coverage(samples, 3) == 1.0);
}

TEST_CASE("campaign evidence result follows the falsification count") {
  const auto model = quick_ferry();
  const CampaignReport clean = run_campaign(model, "MPCS", small_plan(10, 21, 0), {});
  CHECK(clean.falsification_count == 0);
  CHECK(clean.evidence.result == EvidenceResult::Supports);
  CHECK(clean.evidence.kind == EvidenceKind::Observation);
  CHECK(clean.evidence.target_clauses ==
        std::vector<std::string>{"Ferry.G1", "MPCS.G1", "MPCS.G2"});

  CampaignOverrides mutant;
  mutant.policy = MpcsPolicy::IgnoreAccuracy;
  CampaignPlan plan = small_plan(60, 21, 2);
  const CampaignReport broken = run_campaign(model, "MPCS", plan, mutant);
  if (broken.falsification_count > 0) {
    CHECK(broken.evidence.result == EvidenceResult::Refutes);
    CHECK_FALSE(broken.evidence.falsifying_scenarios.empty());
  }
}

TEST_CASE("campaign report round-trips through JSON") {
  const auto model = quick_ferry();
  const CampaignReport report = run_campaign(model, "MPCS", small_plan(6, 33, 1), {});
  const Json once = to_json(report);
  const CampaignReport reparsed = campaign_from_json(once);
  CHECK(to_json(reparsed) == once);
}

TEST_CASE("shrink_counterexample: zero budget and midpoint inputs return unchanged") {
  const auto model = quick_ferry();
  const CampaignRunner runner(model, "MPCS", {});
  const std::vector<double> at_mid(runner.space().size(), 0.5);
  CHECK(shrink_counterexample(at_mid, runner, 1, 0, 50) == at_mid);

  std::vector<double> off_mid(runner.space().size(), 0.9);
  CHECK(shrink_counterexample(off_mid, runner, 1, 0, 0) == off_mid);
}

TEST_CASE("vacuous-only campaigns produce zero falsifications under violating noise") {
  const auto model = quick_ferry();
  CampaignOverrides overrides;
  overrides.noise_mode = {true, 3.0};
  const CampaignReport report = run_campaign(model, "MPCS", small_plan(20, 5, 0), overrides);
  CHECK(report.falsification_count == 0);
  CHECK(report.vacuous_count == 20);
}
