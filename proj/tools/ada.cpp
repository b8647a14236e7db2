// ada: assume-guarantee contract checking and simulation-based test campaigns
// for the autonomous-ferry collision avoidance case study.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ada/campaign_io.hpp"
#include "ada/discharge.hpp"
#include "ada/identify.hpp"
#include "ada/model_io.hpp"
#include "ada/report.hpp"
#include "ada/sim_io.hpp"
#include "ada/version.hpp"

namespace {

namespace fs = std::filesystem;

bool use_color() {
  return std::getenv("ADA_NO_COLOR") == nullptr;
}

std::string paint(const std::string& text, const char* code) {
  if (!use_color()) return text;
  return std::string("\033[") + code + "m" + text + "\033[0m";
}

std::string ok_tag() { return paint("ok", "32"); }
std::string fail_tag() { return paint("FAIL", "31"); }

void print_findings(const std::vector<ada::Finding>& findings) {
  for (const auto& f : findings) std::cout << f.to_string() << "\n";
}

int cmd_check(const std::string& model_path) {
  const ada::SystemModel model = ada::load_model(model_path);

  std::vector<ada::Finding> findings = ada::validate_model(model);
  {
    const auto structure = ada::check_responsibility_structure(model);
    findings.insert(findings.end(), structure.begin(), structure.end());
  }
  const ada::RefinementReport refinement = ada::check_refinement(model);
  findings.insert(findings.end(), refinement.discharge.findings.begin(),
                  refinement.discharge.findings.end());
  findings.insert(findings.end(), refinement.findings.begin(), refinement.findings.end());

  print_findings(findings);
  for (const auto& entry : refinement.discharge.entries) {
    std::cout << entry.assumption << " -> ";
    switch (entry.kind) {
      case ada::DischargeKind::DischargedBy:
        std::cout << entry.provider << (entry.via_link ? " (link)" : " (entailment)");
        break;
      case ada::DischargeKind::PromotedToParent:
        std::cout << "promoted to " << entry.composite << " (" << entry.provider << ")";
        break;
      case ada::DischargeKind::Undischarged:
        std::cout << "undischarged";
        break;
    }
    std::cout << "\n";
  }

  const bool passed = findings.empty() && refinement.passed;
  std::cout << "refinement: " << (passed ? ok_tag() : fail_tag()) << "\n";
  return passed ? 0 : 1;
}

int cmd_identify(const std::string& model_path, const std::string& factors_path,
                 const std::string& out_dir) {
  const ada::SystemModel model = ada::load_model(model_path);
  const auto factors = ada::load_factors(factors_path);

  for (const auto& cf : factors) {
    const auto findings = ada::validate_causal_factor(cf, model);
    if (!findings.empty()) {
      print_findings(findings);
      return 1;
    }
  }

  ada::Json stubs = ada::Json::array();
  for (const auto& cf : factors) {
    for (const auto& stub : ada::derive_clause_stubs(cf, model)) {
      ada::Json j;
      j["kind"] = ada::to_string(stub.kind);
      j["target_component"] = stub.target_component;
      if (!stub.proposed_id.empty()) j["proposed_id"] = stub.proposed_id;
      j["text"] = stub.text;
      j["causal_factor"] = stub.causal_factor;
      stubs.push_back(j);
    }
  }
  ada::Json patch;
  patch["schema"] = "ada-stubs/1";
  patch["note"] = "proposed clause stubs; merge into the model by hand";
  patch["stubs"] = stubs;

  const auto table = ada::risk_source_coverage(model, factors);

  fs::create_directories(out_dir);
  ada::write_file_atomic(fs::path(out_dir) / "stubs.json", patch.dump(2) + "\n");
  ada::write_file_atomic(fs::path(out_dir) / "coverage.csv", table.to_csv());
  std::cout << "wrote " << (fs::path(out_dir) / "stubs.json").string() << " ("
            << stubs.size() << " stubs) and coverage.csv\n";
  return 0;
}

int cmd_simulate(const std::string& scenario_path, const std::string& out_path,
                 std::string csv_path) {
  const ada::ScenarioParams params = ada::load_scenario(scenario_path);
  const ada::Trace trace = ada::run_scenario(params);

  if (csv_path.empty()) csv_path = fs::path(out_path).replace_extension(".csv").string();
  if (const fs::path parent = fs::path(out_path).parent_path(); !parent.empty()) {
    fs::create_directories(parent);
  }
  ada::write_file_atomic(out_path, ada::trace_to_ndjson(trace));
  ada::write_file_atomic(csv_path, ada::trace_to_csv(trace));

  std::cout << "scenario " << params.scenario_id << ": " << trace.ticks.size() << " ticks, "
            << "min separation ";
  if (std::isfinite(trace.min_separation_m)) {
    std::cout << trace.min_separation_m << " m";
  } else {
    std::cout << "inf (no obstacles)";
  }
  std::cout << ", progress " << trace.final_progress_m << " m\n";
  return 0;
}

struct CampaignCliOptions {
  std::string model_path;
  std::string component = "MPCS";
  std::size_t n = 100;
  std::size_t k = 10;
  int rounds = 0;
  double sigma0 = 0.15;
  std::uint64_t seed = 0;
  int jobs = 1;
  int shrink_budget = 40;
  std::string out_dir = "out";
  bool keep_traces = false;
  std::string policy = "nominal";
  std::string noise = "bounded";
  double noise_scale = 3.0;
  std::string behaviour = "constant_velocity";
};

int cmd_campaign(const CampaignCliOptions& opt) {
  const ada::SystemModel model = ada::load_model(opt.model_path);

  ada::CampaignPlan plan;
  plan.n = opt.n;
  plan.k = opt.k;
  plan.rounds = opt.rounds;
  plan.sigma0 = opt.sigma0;
  plan.master_seed = opt.seed;
  plan.jobs = opt.jobs;
  plan.shrink_budget = opt.shrink_budget;

  ada::CampaignOverrides overrides;
  if (opt.policy == "ignore-accuracy" || opt.policy == "ignore_accuracy") {
    overrides.policy = ada::MpcsPolicy::IgnoreAccuracy;
  } else if (opt.policy != "nominal") {
    throw ada::Error("unknown --mpcs-policy '" + opt.policy + "'");
  }
  if (opt.noise == "violating") {
    overrides.noise_mode = {true, opt.noise_scale};
  } else if (opt.noise != "bounded") {
    throw ada::Error("unknown --noise-mode '" + opt.noise + "'");
  }
  if (opt.behaviour == "maneuver") {
    overrides.maneuvering_obstacles = true;
  } else if (opt.behaviour != "constant_velocity") {
    throw ada::Error("unknown --obstacle-behaviour '" + opt.behaviour + "'");
  }

  const fs::path out(opt.out_dir);
  fs::create_directories(out);
  ada::TraceSink sink;
  std::mutex sink_mutex;
  if (opt.keep_traces) {
    fs::create_directories(out / "traces");
    sink = [&](const ada::CampaignSample& sample, const ada::Trace& trace) {
      std::lock_guard<std::mutex> lock(sink_mutex);
      ada::write_file_atomic(out / "traces" / (sample.id + ".ndjson"),
                             ada::trace_to_ndjson(trace));
    };
  }

  const ada::CampaignReport report =
      ada::run_campaign(model, opt.component, plan, overrides, sink);
  ada::write_file_atomic(out / "campaign.json", ada::to_json(report).dump(2) + "\n");

  // Shrink every falsifying scenario toward the space midpoint and keep the
  // result as a standalone, re-runnable scenario file.
  if (report.falsification_count > 0) {
    fs::create_directories(out / "falsified");
    ada::CampaignRunner runner(model, opt.component, overrides);
    for (std::size_t i = 0; i < report.verdicts.size(); ++i) {
      if (report.verdicts[i].classification != ada::VerdictClass::Falsified) continue;
      const auto shrunk_x = ada::shrink_counterexample(
          report.samples[i].x, runner, plan.master_seed, report.samples[i].index,
          plan.shrink_budget);
      const ada::ScenarioParams shrunk = runner.factory().make(
          shrunk_x, plan.master_seed, report.samples[i].index, overrides);
      ada::write_file_atomic(out / "falsified" / (report.samples[i].id + ".json"),
                             ada::to_json(shrunk).dump(2) + "\n");
    }
  }

  std::cout << "campaign " << report.campaign_id << ": " << report.verdicts.size()
            << " scenarios, " << report.pass_count << " pass, " << report.falsification_count
            << " falsified, " << report.vacuous_count << " vacuous, coverage "
            << report.coverage << "\n";
  return 0;
}

int cmd_report(const std::string& model_path, const std::vector<std::string>& campaign_paths,
               const std::string& out_dir, double threshold) {
  const ada::SystemModel model = ada::load_model(model_path);
  const ada::RefinementReport refinement = ada::check_refinement(model);
  std::vector<ada::CampaignReport> campaigns;
  for (const auto& path : campaign_paths) campaigns.push_back(ada::load_campaign(path));

  const ada::ReportBundle bundle = ada::render_report(model, refinement, campaigns, {}, threshold);
  ada::write_report(bundle, out_dir);
  std::cout << "wrote report.md, report.json, model.dot under " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"assume-guarantee contract toolkit with simulation-based testing"};
  app.set_version_flag("--version",
                       std::string("ada ") + ada::kToolVersion + " (model schema " +
                           ada::kModelSchema + ")");
  app.require_subcommand(1);

  std::string model_path;
  std::string factors_path;
  std::string scenario_path;
  std::string out_path = "trace.ndjson";
  std::string csv_path;
  std::string out_dir = "out";
  std::vector<std::string> campaign_paths;
  double threshold = 0.8;
  CampaignCliOptions camp;

  auto* check = app.add_subcommand("check", "validate a model and check refinement");
  check->add_option("model", model_path, "model JSON file")->required();

  auto* identify = app.add_subcommand("identify", "derive clause stubs from causal factors");
  identify->add_option("model", model_path, "model JSON file")->required();
  identify->add_option("--factors", factors_path, "causal factor JSON list")->required();
  identify->add_option("--out", out_dir, "output directory")->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "run one scenario");
  simulate->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  simulate->add_option("--out", out_path, "trace output (ndjson)")->capture_default_str();
  simulate->add_option("--csv", csv_path, "CSV summary path (default: out with .csv)");

  auto* campaign = app.add_subcommand("campaign", "run a test campaign for one component");
  campaign->add_option("--model", camp.model_path, "model JSON file")->required();
  campaign->add_option("--component", camp.component, "component under test")
      ->capture_default_str();
  campaign->add_option("--n", camp.n, "Latin hypercube sample count")->capture_default_str();
  campaign->add_option("--k", camp.k, "refinement seeds per round")->capture_default_str();
  campaign->add_option("--rounds", camp.rounds, "adaptive refinement rounds")
      ->capture_default_str();
  campaign->add_option("--sigma", camp.sigma0, "initial refinement jitter (normalized)")
      ->capture_default_str();
  campaign->add_option("--seed", camp.seed, "master seed")->capture_default_str();
  campaign->add_option("--jobs", camp.jobs, "parallel workers")->capture_default_str();
  campaign->add_option("--shrink-budget", camp.shrink_budget,
                       "simulations per counterexample shrink")
      ->capture_default_str();
  campaign->add_option("--out", camp.out_dir, "output directory")->capture_default_str();
  campaign->add_flag("--keep-traces", camp.keep_traces, "write per-scenario trace files");
  campaign->add_option("--mpcs-policy", camp.policy, "nominal | ignore-accuracy")
      ->capture_default_str();
  campaign->add_option("--noise-mode", camp.noise, "bounded | violating")->capture_default_str();
  campaign->add_option("--noise-scale", camp.noise_scale, "violating noise scale")
      ->capture_default_str();
  campaign->add_option("--obstacle-behaviour", camp.behaviour, "constant_velocity | maneuver")
      ->capture_default_str();

  auto* report = app.add_subcommand("report", "render the assurance report");
  report->add_option("--model", model_path, "model JSON file")->required();
  report->add_option("--campaign", campaign_paths, "campaign JSON file(s)");
  report->add_option("--out", out_dir, "output directory")->capture_default_str();
  report->add_option("--threshold", threshold, "claim coverage threshold")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(model_path);
    if (identify->parsed()) return cmd_identify(model_path, factors_path, out_dir);
    if (simulate->parsed()) return cmd_simulate(scenario_path, out_path, csv_path);
    if (campaign->parsed()) return cmd_campaign(camp);
    if (report->parsed()) return cmd_report(model_path, campaign_paths, out_dir, threshold);
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "malformed input: " << e.what() << "\n";
    return 2;
  } catch (const ada::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
