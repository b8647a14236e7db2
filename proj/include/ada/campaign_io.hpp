#pragma once

#include <string>

#include <json.hpp>

#include "ada/campaign.hpp"
#include "ada/sim_io.hpp"

namespace ada {

inline constexpr const char* kCampaignSchema = "ada-campaign/1";

inline Json to_json(const EvidenceItem& e) {
  Json j;
  j["id"] = e.id;
  j["kind"] = to_string(e.kind);
  j["target_clauses"] = e.target_clauses;
  j["source"] = e.source;
  j["coverage"] = e.coverage;
  j["result"] = to_string(e.result);
  j["strength"] = e.strength;
  j["relevance"] = e.relevance;
  j["falsifying_scenarios"] = e.falsifying_scenarios;
  return j;
}

inline EvidenceItem evidence_from_json(const Json& j) {
  EvidenceItem e;
  e.id = j.at("id").get<std::string>();
  const std::string kind = j.value("kind", std::string("observation"));
  if (kind == "observation") {
    e.kind = EvidenceKind::Observation;
  } else if (kind == "insight") {
    e.kind = EvidenceKind::Insight;
  } else if (kind == "circumstantial") {
    e.kind = EvidenceKind::Circumstantial;
  } else {
    throw Error("unknown evidence kind '" + kind + "'");
  }
  e.target_clauses = j.value("target_clauses", std::vector<std::string>{});
  e.source = j.value("source", std::string());
  e.coverage = j.value("coverage", 0.0);
  const std::string result = j.value("result", std::string("inconclusive"));
  if (result == "supports") {
    e.result = EvidenceResult::Supports;
  } else if (result == "refutes") {
    e.result = EvidenceResult::Refutes;
  } else if (result == "inconclusive") {
    e.result = EvidenceResult::Inconclusive;
  } else {
    throw Error("unknown evidence result '" + result + "'");
  }
  e.strength = j.value("strength", std::string());
  e.relevance = j.value("relevance", std::string());
  e.falsifying_scenarios = j.value("falsifying_scenarios", std::vector<std::string>{});
  return e;
}

inline Json to_json(const ParameterSpace& space) {
  Json j;
  j["dimensions"] = Json::array();
  for (const auto& d : space.dimensions) {
    j["dimensions"].push_back(Json{{"name", d.name},
                                   {"unit", d.unit},
                                   {"lower", d.lower},
                                   {"upper", d.upper},
                                   {"source", d.source}});
  }
  Json fixed = Json::object();
  for (const auto& [k, v] : space.fixed) fixed[k] = v;
  for (const auto& [k, v] : space.fixed_strings) fixed[k] = v;
  j["fixed"] = fixed;
  return j;
}

inline ParameterSpace space_from_json(const Json& j) {
  ParameterSpace space;
  for (const auto& d : j.value("dimensions", Json::array())) {
    space.dimensions.push_back({d.at("name").get<std::string>(), d.value("unit", std::string()),
                                d.at("lower").get<double>(), d.at("upper").get<double>(),
                                d.value("source", std::string())});
  }
  const Json fixed = j.value("fixed", Json::object());
  for (const auto& [k, v] : fixed.items()) {
    if (v.is_string()) {
      space.fixed_strings[k] = v.get<std::string>();
    } else {
      space.fixed[k] = v.get<double>();
    }
  }
  return space;
}

inline Json to_json(const MonitorOutcome& o) {
  Json j;
  j["status"] = to_string(o.status);
  if (o.status == MonitorStatus::Violated) {
    j["first_tick"] = o.first_tick;
    j["worst_value"] = o.worst_value;
  }
  return j;
}

inline Json to_json(const ScenarioVerdict& v) {
  Json j;
  j["id"] = v.scenario_id;
  j["classification"] = to_string(v.classification);
  j["falsified"] = v.falsified_guarantees;
  j["vacuous"] = v.violated_assumptions;
  j["min_separation_m"] = json_metric(v.min_separation_m);
  j["margin_m"] = json_metric(v.margin_m);
  Json outcomes = Json::object();
  for (const auto& o : v.outcomes) {
    Json entry = to_json(o.outcome);
    entry["kind"] = to_string(o.clause_kind);
    outcomes[o.clause_id] = entry;
  }
  j["clauses"] = outcomes;
  return j;
}

inline ScenarioVerdict verdict_from_json(const Json& j) {
  ScenarioVerdict v;
  v.scenario_id = j.at("id").get<std::string>();
  const std::string cls = j.at("classification").get<std::string>();
  if (cls == "pass") {
    v.classification = VerdictClass::Pass;
  } else if (cls == "falsified") {
    v.classification = VerdictClass::Falsified;
  } else if (cls == "vacuous") {
    v.classification = VerdictClass::Vacuous;
  } else {
    throw Error("unknown verdict classification '" + cls + "'");
  }
  v.falsified_guarantees = j.value("falsified", std::vector<std::string>{});
  v.violated_assumptions = j.value("vacuous", std::vector<std::string>{});
  v.min_separation_m = metric_from_json(j.at("min_separation_m"));
  v.margin_m = metric_from_json(j.at("margin_m"));
  const Json clauses = j.value("clauses", Json::object());
  for (const auto& [clause, entry] : clauses.items()) {
    ClauseOutcome o;
    o.clause_id = clause;
    o.clause_kind = entry.value("kind", std::string("assumption")) == "guarantee"
                        ? ClauseKind::Guarantee
                        : ClauseKind::Assumption;
    const std::string status = entry.at("status").get<std::string>();
    if (status == "held") {
      o.outcome.status = MonitorStatus::Held;
    } else if (status == "violated") {
      o.outcome.status = MonitorStatus::Violated;
    } else {
      o.outcome.status = MonitorStatus::NotApplicable;
    }
    o.outcome.first_tick = entry.value("first_tick", -1);
    o.outcome.worst_value = entry.value("worst_value", 0.0);
    v.outcomes.push_back(std::move(o));
  }
  return v;
}

inline Json to_json(const CampaignReport& r) {
  Json j;
  j["schema"] = kCampaignSchema;
  j["campaign_id"] = r.campaign_id;
  j["component"] = r.component;
  j["plan"] = Json{{"n", r.plan.n},
                   {"k", r.plan.k},
                   {"rounds", r.plan.rounds},
                   {"sigma0", r.plan.sigma0},
                   {"master_seed", r.plan.master_seed}};
  j["overrides"] = Json{{"mpcs_policy", to_string(r.overrides.policy)},
                        {"noise_mode", r.overrides.noise_mode.violating
                                           ? Json{{"mode", "violating"},
                                                  {"scale", r.overrides.noise_mode.scale}}
                                           : Json{{"mode", "bounded"}}},
                        {"maneuvering_obstacles", r.overrides.maneuvering_obstacles}};
  j["space"] = to_json(r.space);
  j["samples"] = Json::array();
  for (const auto& s : r.samples) {
    j["samples"].push_back(Json{{"id", s.id}, {"x", s.x}, {"origin", s.origin}});
  }
  j["verdicts"] = Json::array();
  for (const auto& v : r.verdicts) j["verdicts"].push_back(to_json(v));
  j["falsification_count"] = r.falsification_count;
  j["vacuous_count"] = r.vacuous_count;
  j["pass_count"] = r.pass_count;
  j["coverage"] = r.coverage;
  j["boundary"] = Json::array();
  for (const auto& b : r.boundary) {
    j["boundary"].push_back(Json{{"id", b.scenario_id}, {"margin_m", b.margin_m}});
  }
  j["evidence"] = to_json(r.evidence);
  return j;
}

inline CampaignReport campaign_from_json(const Json& j) {
  CampaignReport r;
  if (j.value("schema", std::string(kCampaignSchema)) != kCampaignSchema) {
    throw Error("unsupported campaign schema");
  }
  r.campaign_id = j.at("campaign_id").get<std::string>();
  r.component = j.at("component").get<std::string>();
  const Json& plan = j.at("plan");
  r.plan.n = plan.at("n").get<std::size_t>();
  r.plan.k = plan.at("k").get<std::size_t>();
  r.plan.rounds = plan.at("rounds").get<int>();
  r.plan.sigma0 = plan.at("sigma0").get<double>();
  r.plan.master_seed = plan.at("master_seed").get<std::uint64_t>();
  if (j.contains("overrides")) {
    const Json& o = j.at("overrides");
    r.overrides.policy = o.value("mpcs_policy", std::string("nominal")) == "ignore_accuracy"
                             ? MpcsPolicy::IgnoreAccuracy
                             : MpcsPolicy::Nominal;
    if (o.contains("noise_mode") && o.at("noise_mode").value("mode", std::string()) == "violating") {
      r.overrides.noise_mode = {true, o.at("noise_mode").value("scale", 3.0)};
    }
    r.overrides.maneuvering_obstacles = o.value("maneuvering_obstacles", false);
  }
  r.space = space_from_json(j.at("space"));
  for (const auto& s : j.value("samples", Json::array())) {
    CampaignSample sample;
    sample.id = s.at("id").get<std::string>();
    sample.x = s.at("x").get<std::vector<double>>();
    sample.origin = s.value("origin", std::string());
    sample.index = r.samples.size();
    r.samples.push_back(std::move(sample));
  }
  for (const auto& v : j.value("verdicts", Json::array())) {
    r.verdicts.push_back(verdict_from_json(v));
  }
  r.falsification_count = j.value("falsification_count", 0);
  r.vacuous_count = j.value("vacuous_count", 0);
  r.pass_count = j.value("pass_count", 0);
  r.coverage = j.value("coverage", 0.0);
  for (const auto& b : j.value("boundary", Json::array())) {
    r.boundary.push_back({b.at("id").get<std::string>(), b.at("margin_m").get<double>()});
  }
  if (j.contains("evidence")) r.evidence = evidence_from_json(j.at("evidence"));
  return r;
}

inline CampaignReport load_campaign(const std::string& path) {
  return campaign_from_json(parse_json_file(path));
}

}  // namespace ada
