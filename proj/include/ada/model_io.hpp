#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ada/model.hpp"

namespace ada {

inline constexpr const char* kModelSchema = "ada-model/1";
inline constexpr const char* kFactorsSchema = "ada-factors/1";

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Enum names
// ---------------------------------------------------------------------------

inline ComponentKind component_kind_from(const std::string& s) {
  if (s == "Decision") return ComponentKind::Decision;
  if (s == "SITAW") return ComponentKind::Sitaw;
  if (s == "Action") return ComponentKind::Action;
  if (s == "Resource") return ComponentKind::Resource;
  if (s == "Composite") return ComponentKind::Composite;
  if (s == "ExternalEntity") return ComponentKind::ExternalEntity;
  throw Error("unknown component kind '" + s + "'");
}

inline Signal signal_from(const std::string& s) {
  if (s == "position_m") return Signal::PositionM;
  if (s == "speed_mps") return Signal::SpeedMps;
  if (s == "heading_rad") return Signal::HeadingRad;
  if (s == "course_rad") return Signal::CourseRad;
  if (s == "dimensions_m") return Signal::DimensionsM;
  throw Error("unknown signal '" + s + "'");
}

inline Subject subject_from(const std::string& s) {
  if (s == "own") return Subject::Own;
  if (s == "obstacle") return Subject::Obstacle;
  throw Error("unknown subject '" + s + "'");
}

// ---------------------------------------------------------------------------
// Predicates: tagged objects {"variant": "...", ...params}
// ---------------------------------------------------------------------------

inline Json to_json(const PredicateSpec& p) {
  Json j;
  j["variant"] = variant_name(p);
  if (const auto* s = std::get_if<StateErrorBound>(&p)) {
    j["signal"] = to_string(s->signal);
    j["subject"] = to_string(s->subject);
    j["epsilon"] = s->epsilon;
  } else if (const auto* s = std::get_if<SeparationBound>(&p)) {
    j["d_min_m"] = s->d_min;
  } else if (const auto* t = std::get_if<TrackingBound>(&p)) {
    j["eps_pos_m"] = t->eps_pos;
    j["eps_speed_mps"] = t->eps_speed;
    j["settle_time_s"] = t->settle_time;
  } else if (const auto* c = std::get_if<ConfigValid>(&p)) {
    j["route_id"] = c->route_id;
    j["d_min_m"] = c->d_min;
  } else if (const auto* r = std::get_if<SafeSetpointRule>(&p)) {
    j["horizon_s"] = r->horizon_s;
  } else if (const auto* b = std::get_if<ObstacleBehaviour>(&p)) {
    j["model"] = "constant_velocity";
    j["max_speed_mps"] = b->max_speed;
    j["max_turn_rate_radps"] = b->max_turn_rate;
  }
  return j;
}

inline PredicateSpec predicate_from_json(const Json& j) {
  const std::string variant = j.at("variant").get<std::string>();
  if (variant == "state_error_bound") {
    return StateErrorBound{signal_from(j.at("signal").get<std::string>()),
                           subject_from(j.at("subject").get<std::string>()),
                           j.at("epsilon").get<double>()};
  }
  if (variant == "separation_bound") {
    return SeparationBound{j.at("d_min_m").get<double>()};
  }
  if (variant == "tracking_bound") {
    return TrackingBound{j.at("eps_pos_m").get<double>(), j.at("eps_speed_mps").get<double>(),
                         j.at("settle_time_s").get<double>()};
  }
  if (variant == "config_valid") {
    return ConfigValid{j.at("route_id").get<std::string>(), j.at("d_min_m").get<double>()};
  }
  if (variant == "safe_setpoint_rule") {
    return SafeSetpointRule{j.at("horizon_s").get<double>()};
  }
  if (variant == "obstacle_behaviour") {
    const std::string model = j.at("model").get<std::string>();
    if (model != "constant_velocity") throw Error("unknown behaviour model '" + model + "'");
    return ObstacleBehaviour{BehaviourModel::ConstantVelocity, j.at("max_speed_mps").get<double>(),
                             j.at("max_turn_rate_radps").get<double>()};
  }
  throw Error("unknown predicate variant '" + variant + "'");
}

// ---------------------------------------------------------------------------
// Clauses, contracts, components
// ---------------------------------------------------------------------------

inline Json to_json(const Clause& c) {
  Json j;
  j["id"] = c.id;
  j["kind"] = to_string(c.kind);
  j["text"] = c.text;
  j["predicate"] = c.predicate ? to_json(*c.predicate) : Json(nullptr);
  if (c.inherits) j["inherits"] = *c.inherits;
  return j;
}

inline Clause clause_from_json(const Json& j) {
  Clause c;
  c.id = j.at("id").get<std::string>();
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "assumption") {
    c.kind = ClauseKind::Assumption;
  } else if (kind == "guarantee") {
    c.kind = ClauseKind::Guarantee;
  } else {
    throw Error("clause " + c.id + ": unknown kind '" + kind + "'");
  }
  c.text = j.value("text", std::string());
  if (j.contains("predicate") && !j.at("predicate").is_null()) {
    c.predicate = predicate_from_json(j.at("predicate"));
  }
  if (j.contains("inherits") && !j.at("inherits").is_null()) {
    c.inherits = j.at("inherits").get<std::string>();
  }
  return c;
}

inline Json to_json(const Contract& c) {
  Json j;
  j["responsibility"] = c.responsibility;
  j["function"] = c.function;
  j["inputs"] = c.inputs;
  j["outputs"] = c.outputs;
  j["assumptions"] = Json::array();
  for (const auto& a : c.assumptions) j["assumptions"].push_back(to_json(a));
  j["guarantees"] = Json::array();
  for (const auto& g : c.guarantees) j["guarantees"].push_back(to_json(g));
  return j;
}

inline Contract contract_from_json(const Json& j) {
  Contract c;
  c.responsibility = j.value("responsibility", std::string());
  c.function = j.value("function", std::string());
  c.inputs = j.value("inputs", std::vector<std::string>{});
  c.outputs = j.value("outputs", std::vector<std::string>{});
  for (const auto& a : j.value("assumptions", Json::array())) {
    c.assumptions.push_back(clause_from_json(a));
  }
  for (const auto& g : j.value("guarantees", Json::array())) {
    c.guarantees.push_back(clause_from_json(g));
  }
  return c;
}

inline Json to_json(const OddRecord& odd) {
  Json j;
  j["environment"] = Json::array();
  for (const auto& d : odd.environment) {
    j["environment"].push_back(
        Json{{"name", d.name}, {"unit", d.unit}, {"lower", d.lower}, {"upper", d.upper}});
  }
  Json defaults;
  defaults["path"] = odd.path;
  defaults["route_id"] = odd.route_id;
  defaults["v_max_mps"] = odd.v_max_mps;
  defaults["dv_mps"] = odd.dv_mps;
  defaults["duration_s"] = odd.duration_s;
  defaults["dt_s"] = odd.dt_s;
  defaults["control_period_s"] = odd.control_period_s;
  defaults["mpcs_margin_m"] = odd.mpcs_margin_m;
  defaults["tau_s"] = odd.tau_s;
  defaults["dp_disturbance_speed"] = odd.dp_disturbance_speed;
  defaults["dp_disturbance_cross"] = odd.dp_disturbance_cross;
  auto acc = [](const AccuracySet& a) {
    return Json{{"pos_m", a.pos_m},
                {"speed_mps", a.speed_mps},
                {"course_rad", a.course_rad},
                {"dim_m", a.dim_m}};
  };
  defaults["accuracies"] = Json{{"own", acc(odd.own_accuracy)}, {"obstacle", acc(odd.obstacle_accuracy)}};
  defaults["obstacle_dimensions_m"] = odd.obstacle_dimensions_m;
  j["defaults"] = defaults;
  return j;
}

inline OddRecord odd_from_json(const Json& j) {
  OddRecord odd;
  for (const auto& d : j.value("environment", Json::array())) {
    odd.environment.push_back({d.at("name").get<std::string>(), d.value("unit", std::string()),
                               d.at("lower").get<double>(), d.at("upper").get<double>()});
  }
  const Json defaults = j.value("defaults", Json::object());
  if (defaults.contains("path")) {
    odd.path = defaults.at("path").get<std::vector<std::array<double, 2>>>();
  }
  odd.route_id = defaults.value("route_id", std::string());
  odd.v_max_mps = defaults.value("v_max_mps", odd.v_max_mps);
  odd.dv_mps = defaults.value("dv_mps", odd.dv_mps);
  odd.duration_s = defaults.value("duration_s", odd.duration_s);
  odd.dt_s = defaults.value("dt_s", odd.dt_s);
  odd.control_period_s = defaults.value("control_period_s", odd.control_period_s);
  odd.mpcs_margin_m = defaults.value("mpcs_margin_m", odd.mpcs_margin_m);
  odd.tau_s = defaults.value("tau_s", odd.tau_s);
  odd.dp_disturbance_speed = defaults.value("dp_disturbance_speed", odd.dp_disturbance_speed);
  odd.dp_disturbance_cross = defaults.value("dp_disturbance_cross", odd.dp_disturbance_cross);
  auto acc = [](const Json& a, AccuracySet& out) {
    out.pos_m = a.value("pos_m", 0.0);
    out.speed_mps = a.value("speed_mps", 0.0);
    out.course_rad = a.value("course_rad", 0.0);
    out.dim_m = a.value("dim_m", 0.0);
  };
  if (defaults.contains("accuracies")) {
    acc(defaults.at("accuracies").value("own", Json::object()), odd.own_accuracy);
    acc(defaults.at("accuracies").value("obstacle", Json::object()), odd.obstacle_accuracy);
  }
  if (defaults.contains("obstacle_dimensions_m")) {
    odd.obstacle_dimensions_m = defaults.at("obstacle_dimensions_m").get<std::array<double, 2>>();
  }
  return odd;
}

inline Json component_to_json(const Component& c) {
  Json j;
  j["id"] = c.id;
  j["kind"] = to_string(c.kind);
  j["contract"] = to_json(c.contract);
  if (!c.children.empty()) {
    j["children"] = Json::array();
    for (const auto& child : c.children) j["children"].push_back(component_to_json(child));
  }
  if (c.odd) j["odd"] = to_json(*c.odd);
  if (c.responsibility_split) {
    Json split = Json::object();
    for (const auto& [owner, ids] : c.responsibility_split->owner_guarantees) split[owner] = ids;
    j["responsibility_split"] = split;
  }
  if (!c.assurance_context.empty()) j["assurance_context"] = c.assurance_context;
  return j;
}

inline Component component_from_json(const Json& j) {
  Component c;
  c.id = j.at("id").get<std::string>();
  c.kind = component_kind_from(j.at("kind").get<std::string>());
  c.contract = contract_from_json(j.value("contract", Json::object()));
  for (const auto& child : j.value("children", Json::array())) {
    c.children.push_back(component_from_json(child));
  }
  if (j.contains("odd") && !j.at("odd").is_null()) c.odd = odd_from_json(j.at("odd"));
  if (j.contains("responsibility_split") && !j.at("responsibility_split").is_null()) {
    ResponsibilitySplit split;
    for (const auto& [owner, ids] : j.at("responsibility_split").items()) {
      split.owner_guarantees[owner] = ids.get<std::vector<std::string>>();
    }
    c.responsibility_split = split;
  }
  c.assurance_context = j.value("assurance_context", std::string());
  return c;
}

// ---------------------------------------------------------------------------
// Whole model files: {"schema", "composite", "components", "links"}
// The composite's direct children live under the top-level "components" key.
// ---------------------------------------------------------------------------

inline Json to_json(const SystemModel& model) {
  Json j;
  j["schema"] = kModelSchema;
  Json composite = component_to_json(model.composite);
  composite.erase("children");
  j["composite"] = composite;
  j["components"] = Json::array();
  for (const auto& child : model.composite.children) {
    j["components"].push_back(component_to_json(child));
  }
  j["links"] = Json::array();
  for (const auto& link : model.links) {
    Json l;
    l["consumer"] = link.consumer_clause;
    l["provider"] = link.provider_clause;
    l["risk_source"] = link.risk_source ? Json(*link.risk_source) : Json(nullptr);
    if (!link.note.empty()) l["note"] = link.note;
    j["links"].push_back(l);
  }
  return j;
}

inline SystemModel model_from_json(const Json& j) {
  SystemModel model;
  if (j.value("schema", std::string(kModelSchema)) != kModelSchema) {
    throw Error("unsupported model schema '" + j.value("schema", std::string()) + "'");
  }
  model.composite = component_from_json(j.at("composite"));
  for (const auto& child : j.value("components", Json::array())) {
    model.composite.children.push_back(component_from_json(child));
  }
  for (const auto& l : j.value("links", Json::array())) {
    DependencyLink link;
    link.consumer_clause = l.at("consumer").get<std::string>();
    link.provider_clause = l.at("provider").get<std::string>();
    if (l.contains("risk_source") && !l.at("risk_source").is_null()) {
      link.risk_source = l.at("risk_source").get<int>();
    }
    link.note = l.value("note", std::string());
    model.links.push_back(link);
  }
  return model;
}

inline Json to_json(const CausalFactorRecord& cf) {
  Json j;
  j["id"] = cf.id;
  j["unsafe_control_action"] = cf.unsafe_control_action;
  j["scenario"] = cf.scenario;
  j["rs_type"] = cf.rs_type;
  j["target_decision"] = cf.target_decision;
  j["realized_by"] = cf.realized_by;
  return j;
}

inline CausalFactorRecord causal_factor_from_json(const Json& j) {
  CausalFactorRecord cf;
  cf.id = j.at("id").get<std::string>();
  cf.unsafe_control_action = j.value("unsafe_control_action", std::string());
  cf.scenario = j.value("scenario", std::string());
  cf.rs_type = j.at("rs_type").get<int>();
  cf.target_decision = j.at("target_decision").get<std::string>();
  cf.realized_by = j.value("realized_by", std::vector<std::string>{});
  return cf;
}

inline std::vector<CausalFactorRecord> factors_from_json(const Json& j) {
  std::vector<CausalFactorRecord> out;
  const Json& list = j.is_array() ? j : j.at("factors");
  for (const auto& f : list) out.push_back(causal_factor_from_json(f));
  return out;
}

// ---------------------------------------------------------------------------
// File helpers
// ---------------------------------------------------------------------------

inline Json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  // Exceptions from parse() carry the byte offset of the failure.
  return Json::parse(in);
}

inline SystemModel load_model(const std::string& path) {
  return model_from_json(parse_json_file(path));
}

inline std::vector<CausalFactorRecord> load_factors(const std::string& path) {
  return factors_from_json(parse_json_file(path));
}

}  // namespace ada
