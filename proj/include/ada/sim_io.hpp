#pragma once

#include <cstdio>
#include <string>

#include <json.hpp>

#include "ada/model_io.hpp"
#include "ada/sim.hpp"

namespace ada {

inline constexpr const char* kScenarioSchema = "ada-scenario/1";
inline constexpr const char* kTraceSchema = "ada-trace/1";

// Infinity does not exist in JSON; the obstacle-free sentinel crosses the
// wire as null.
inline Json json_metric(double v) {
  return std::isfinite(v) ? Json(v) : Json(nullptr);
}

inline double metric_from_json(const Json& j) {
  return j.is_null() ? kInfSeparation : j.get<double>();
}

inline Json to_json(const Vec2& v) { return Json::array({v.east, v.north}); }

inline Vec2 vec2_from_json(const Json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

inline Json to_json(const VesselState& s) {
  return Json{{"position", to_json(s.position)},
              {"speed_mps", s.speed},
              {"heading_rad", s.heading},
              {"course_rad", s.course}};
}

inline VesselState vessel_state_from_json(const Json& j) {
  VesselState s;
  s.position = vec2_from_json(j.at("position"));
  s.speed = j.at("speed_mps").get<double>();
  s.heading = j.at("heading_rad").get<double>();
  s.course = j.at("course_rad").get<double>();
  return s;
}

inline Json accuracy_to_json(const AccuracySet& a) {
  return Json{{"pos_m", a.pos_m},
              {"speed_mps", a.speed_mps},
              {"course_rad", a.course_rad},
              {"dim_m", a.dim_m}};
}

inline AccuracySet accuracy_from_json(const Json& j) {
  return {j.value("pos_m", 0.0), j.value("speed_mps", 0.0), j.value("course_rad", 0.0),
          j.value("dim_m", 0.0)};
}

inline Json to_json(const ScenarioParams& p) {
  Json j;
  j["schema"] = kScenarioSchema;
  j["scenario_id"] = p.scenario_id;
  j["route_id"] = p.route_id;
  j["path"] = Json::array({to_json(p.path[0]), to_json(p.path[1])});
  j["v_max_mps"] = p.v_max_mps;
  j["dv_mps"] = p.dv_mps;
  j["d_min_m"] = p.d_min_m;
  j["duration_s"] = p.duration_s;
  j["dt_s"] = p.dt_s;
  j["control_period_s"] = p.control_period_s;
  j["horizon_s"] = p.horizon_s;
  j["mpcs_window_s"] = p.mpcs_window_s;
  j["mpcs_margin_m"] = p.mpcs_margin_m;
  j["dp"] = Json{{"tau_s", p.dp.tau_s},
                 {"eps_pos_m", p.dp.eps_pos_m},
                 {"eps_speed_mps", p.dp.eps_speed_mps},
                 {"settle_time_s", p.dp.settle_time_s},
                 {"disturbance_speed", p.dp.disturbance_speed},
                 {"disturbance_cross", p.dp.disturbance_cross}};
  j["accuracies"] =
      Json{{"own", accuracy_to_json(p.own_accuracy)}, {"obstacle", accuracy_to_json(p.obstacle_accuracy)}};
  j["own_pos_noise_m"] = p.own_pos_noise_m;
  j["obstacle_pos_noise_m"] = p.obstacle_pos_noise_m;
  j["noise_mode"] = p.noise_mode.violating
                        ? Json{{"mode", "violating"}, {"scale", p.noise_mode.scale}}
                        : Json{{"mode", "bounded"}};
  j["mpcs_policy"] = to_string(p.mpcs_policy);
  j["obstacles"] = Json::array();
  for (const auto& o : p.obstacles) {
    Json jo;
    jo["id"] = o.id;
    jo["range_m"] = o.range_m;
    jo["bearing_rad"] = o.bearing_rad;
    jo["speed_mps"] = o.speed_mps;
    jo["course_rad"] = o.course_rad;
    jo["dimensions_m"] = o.dimensions_m;
    jo["behaviour"] = o.behaviour.enabled
                          ? Json{{"model", "maneuver"},
                                 {"turn_time_s", o.behaviour.turn_time_s},
                                 {"new_course_rad", o.behaviour.new_course_rad}}
                          : Json{{"model", "constant_velocity"}};
    j["obstacles"].push_back(jo);
  }
  j["seed"] = p.seed;
  return j;
}

inline ScenarioParams scenario_from_json(const Json& j) {
  ScenarioParams p;
  p.scenario_id = j.value("scenario_id", std::string("scenario"));
  p.route_id = j.value("route_id", std::string());
  p.path = {vec2_from_json(j.at("path").at(0)), vec2_from_json(j.at("path").at(1))};
  p.v_max_mps = j.value("v_max_mps", p.v_max_mps);
  p.dv_mps = j.value("dv_mps", p.dv_mps);
  p.d_min_m = j.value("d_min_m", p.d_min_m);
  p.duration_s = j.value("duration_s", p.duration_s);
  p.dt_s = j.value("dt_s", p.dt_s);
  p.control_period_s = j.value("control_period_s", p.control_period_s);
  p.horizon_s = j.value("horizon_s", p.horizon_s);
  p.mpcs_window_s = j.value("mpcs_window_s", p.mpcs_window_s);
  p.mpcs_margin_m = j.value("mpcs_margin_m", p.mpcs_margin_m);
  if (j.contains("dp")) {
    const Json& d = j.at("dp");
    p.dp.tau_s = d.value("tau_s", p.dp.tau_s);
    p.dp.eps_pos_m = d.value("eps_pos_m", p.dp.eps_pos_m);
    p.dp.eps_speed_mps = d.value("eps_speed_mps", p.dp.eps_speed_mps);
    p.dp.settle_time_s = d.value("settle_time_s", p.dp.settle_time_s);
    p.dp.disturbance_speed = d.value("disturbance_speed", p.dp.disturbance_speed);
    p.dp.disturbance_cross = d.value("disturbance_cross", p.dp.disturbance_cross);
  }
  if (j.contains("accuracies")) {
    p.own_accuracy = accuracy_from_json(j.at("accuracies").value("own", Json::object()));
    p.obstacle_accuracy = accuracy_from_json(j.at("accuracies").value("obstacle", Json::object()));
  }
  p.own_pos_noise_m = j.value("own_pos_noise_m", -1.0);
  p.obstacle_pos_noise_m = j.value("obstacle_pos_noise_m", -1.0);
  if (j.contains("noise_mode")) {
    const Json& n = j.at("noise_mode");
    const std::string mode = n.value("mode", std::string("bounded"));
    if (mode == "violating") {
      p.noise_mode = {true, n.value("scale", 3.0)};
    } else if (mode == "bounded") {
      p.noise_mode = {false, 1.0};
    } else {
      throw Error("unknown noise mode '" + mode + "'");
    }
  }
  {
    const std::string policy = j.value("mpcs_policy", std::string("nominal"));
    if (policy == "nominal") {
      p.mpcs_policy = MpcsPolicy::Nominal;
    } else if (policy == "ignore_accuracy") {
      p.mpcs_policy = MpcsPolicy::IgnoreAccuracy;
    } else {
      throw Error("unknown mpcs policy '" + policy + "'");
    }
  }
  for (const auto& jo : j.value("obstacles", Json::array())) {
    ObstacleSpec o;
    o.id = jo.at("id").get<std::string>();
    o.range_m = jo.at("range_m").get<double>();
    o.bearing_rad = jo.at("bearing_rad").get<double>();
    o.speed_mps = jo.at("speed_mps").get<double>();
    o.course_rad = jo.at("course_rad").get<double>();
    if (jo.contains("dimensions_m")) {
      o.dimensions_m = jo.at("dimensions_m").get<std::array<double, 2>>();
    }
    if (jo.contains("behaviour")) {
      const Json& b = jo.at("behaviour");
      const std::string model = b.value("model", std::string("constant_velocity"));
      if (model == "maneuver") {
        o.behaviour = {true, b.at("turn_time_s").get<double>(),
                       b.at("new_course_rad").get<double>()};
      } else if (model != "constant_velocity") {
        throw Error("unknown behaviour model '" + model + "'");
      }
    }
    p.obstacles.push_back(o);
  }
  p.seed = j.value("seed", std::uint64_t{0});
  return p;
}

inline ScenarioParams load_scenario(const std::string& path) {
  return scenario_from_json(parse_json_file(path));
}

// ---------------------------------------------------------------------------
// Trace wire format: one header record, then one record per tick.
// ---------------------------------------------------------------------------

inline Json to_json(const ObjectEstimate& e) {
  return Json{{"state", to_json(e.state)}, {"dimensions_m", e.dimensions_m}};
}

inline ObjectEstimate estimate_from_json(const Json& j) {
  ObjectEstimate e;
  e.state = vessel_state_from_json(j.at("state"));
  e.dimensions_m = j.at("dimensions_m").get<std::array<double, 2>>();
  return e;
}

inline Json tick_to_json(const TickRecord& r) {
  Json j;
  j["type"] = "tick";
  j["i"] = r.index;
  j["t"] = r.t;
  j["own"] = Json{{"truth", to_json(r.own_truth)}, {"belief", to_json(r.own_belief)}};
  j["setpoint"] = Json{{"cmd_mps", r.setpoint.cmd_mps}, {"path_id", r.setpoint.path_id}};
  j["obstacles"] = Json::array();
  for (const auto& o : r.obstacles) {
    j["obstacles"].push_back(Json{{"truth", to_json(o.truth)},
                                  {"dimensions_m", o.true_dimensions_m},
                                  {"belief", to_json(o.belief)},
                                  {"separation_m", o.separation_m},
                                  {"believed_margin_m", o.believed_margin_m}});
  }
  j["sep_min_m"] = json_metric(r.sep_min_m);
  j["margin_m"] = json_metric(r.margin_m);
  return j;
}

inline TickRecord tick_from_json(const Json& j) {
  TickRecord r;
  r.index = j.at("i").get<int>();
  r.t = j.at("t").get<double>();
  r.own_truth = vessel_state_from_json(j.at("own").at("truth"));
  r.own_belief = estimate_from_json(j.at("own").at("belief"));
  r.setpoint = {j.at("setpoint").at("cmd_mps").get<double>(),
                j.at("setpoint").value("path_id", std::string())};
  for (const auto& jo : j.at("obstacles")) {
    ObstacleTickRecord o;
    o.truth = vessel_state_from_json(jo.at("truth"));
    o.true_dimensions_m = jo.at("dimensions_m").get<std::array<double, 2>>();
    o.belief = estimate_from_json(jo.at("belief"));
    o.separation_m = jo.at("separation_m").get<double>();
    o.believed_margin_m = jo.at("believed_margin_m").get<double>();
    r.obstacles.push_back(o);
  }
  r.sep_min_m = metric_from_json(j.at("sep_min_m"));
  r.margin_m = metric_from_json(j.at("margin_m"));
  return r;
}

inline std::string trace_to_ndjson(const Trace& trace) {
  std::string out;
  Json header;
  header["type"] = "header";
  header["schema"] = kTraceSchema;
  header["scenario"] = to_json(trace.params);
  header["min_separation_m"] = json_metric(trace.min_separation_m);
  header["min_margin_m"] = json_metric(trace.min_margin_m);
  header["final_progress_m"] = trace.final_progress_m;
  out += header.dump();
  out += '\n';
  for (const auto& tick : trace.ticks) {
    out += tick_to_json(tick).dump();
    out += '\n';
  }
  return out;
}

inline Trace trace_from_ndjson(const std::string& text) {
  Trace trace;
  std::size_t pos = 0;
  bool have_header = false;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;
    const Json j = Json::parse(line);
    const std::string type = j.value("type", std::string());
    if (type == "header") {
      trace.params = scenario_from_json(j.at("scenario"));
      trace.min_separation_m = metric_from_json(j.at("min_separation_m"));
      trace.min_margin_m = metric_from_json(j.at("min_margin_m"));
      trace.final_progress_m = j.value("final_progress_m", 0.0);
      have_header = true;
    } else if (type == "tick") {
      trace.ticks.push_back(tick_from_json(j));
    } else {
      throw Error("unknown trace record type '" + type + "'");
    }
  }
  if (!have_header) throw Error("trace stream has no header record");
  return trace;
}

// Compact per-tick summary. Infinite metrics print as "inf".
inline std::string trace_to_csv(const Trace& trace) {
  std::string out = "t,sep_min,margin,cmd_speed,own_east,own_north,own_speed\n";
  char buf[160];
  for (const auto& tick : trace.ticks) {
    auto metric = [](double v, char* dst, std::size_t n) {
      if (std::isfinite(v)) {
        std::snprintf(dst, n, "%.6g", v);
      } else {
        std::snprintf(dst, n, "inf");
      }
    };
    char sep[32], margin[32];
    metric(tick.sep_min_m, sep, sizeof sep);
    metric(tick.margin_m, margin, sizeof margin);
    std::snprintf(buf, sizeof buf, "%.6g,%s,%s,%.6g,%.6g,%.6g,%.6g\n", tick.t, sep, margin,
                  tick.setpoint.cmd_mps, tick.own_truth.position.east,
                  tick.own_truth.position.north, tick.own_truth.speed);
    out += buf;
  }
  return out;
}

}  // namespace ada
