#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ada {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A named rule violation. Checks return findings instead of throwing so a
// single pass can report everything that is wrong with a model.
struct Finding {
  std::string code;     // stable machine-readable rule name
  std::string subject;  // clause/component id the finding is about
  std::string message;

  std::string to_string() const { return subject + ": " + code + ": " + message; }
};

enum class ClauseKind { Assumption, Guarantee };

inline const char* to_string(ClauseKind k) {
  return k == ClauseKind::Assumption ? "assumption" : "guarantee";
}

enum class Signal { PositionM, SpeedMps, HeadingRad, CourseRad, DimensionsM };
enum class Subject { Own, Obstacle };

inline const char* to_string(Signal s) {
  switch (s) {
    case Signal::PositionM: return "position_m";
    case Signal::SpeedMps: return "speed_mps";
    case Signal::HeadingRad: return "heading_rad";
    case Signal::CourseRad: return "course_rad";
    case Signal::DimensionsM: return "dimensions_m";
  }
  return "?";
}

inline const char* to_string(Subject s) {
  return s == Subject::Own ? "own" : "obstacle";
}

// ---------------------------------------------------------------------------
// Predicate vocabulary. A clause either carries one of these machine-checkable
// predicates or stays informal (free text only). The closed set keeps
// entailment between clauses decidable.
// ---------------------------------------------------------------------------

// |estimate - truth| <= epsilon for one signal of one subject class.
struct StateErrorBound {
  Signal signal = Signal::PositionM;
  Subject subject = Subject::Obstacle;
  double epsilon = 0.0;  // metres, m/s or rad depending on signal
};

// True separation to every obstacle stays at or above d_min.
struct SeparationBound {
  double d_min = 0.0;  // metres, strictly positive
};

// Actuation accuracy: position within eps_pos of the commanded track and,
// once a command has been held for settle_time, speed within eps_speed of it.
struct TrackingBound {
  double eps_pos = 0.0;      // metres
  double eps_speed = 0.0;    // m/s
  double settle_time = 0.0;  // seconds
};

// The component was configured with this route and safety distance.
struct ConfigValid {
  std::string route_id;
  double d_min = 0.0;  // metres, strictly positive
};

// Every issued setpoint is admissible over the stated lookahead horizon.
struct SafeSetpointRule {
  double horizon_s = 0.0;
};

enum class BehaviourModel { ConstantVelocity };

// Obstacles in the operating area follow the model within the stated limits.
struct ObstacleBehaviour {
  BehaviourModel model = BehaviourModel::ConstantVelocity;
  double max_speed = 0.0;      // m/s
  double max_turn_rate = 0.0;  // rad/s
};

using PredicateSpec = std::variant<StateErrorBound, SeparationBound, TrackingBound,
                                   ConfigValid, SafeSetpointRule, ObstacleBehaviour>;

inline const char* variant_name(const PredicateSpec& p) {
  struct Namer {
    const char* operator()(const StateErrorBound&) const { return "state_error_bound"; }
    const char* operator()(const SeparationBound&) const { return "separation_bound"; }
    const char* operator()(const TrackingBound&) const { return "tracking_bound"; }
    const char* operator()(const ConfigValid&) const { return "config_valid"; }
    const char* operator()(const SafeSetpointRule&) const { return "safe_setpoint_rule"; }
    const char* operator()(const ObstacleBehaviour&) const { return "obstacle_behaviour"; }
  };
  return std::visit(Namer{}, p);
}

// Numeric sanity shared by load-time validation and validate_contract.
inline std::vector<Finding> validate_predicate(const PredicateSpec& p,
                                               const std::string& subject_id) {
  std::vector<Finding> out;
  auto bad = [&](const std::string& msg) {
    out.push_back({"invalid predicate", subject_id, msg});
  };
  auto finite_nonneg = [&](double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0) bad(std::string(name) + " must be finite and nonnegative");
  };
  if (const auto* s = std::get_if<StateErrorBound>(&p)) {
    finite_nonneg(s->epsilon, "epsilon");
  } else if (const auto* s = std::get_if<SeparationBound>(&p)) {
    if (!std::isfinite(s->d_min) || s->d_min <= 0.0) bad("d_min must be finite and > 0");
  } else if (const auto* t = std::get_if<TrackingBound>(&p)) {
    finite_nonneg(t->eps_pos, "eps_pos");
    finite_nonneg(t->eps_speed, "eps_speed");
    finite_nonneg(t->settle_time, "settle_time");
  } else if (const auto* c = std::get_if<ConfigValid>(&p)) {
    if (!std::isfinite(c->d_min) || c->d_min <= 0.0) bad("d_min must be finite and > 0");
    if (c->route_id.empty()) bad("route_id must be nonempty");
  } else if (const auto* r = std::get_if<SafeSetpointRule>(&p)) {
    finite_nonneg(r->horizon_s, "horizon_s");
  } else if (const auto* b = std::get_if<ObstacleBehaviour>(&p)) {
    finite_nonneg(b->max_speed, "max_speed");
    finite_nonneg(b->max_turn_rate, "max_turn_rate");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Clause and contract
// ---------------------------------------------------------------------------

struct Clause {
  std::string id;    // dotted "<component>.<A|G><index>", e.g. "MPCS.A2"
  ClauseKind kind = ClauseKind::Assumption;
  std::string text;  // prose form of the clause
  std::optional<PredicateSpec> predicate;
  // Guarantee-only: id of the parent composite guarantee whose responsibility
  // this clause takes over.
  std::optional<std::string> inherits;

  bool informal() const { return !predicate.has_value(); }
};

// Expected kind letter ("A"/"G") in the clause id, or '\0' if the id is not of
// the dotted component.kind+index form.
inline char id_kind_letter(const std::string& id) {
  const auto dot = id.rfind('.');
  if (dot == std::string::npos || dot + 1 >= id.size()) return '\0';
  const char c = id[dot + 1];
  return (c == 'A' || c == 'G') ? c : '\0';
}

struct Contract {
  std::string responsibility;
  std::string function;
  std::vector<std::string> inputs;   // named interface ports
  std::vector<std::string> outputs;  // named interface ports
  std::vector<Clause> assumptions;
  std::vector<Clause> guarantees;
};

enum class ComponentKind { Decision, Sitaw, Action, Resource, Composite, ExternalEntity };

inline const char* to_string(ComponentKind k) {
  switch (k) {
    case ComponentKind::Decision: return "Decision";
    case ComponentKind::Sitaw: return "SITAW";
    case ComponentKind::Action: return "Action";
    case ComponentKind::Resource: return "Resource";
    case ComponentKind::Composite: return "Composite";
    case ComponentKind::ExternalEntity: return "ExternalEntity";
  }
  return "?";
}

// Template well-formedness for one contract. Kind mismatches, malformed ids,
// bad predicate parameters and (for non-Resource components) an empty
// guarantee list are reported as findings, never thrown.
inline std::vector<Finding> validate_contract(const Contract& c,
                                              ComponentKind component_kind) {
  std::vector<Finding> out;
  auto check_clause = [&](const Clause& cl, ClauseKind expected) {
    if (cl.kind != expected) {
      out.push_back({"kind mismatch", cl.id,
                     std::string("clause listed under ") + to_string(expected) +
                         "s but has kind " + to_string(cl.kind)});
    } else if (const char letter = id_kind_letter(cl.id); letter == '\0') {
      out.push_back({"malformed id", cl.id, "expected <component>.<A|G><index>"});
    } else if ((letter == 'A') != (cl.kind == ClauseKind::Assumption)) {
      out.push_back({"kind mismatch", cl.id,
                     std::string("id letter disagrees with kind ") + to_string(cl.kind)});
    }
    if (cl.predicate) {
      auto fs = validate_predicate(*cl.predicate, cl.id);
      out.insert(out.end(), fs.begin(), fs.end());
    }
    if (cl.inherits && cl.kind != ClauseKind::Guarantee) {
      out.push_back({"invalid inheritance", cl.id, "only guarantees may inherit"});
    }
  };
  for (const auto& a : c.assumptions) check_clause(a, ClauseKind::Assumption);
  for (const auto& g : c.guarantees) check_clause(g, ClauseKind::Guarantee);
  if (c.guarantees.empty() && component_kind != ComponentKind::Resource) {
    out.push_back({"missing guarantee", "",
                   std::string(to_string(component_kind)) +
                       " component must provide at least one guarantee"});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Entailment
// ---------------------------------------------------------------------------

// Bound comparison per predicate variant: true when the provider promises at
// least as much as the consumer needs. Partial order; reflexive and
// transitive within a variant.
inline bool predicate_entails(const PredicateSpec& provider, const PredicateSpec& consumer) {
  if (provider.index() != consumer.index()) return false;
  if (const auto* p = std::get_if<StateErrorBound>(&provider)) {
    const auto& c = std::get<StateErrorBound>(consumer);
    return p->signal == c.signal && p->subject == c.subject && p->epsilon <= c.epsilon;
  }
  if (const auto* p = std::get_if<SeparationBound>(&provider)) {
    return p->d_min >= std::get<SeparationBound>(consumer).d_min;
  }
  if (const auto* p = std::get_if<TrackingBound>(&provider)) {
    const auto& c = std::get<TrackingBound>(consumer);
    return p->eps_pos <= c.eps_pos && p->eps_speed <= c.eps_speed &&
           p->settle_time <= c.settle_time;
  }
  if (const auto* p = std::get_if<ConfigValid>(&provider)) {
    const auto& c = std::get<ConfigValid>(consumer);
    // Configuration is an identity, not a bound: the consumer must be handed
    // exactly the route and distance it expects.
    return p->route_id == c.route_id && p->d_min == c.d_min;
  }
  if (const auto* p = std::get_if<SafeSetpointRule>(&provider)) {
    return p->horizon_s >= std::get<SafeSetpointRule>(consumer).horizon_s;
  }
  if (const auto* p = std::get_if<ObstacleBehaviour>(&provider)) {
    const auto& c = std::get<ObstacleBehaviour>(consumer);
    return p->model == c.model && p->max_speed <= c.max_speed &&
           p->max_turn_rate <= c.max_turn_rate;
  }
  return false;
}

// True iff the provider guarantee discharges the consumer assumption on
// predicate grounds alone. Informal clauses always yield false here; they are
// only discharged through an explicit dependency link.
inline bool entails(const Clause& provider, const Clause& consumer) {
  if (provider.kind != ClauseKind::Guarantee || consumer.kind != ClauseKind::Assumption) {
    throw Error("entails(" + provider.id + ", " + consumer.id +
                "): provider must be a guarantee and consumer an assumption");
  }
  if (!provider.predicate || !consumer.predicate) return false;
  return predicate_entails(*provider.predicate, *consumer.predicate);
}

}  // namespace ada
