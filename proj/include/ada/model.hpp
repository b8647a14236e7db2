#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ada/contract.hpp"

namespace ada {

// One explicit discharge edge: the consumer assumption is satisfied by the
// provider guarantee. risk_source records which dependency class on the
// control structure the edge mitigates (1 control input, 2 decision
// implementation, 3 situational-awareness input, 4 action capability).
struct DependencyLink {
  std::string consumer_clause;  // assumption id
  std::string provider_clause;  // guarantee id
  std::optional<int> risk_source;  // 1..4
  std::string note;                // free text, e.g. why the link is explicit
};

// Typed bounds of the operating area plus the nominal simulation
// configuration. Lives on a composite; campaign generation reads the
// environment dimensions, scenario construction reads the defaults.
struct OddDimension {
  std::string name;
  std::string unit;
  double lower = 0.0;
  double upper = 0.0;
};

struct AccuracySet {
  double pos_m = 0.0;
  double speed_mps = 0.0;
  double course_rad = 0.0;
  double dim_m = 0.0;
};

struct OddRecord {
  std::vector<OddDimension> environment;
  // Nominal transit configuration; values not fixed by any contract clause.
  std::vector<std::array<double, 2>> path;  // waypoints (east, north), metres
  std::string route_id;
  double v_max_mps = 2.0;
  double dv_mps = 0.2;
  double duration_s = 300.0;
  double dt_s = 0.1;
  double control_period_s = 1.0;
  double mpcs_margin_m = 50.0;
  double tau_s = 2.0;
  double dp_disturbance_speed = 0.02;  // m/s^2 amplitude on the speed lag
  double dp_disturbance_cross = 0.05;  // m/s amplitude of cross-track drift
  AccuracySet own_accuracy;
  AccuracySet obstacle_accuracy;
  std::array<double, 2> obstacle_dimensions_m = {6.0, 2.5};  // length, beam
};

// Declared ownership of composite guarantees when several Decision children
// share the overall responsibility.
struct ResponsibilitySplit {
  std::map<std::string, std::vector<std::string>> owner_guarantees;  // decision id -> guarantee ids
};

struct Component {
  std::string id;
  ComponentKind kind = ComponentKind::Decision;
  Contract contract;
  std::vector<Component> children;  // Composite only
  std::optional<OddRecord> odd;     // Composite only
  std::optional<ResponsibilitySplit> responsibility_split;
  std::string assurance_context;    // "in-context" | "out-of-context" | ""
};

struct SystemModel {
  Component composite;  // root of the component tree
  std::vector<DependencyLink> links;

  const Component* find_component(const std::string& id) const {
    return find_in(composite, id);
  }

  struct ClauseRef {
    const Component* component = nullptr;
    const Clause* clause = nullptr;
    explicit operator bool() const { return clause != nullptr; }
  };

  ClauseRef find_clause(const std::string& id) const { return find_clause_in(composite, id); }

 private:
  static const Component* find_in(const Component& node, const std::string& id) {
    if (node.id == id) return &node;
    for (const auto& child : node.children) {
      if (const auto* hit = find_in(child, id)) return hit;
    }
    return nullptr;
  }

  static ClauseRef find_clause_in(const Component& node, const std::string& id) {
    for (const auto& a : node.contract.assumptions) {
      if (a.id == id) return {&node, &a};
    }
    for (const auto& g : node.contract.guarantees) {
      if (g.id == id) return {&node, &g};
    }
    for (const auto& child : node.children) {
      if (auto hit = find_clause_in(child, id)) return hit;
    }
    return {};
  }
};

// An unsafe-control scenario traced to one of the four dependency risk
// classes around a Decision component. realized_by lists the clause ids that
// implement the mitigation once the derived stubs have been merged into the
// contracts; it stays empty while the mitigation is pending.
struct CausalFactorRecord {
  std::string id;
  std::string unsafe_control_action;
  std::string scenario;
  int rs_type = 1;  // 1..4
  std::string target_decision;  // component id, must resolve to a Decision
  std::vector<std::string> realized_by;
};

namespace detail {

inline void collect_components(const Component& node, std::vector<const Component*>& out) {
  out.push_back(&node);
  for (const auto& child : node.children) collect_components(child, out);
}

inline void collect_clauses(const Component& node,
                            std::vector<std::pair<const Component*, const Clause*>>& out) {
  for (const auto& a : node.contract.assumptions) out.emplace_back(&node, &a);
  for (const auto& g : node.contract.guarantees) out.emplace_back(&node, &g);
  for (const auto& child : node.children) collect_clauses(child, out);
}

}  // namespace detail

// Structural validation of the whole tree: unique ids, composite/leaf child
// rules, clause id prefixes, link resolution, and per-contract template
// checks. Models must pass this before discharge or refinement analysis.
inline std::vector<Finding> validate_model(const SystemModel& model) {
  std::vector<Finding> out;

  std::vector<const Component*> components;
  detail::collect_components(model.composite, components);

  std::set<std::string> component_ids;
  for (const auto* c : components) {
    if (!component_ids.insert(c->id).second) {
      out.push_back({"duplicate id", c->id, "component id reused in tree"});
    }
    if (c->kind == ComponentKind::Composite) {
      if (c->children.empty()) {
        out.push_back({"empty composite", c->id, "Composite must have at least one child"});
      }
    } else if (!c->children.empty()) {
      out.push_back({"unexpected children", c->id,
                     std::string(to_string(c->kind)) + " component cannot have children"});
    }
    auto contract_findings = validate_contract(c->contract, c->kind);
    for (auto& f : contract_findings) {
      if (f.subject.empty()) f.subject = c->id;
      out.push_back(std::move(f));
    }
    // Clause ids are scoped by the owning component name.
    for (const auto* list : {&c->contract.assumptions, &c->contract.guarantees}) {
      for (const auto& cl : *list) {
        const auto dot = cl.id.rfind('.');
        if (dot != std::string::npos && cl.id.substr(0, dot) != c->id) {
          out.push_back({"foreign clause id", cl.id, "clause id not prefixed by component " + c->id});
        }
      }
    }
  }

  std::vector<std::pair<const Component*, const Clause*>> clauses;
  detail::collect_clauses(model.composite, clauses);
  std::set<std::string> clause_ids;
  for (const auto& [comp, cl] : clauses) {
    if (!clause_ids.insert(cl->id).second) {
      out.push_back({"duplicate id", cl->id, "clause id reused in model"});
    }
  }
  for (const auto& [comp, cl] : clauses) {
    if (cl->inherits && !clause_ids.count(*cl->inherits)) {
      out.push_back({"dangling inheritance", cl->id, "inherited guarantee " + *cl->inherits + " not found"});
    }
  }

  for (const auto& link : model.links) {
    const auto consumer = model.find_clause(link.consumer_clause);
    const auto provider = model.find_clause(link.provider_clause);
    if (!consumer) {
      out.push_back({"dangling link", link.consumer_clause, "consumer clause not found"});
      continue;
    }
    if (!provider) {
      out.push_back({"dangling link", link.provider_clause, "provider clause not found"});
      continue;
    }
    if (consumer.clause->kind != ClauseKind::Assumption) {
      out.push_back({"link kind", link.consumer_clause, "link consumer must be an assumption"});
    }
    if (provider.clause->kind != ClauseKind::Guarantee) {
      out.push_back({"link kind", link.provider_clause, "link provider must be a guarantee"});
    }
    if (link.risk_source && (*link.risk_source < 1 || *link.risk_source > 4)) {
      out.push_back({"invalid risk source", link.consumer_clause, "risk_source must be 1..4"});
    }
  }

  return out;
}

inline std::vector<Finding> validate_causal_factor(const CausalFactorRecord& cf,
                                                   const SystemModel& model) {
  std::vector<Finding> out;
  if (cf.rs_type < 1 || cf.rs_type > 4) {
    out.push_back({"invalid rs_type", cf.id, "rs_type must be 1..4"});
  }
  const auto* target = model.find_component(cf.target_decision);
  if (!target) {
    out.push_back({"unresolvable target", cf.id, "component " + cf.target_decision + " not found"});
  } else if (target->kind != ComponentKind::Decision) {
    out.push_back({"invalid target", cf.id,
                   "target " + cf.target_decision + " is " + to_string(target->kind) +
                       ", causal factors attach to Decision components"});
  }
  for (const auto& clause_id : cf.realized_by) {
    if (!model.find_clause(clause_id)) {
      out.push_back({"dangling realization", cf.id, "clause " + clause_id + " not found"});
    }
  }
  return out;
}

}  // namespace ada
