#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "ada/discharge.hpp"
#include "ada/model.hpp"

namespace ada {

namespace detail {

inline bool is_accuracy_predicate(const PredicateSpec& p) {
  return std::holds_alternative<StateErrorBound>(p) || std::holds_alternative<TrackingBound>(p);
}

inline bool control_type(const Component& composite) {
  return std::any_of(composite.children.begin(), composite.children.end(), [](const Component& c) {
    return c.kind == ComponentKind::Decision || c.kind == ComponentKind::Sitaw ||
           c.kind == ComponentKind::Action;
  });
}

}  // namespace detail

// Checks that responsibility delegation inside each control-type composite is
// well formed: a single responsible Decision child (or a declared split),
// composite guarantees carried by a Decision guarantee, accuracy-qualified
// SITAW/Action guarantees, and Decision assumptions that actually reference
// each sibling accuracy promise.
inline std::vector<Finding> check_responsibility_structure(const SystemModel& model) {
  std::vector<Finding> out;

  std::vector<const Component*> composites;
  {
    std::vector<const Component*> all;
    detail::collect_components(model.composite, all);
    for (const auto* c : all) {
      if (c->kind == ComponentKind::Composite) composites.push_back(c);
    }
  }

  for (const auto* composite : composites) {
    if (!detail::control_type(*composite)) continue;

    std::vector<const Component*> decisions;
    for (const auto& child : composite->children) {
      if (child.kind == ComponentKind::Decision) decisions.push_back(&child);
    }
    if (decisions.empty()) {
      out.push_back({"no decision component", composite->id,
                     "control composite has no Decision child to carry its responsibility"});
    } else if (decisions.size() > 1 && !composite->responsibility_split) {
      out.push_back({"shared responsibility undeclared", composite->id,
                     "multiple Decision children require a declared responsibility split"});
    }

    for (const auto& g : composite->contract.guarantees) {
      bool inherited = false;
      for (const auto* d : decisions) {
        for (const auto& dg : d->contract.guarantees) {
          if (dg.inherits && *dg.inherits == g.id) inherited = true;
        }
      }
      if (!inherited) {
        out.push_back({"guarantee not inherited", g.id,
                       "no Decision child guarantee inherits this composite guarantee"});
      }
    }

    // Accuracy qualification on delegated capabilities, and back-references
    // from the Decision contracts. A Decision cannot account for a limited
    // capability its assumptions never mention.
    for (const auto& child : composite->children) {
      if (child.kind != ComponentKind::Sitaw && child.kind != ComponentKind::Action) continue;
      for (const auto& g : child.contract.guarantees) {
        if (!g.predicate || !detail::is_accuracy_predicate(*g.predicate)) {
          out.push_back({"guarantee lacks accuracy", g.id,
                         std::string(to_string(child.kind)) +
                             " guarantee carries no accuracy-qualified predicate"});
          continue;
        }
        bool referenced = false;
        for (const auto* d : decisions) {
          for (const auto& a : d->contract.assumptions) {
            const auto* link = detail::link_for(model, a.id);
            if (link && link->provider_clause == g.id) referenced = true;
            if (!link && a.predicate && entails(g, a)) referenced = true;
          }
        }
        if (!referenced) {
          out.push_back({"accuracy guarantee unreferenced", g.id,
                         "no Decision assumption accounts for this capability bound"});
        }
      }
    }
  }

  return out;
}

// ---------------------------------------------------------------------------
// Clause stubs from causal factors
// ---------------------------------------------------------------------------

enum class StubKind { AssumptionStub, GuaranteeStub, SubIdentificationMarker };

inline const char* to_string(StubKind k) {
  switch (k) {
    case StubKind::AssumptionStub: return "assumption-stub";
    case StubKind::GuaranteeStub: return "guarantee-stub";
    case StubKind::SubIdentificationMarker: return "sub-identification";
  }
  return "?";
}

struct ClauseStub {
  StubKind kind = StubKind::AssumptionStub;
  std::string target_component;
  std::string proposed_id;  // empty for markers
  std::string text;
  std::string causal_factor;  // originating record id
};

namespace detail {

inline const Component* find_sibling_of_kind(const SystemModel& model,
                                             const std::string& decision_id,
                                             ComponentKind kind) {
  std::vector<const Component*> all;
  collect_components(model.composite, all);
  for (const auto* composite : all) {
    if (composite->kind != ComponentKind::Composite) continue;
    bool holds_target = false;
    for (const auto& child : composite->children) {
      if (child.id == decision_id) holds_target = true;
    }
    if (!holds_target) continue;
    for (const auto& child : composite->children) {
      if (child.kind == kind) return &child;
    }
  }
  return nullptr;
}

inline std::string next_clause_id(const Component& c, ClauseKind kind) {
  const auto& list = kind == ClauseKind::Assumption ? c.contract.assumptions : c.contract.guarantees;
  return c.id + "." + (kind == ClauseKind::Assumption ? "A" : "G") +
         std::to_string(list.size() + 1);
}

}  // namespace detail

// Maps a causal factor onto contract clause stubs by its risk-source type:
//   1 -> one assumption on the Decision component (higher-level control input)
//   2 -> marker only, the cause sits inside the Decision implementation
//   3 -> paired Decision assumption + sibling SITAW guarantee
//   4 -> paired Decision assumption + sibling Action guarantee, plus a marker
//        because the capability cause needs its own identification pass
// Stubs carry the scenario text; merging them into the model stays a manual
// step.
inline std::vector<ClauseStub> derive_clause_stubs(const CausalFactorRecord& cf,
                                                   const SystemModel& model) {
  {
    auto findings = validate_causal_factor(cf, model);
    if (!findings.empty()) throw Error("invalid causal factor: " + findings.front().to_string());
  }
  const Component& decision = *model.find_component(cf.target_decision);

  std::vector<ClauseStub> out;
  auto assumption_stub = [&](const std::string& text) {
    out.push_back({StubKind::AssumptionStub, decision.id,
                   detail::next_clause_id(decision, ClauseKind::Assumption), text, cf.id});
  };

  switch (cf.rs_type) {
    case 1:
      assumption_stub("Assumes the control input risk is mitigated upstream: " + cf.scenario);
      break;
    case 2:
      out.push_back({StubKind::SubIdentificationMarker, decision.id, "",
                     "requires sub-identification of " + decision.id, cf.id});
      break;
    case 3: {
      const auto* sitaw = detail::find_sibling_of_kind(model, decision.id, ComponentKind::Sitaw);
      if (!sitaw) throw Error("causal factor " + cf.id + ": no sibling SITAW component");
      assumption_stub("Assumes belief inputs stay within agreed accuracy despite: " + cf.scenario);
      out.push_back({StubKind::GuaranteeStub, sitaw->id,
                     detail::next_clause_id(*sitaw, ClauseKind::Guarantee),
                     "Guarantees belief accuracy covering: " + cf.scenario, cf.id});
      break;
    }
    case 4: {
      const auto* action = detail::find_sibling_of_kind(model, decision.id, ComponentKind::Action);
      if (!action) throw Error("causal factor " + cf.id + ": no sibling Action component");
      assumption_stub("Assumes actuation capability stays within agreed accuracy despite: " +
                      cf.scenario);
      out.push_back({StubKind::GuaranteeStub, action->id,
                     detail::next_clause_id(*action, ClauseKind::Guarantee),
                     "Guarantees actuation capability covering: " + cf.scenario, cf.id});
      out.push_back({StubKind::SubIdentificationMarker, action->id, "",
                     "requires sub-identification of " + action->id, cf.id});
      break;
    }
    default:
      throw Error("causal factor " + cf.id + ": rs_type out of range");
  }
  return out;
}

// Clause stubs a causal factor demands, by type. Markers are not clauses.
inline int clause_stub_count(int rs_type) {
  switch (rs_type) {
    case 1: return 1;
    case 2: return 0;
    case 3: return 2;
    case 4: return 2;
    default: return 0;
  }
}

struct CoverageRow {
  std::string component;
  int rs_type = 0;
  int count = 0;    // causal factors recorded
  int pending = 0;  // derived clause stubs not yet realized in the model
};

struct CoverageTable {
  std::vector<CoverageRow> rows;  // ordered by component id, then rs type

  std::string to_csv() const {
    std::string out = "component,rs_type,count,pending\n";
    for (const auto& r : rows) {
      out += r.component + "," + std::to_string(r.rs_type) + "," + std::to_string(r.count) +
             "," + std::to_string(r.pending) + "\n";
    }
    return out;
  }
};

// Traceability: per Decision component, how many causal factors of each risk
// class are on record and how many of their clause stubs still await merging.
// A stub counts as realized only when the record names a resolvable clause in
// realized_by.
inline CoverageTable risk_source_coverage(const SystemModel& model,
                                          const std::vector<CausalFactorRecord>& cfs) {
  std::map<std::pair<std::string, int>, CoverageRow> rows;

  std::vector<const Component*> all;
  detail::collect_components(model.composite, all);
  for (const auto* c : all) {
    if (c->kind != ComponentKind::Decision) continue;
    for (int rs = 1; rs <= 4; ++rs) {
      rows[{c->id, rs}] = {c->id, rs, 0, 0};
    }
  }

  for (const auto& cf : cfs) {
    auto it = rows.find({cf.target_decision, cf.rs_type});
    if (it == rows.end()) {
      // Unknown target or type: surface as its own row rather than dropping.
      it = rows.emplace(std::make_pair(cf.target_decision, cf.rs_type),
                        CoverageRow{cf.target_decision, cf.rs_type, 0, 0})
               .first;
    }
    it->second.count += 1;
    int realized = 0;
    for (const auto& clause_id : cf.realized_by) {
      if (model.find_clause(clause_id)) realized += 1;
    }
    it->second.pending += std::max(0, clause_stub_count(cf.rs_type) - realized);
  }

  CoverageTable table;
  for (auto& [key, row] : rows) table.rows.push_back(row);
  return table;
}

}  // namespace ada
