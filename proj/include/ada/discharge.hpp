#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ada/model.hpp"

namespace ada {

enum class DischargeKind { DischargedBy, PromotedToParent, Undischarged };

inline const char* to_string(DischargeKind k) {
  switch (k) {
    case DischargeKind::DischargedBy: return "discharged-by";
    case DischargeKind::PromotedToParent: return "promoted-to-parent";
    case DischargeKind::Undischarged: return "undischarged";
  }
  return "?";
}

struct DischargeEntry {
  std::string assumption;   // internal assumption clause id
  DischargeKind kind = DischargeKind::Undischarged;
  std::string provider;     // guarantee id, or covering composite assumption when promoted
  bool via_link = false;    // resolved by an explicit dependency link
  std::string composite;    // scope the resolution happened in
};

// Resolution of every internal assumption in the tree, plus the findings
// (incompatible links, ambiguity) produced while building it. Total: each
// internal assumption appears exactly once.
struct DischargeMap {
  std::vector<DischargeEntry> entries;
  std::vector<Finding> findings;

  const DischargeEntry* find(const std::string& assumption_id) const {
    for (const auto& e : entries) {
      if (e.assumption == assumption_id) return &e;
    }
    return nullptr;
  }
};

namespace detail {

// Candidate provider guarantees for assumptions of `child`: guarantees of the
// sibling components under the same composite (a component cannot discharge
// its own assumptions).
inline std::vector<std::pair<const Component*, const Clause*>> sibling_guarantees(
    const Component& composite, const Component& child) {
  std::vector<std::pair<const Component*, const Clause*>> out;
  for (const auto& sibling : composite.children) {
    if (sibling.id == child.id) continue;
    for (const auto& g : sibling.contract.guarantees) out.emplace_back(&sibling, &g);
  }
  return out;
}

inline const DependencyLink* link_for(const SystemModel& model, const std::string& assumption_id) {
  for (const auto& link : model.links) {
    if (link.consumer_clause == assumption_id) return &link;
  }
  return nullptr;
}

inline void discharge_composite_scope(const SystemModel& model, const Component& composite,
                                      DischargeMap& map) {
  for (const auto& child : composite.children) {
    for (const auto& assumption : child.contract.assumptions) {
      DischargeEntry entry;
      entry.assumption = assumption.id;
      entry.composite = composite.id;

      if (const auto* link = link_for(model, assumption.id)) {
        // Explicit links take priority over any predicate search.
        const auto provider = model.find_clause(link->provider_clause);
        if (!provider) {
          map.findings.push_back({"dangling link", assumption.id,
                                  "provider " + link->provider_clause + " not found"});
        } else if (provider.clause->predicate && assumption.predicate &&
                   !entails(*provider.clause, assumption)) {
          map.findings.push_back(
              {"incompatible link", assumption.id,
               "linked provider " + provider.clause->id + " does not entail the assumption"});
        } else if (provider.component->id == composite.id &&
                   provider.clause->kind == ClauseKind::Assumption) {
          // A link onto a parent assumption is an explicit promotion; kept for
          // completeness, the usual promotion path is entailment below.
          entry.kind = DischargeKind::PromotedToParent;
          entry.provider = provider.clause->id;
          entry.via_link = true;
        } else {
          entry.kind = DischargeKind::DischargedBy;
          entry.provider = provider.clause->id;
          entry.via_link = true;
        }
        map.entries.push_back(entry);
        continue;
      }

      // Predicate entailment search among sibling guarantees. Two distinct
      // candidates with no explicit link is integration risk, not a choice to
      // make silently.
      std::vector<const Clause*> candidates;
      for (const auto& [sibling, guarantee] : sibling_guarantees(composite, child)) {
        if (!guarantee->predicate || !assumption.predicate) continue;
        if (entails(*guarantee, assumption)) candidates.push_back(guarantee);
      }
      if (candidates.size() == 1) {
        entry.kind = DischargeKind::DischargedBy;
        entry.provider = candidates.front()->id;
        map.entries.push_back(entry);
        continue;
      }
      if (candidates.size() > 1) {
        std::string names;
        for (const auto* c : candidates) names += (names.empty() ? "" : ", ") + c->id;
        map.findings.push_back({"ambiguous discharge", assumption.id,
                                "multiple candidate providers (" + names +
                                    ") and no explicit link"});
        map.entries.push_back(entry);  // left undischarged
        continue;
      }

      // No internal provider: the assumption can still be promoted when a
      // composite assumption covers it (the parent demands it from its own
      // environment).
      const Clause* covering = nullptr;
      for (const auto& parent_assumption : composite.contract.assumptions) {
        const bool covered =
            parent_assumption.predicate && assumption.predicate
                ? predicate_entails(*parent_assumption.predicate, *assumption.predicate)
                : false;
        if (covered) {
          covering = &parent_assumption;
          break;
        }
      }
      if (covering) {
        entry.kind = DischargeKind::PromotedToParent;
        entry.provider = covering->id;
      }
      map.entries.push_back(entry);
    }
    if (child.kind == ComponentKind::Composite) {
      discharge_composite_scope(model, child, map);
    }
  }
}

}  // namespace detail

// Resolves every internal assumption against explicit links first, then
// sibling-guarantee entailment, then promotion into the parent's assumption
// set. Deterministic and total over a structurally valid model.
inline DischargeMap build_discharge_map(const SystemModel& model) {
  DischargeMap map;
  detail::discharge_composite_scope(model, model.composite, map);
  return map;
}

struct InheritanceCheck {
  std::string composite_guarantee;
  std::vector<std::string> inheritors;  // Decision guarantees claiming it
  bool ok = false;                      // exactly one inheritor
};

struct RefinementReport {
  DischargeMap discharge;
  std::vector<std::string> promoted;  // internal assumptions promoted to parent scope
  std::vector<InheritanceCheck> inheritance;
  std::vector<std::vector<std::string>> cycles;  // clause ids along each explicit-link cycle
  std::vector<Finding> findings;
  bool passed = false;
};

namespace detail {

// Cycle scan over explicit links between informal clauses. Predicate-bearing
// clauses state standing bounds that hold across ticks, so mutual reliance
// between them composes; informal links are plain data-flow wiring, and a
// loop of those leaves no valid discharge order within one control tick.
inline std::vector<std::vector<std::string>> explicit_link_cycles(const SystemModel& model) {
  std::map<std::string, std::vector<const DependencyLink*>> edges;  // component -> outgoing links
  for (const auto& link : model.links) {
    const auto consumer = model.find_clause(link.consumer_clause);
    const auto provider = model.find_clause(link.provider_clause);
    if (!consumer || !provider) continue;
    if (provider.clause->kind != ClauseKind::Guarantee) continue;
    if (provider.component->id == consumer.component->id) continue;
    if (!consumer.clause->informal() || !provider.clause->informal()) continue;
    edges[consumer.component->id].push_back(&link);
  }

  std::vector<std::vector<std::string>> cycles;
  std::set<std::string> done;
  for (const auto& [start, _] : edges) {
    if (done.count(start)) continue;
    // DFS with the path of links taken.
    std::vector<std::pair<std::string, const DependencyLink*>> path;
    std::set<std::string> on_path;
    std::function<void(const std::string&)> dfs = [&](const std::string& comp) {
      on_path.insert(comp);
      auto it = edges.find(comp);
      if (it != edges.end()) {
        for (const auto* link : it->second) {
          const auto provider = model.find_clause(link->provider_clause);
          const std::string next = provider.component->id;
          if (on_path.count(next)) {
            // Collect the clause ids along the loop.
            std::vector<std::string> cycle;
            bool in_loop = false;
            for (const auto& [c, l] : path) {
              if (c == next) in_loop = true;
              if (in_loop && l) cycle.push_back(l->consumer_clause);
            }
            cycle.push_back(link->consumer_clause);
            cycles.push_back(cycle);
            continue;
          }
          if (done.count(next)) continue;
          path.emplace_back(next, link);
          dfs(next);
          path.pop_back();
        }
      }
      on_path.erase(comp);
      done.insert(comp);
    };
    path.emplace_back(start, nullptr);
    dfs(start);
    path.pop_back();
  }
  return cycles;
}

inline void inheritance_checks(const Component& composite, std::vector<InheritanceCheck>& out) {
  for (const auto& g : composite.contract.guarantees) {
    InheritanceCheck check;
    check.composite_guarantee = g.id;
    for (const auto& child : composite.children) {
      if (child.kind != ComponentKind::Decision) continue;
      for (const auto& cg : child.contract.guarantees) {
        if (cg.inherits && *cg.inherits == g.id) check.inheritors.push_back(cg.id);
      }
    }
    check.ok = check.inheritors.size() == 1;
    out.push_back(check);
  }
  for (const auto& child : composite.children) {
    if (child.kind == ComponentKind::Composite) inheritance_checks(child, out);
  }
}

}  // namespace detail

// Modular refinement of the composite contract by its children: every
// internal assumption discharged or promoted into the composite's own
// assumptions, every composite guarantee carried by exactly one Decision
// guarantee, and no cyclic explicit discharge chains.
inline RefinementReport check_refinement(const SystemModel& model) {
  RefinementReport report;
  report.discharge = build_discharge_map(model);

  for (const auto& entry : report.discharge.entries) {
    if (entry.kind == DischargeKind::PromotedToParent) {
      report.promoted.push_back(entry.assumption);
    } else if (entry.kind == DischargeKind::Undischarged) {
      report.findings.push_back({"undischarged assumption", entry.assumption,
                                 "no provider guarantee, no covering composite assumption"});
    }
  }

  detail::inheritance_checks(model.composite, report.inheritance);
  for (const auto& check : report.inheritance) {
    if (check.inheritors.empty()) {
      report.findings.push_back({"not inherited", check.composite_guarantee,
                                 "no Decision guarantee takes over this composite guarantee"});
    } else if (check.inheritors.size() > 1) {
      std::string names;
      for (const auto& n : check.inheritors) names += (names.empty() ? "" : ", ") + n;
      report.findings.push_back({"multiple inheritors", check.composite_guarantee,
                                 "claimed by " + names});
    }
  }

  report.cycles = detail::explicit_link_cycles(model);
  for (const auto& cycle : report.cycles) {
    std::string names;
    for (const auto& n : cycle) names += (names.empty() ? "" : ", ") + n;
    report.findings.push_back({"discharge cycle", cycle.empty() ? "" : cycle.front(),
                               "explicit links form a cycle {" + names + "}"});
  }

  report.passed = report.findings.empty() && report.discharge.findings.empty();
  return report;
}

}  // namespace ada
