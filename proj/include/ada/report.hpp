#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "ada/campaign_io.hpp"
#include "ada/discharge.hpp"
#include "ada/evidence.hpp"
#include "ada/model_io.hpp"
#include "ada/version.hpp"

namespace ada {

inline constexpr const char* kReportSchema = "ada-report/1";

struct ReportBundle {
  std::string markdown;  // report.md
  Json json;             // report.json
  std::string dot;       // model.dot
};

namespace detail {

inline std::string fmt(double v) {
  if (!std::isfinite(v)) return "inf";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string predicate_summary(const Clause& c) {
  if (!c.predicate) return "informal";
  const PredicateSpec& p = *c.predicate;
  std::string out = variant_name(p);
  if (const auto* b = std::get_if<StateErrorBound>(&p)) {
    out += std::string("(") + to_string(b->signal) + ", " + to_string(b->subject) +
           ", eps=" + fmt(b->epsilon) + ")";
  } else if (const auto* b = std::get_if<SeparationBound>(&p)) {
    out += "(d_min=" + fmt(b->d_min) + ")";
  } else if (const auto* b = std::get_if<TrackingBound>(&p)) {
    out += "(eps_pos=" + fmt(b->eps_pos) + ", eps_speed=" + fmt(b->eps_speed) +
           ", settle=" + fmt(b->settle_time) + ")";
  } else if (const auto* b = std::get_if<ConfigValid>(&p)) {
    out += "(route=" + b->route_id + ", d_min=" + fmt(b->d_min) + ")";
  } else if (const auto* b = std::get_if<SafeSetpointRule>(&p)) {
    out += "(horizon=" + fmt(b->horizon_s) + ")";
  } else if (const auto* b = std::get_if<ObstacleBehaviour>(&p)) {
    out += "(constant_velocity, v<=" + fmt(b->max_speed) + ")";
  }
  return out;
}

inline void contract_section(const Component& c, std::string& md) {
  md += "### " + c.id + " (" + to_string(c.kind) + ")\n\n";
  if (!c.contract.responsibility.empty()) {
    md += "Responsibility: " + c.contract.responsibility + "\n\n";
  }
  if (!c.contract.function.empty()) md += "Function: " + c.contract.function + "\n\n";
  auto ports = [](const std::vector<std::string>& v) {
    std::string out;
    for (const auto& p : v) out += (out.empty() ? "" : ", ") + p;
    return out.empty() ? std::string("-") : out;
  };
  md += "Inputs: " + ports(c.contract.inputs) + "; Outputs: " + ports(c.contract.outputs) + "\n\n";
  if (!c.contract.assumptions.empty() || !c.contract.guarantees.empty()) {
    md += "| Clause | Kind | Predicate | Text |\n|---|---|---|---|\n";
    for (const auto& a : c.contract.assumptions) {
      md += "| " + a.id + " | A | " + predicate_summary(a) + " | " + a.text + " |\n";
    }
    for (const auto& g : c.contract.guarantees) {
      std::string text = g.text;
      if (g.inherits) text += " (inherits " + *g.inherits + ")";
      md += "| " + g.id + " | G | " + predicate_summary(g) + " | " + text + " |\n";
    }
    md += "\n";
  }
}

inline Json claim_to_json(const ClaimNode& node) {
  Json j;
  j["claim"] = node.claim;
  j["clause"] = node.clause_id;
  j["status"] = to_string(node.status);
  j["evidence"] = node.evidence;
  j["children"] = Json::array();
  for (const auto& child : node.children) j["children"].push_back(claim_to_json(child));
  return j;
}

inline void claim_section(const ClaimNode& node, int depth, std::string& md) {
  md += std::string(static_cast<std::size_t>(depth) * 2, ' ') + "- [" + to_string(node.status) +
        "] " + node.clause_id + ": " + node.claim + "\n";
  for (const auto& child : node.children) claim_section(child, depth + 1, md);
}

}  // namespace detail

// Default argument structure when no hand-written claim tree is supplied: one
// root claim per composite guarantee with a child claim per inheriting
// Decision guarantee, plus a standalone claim for every other clause the
// evidence targets. Evidence attaches to the claim of the clause it targets.
inline std::vector<ClaimNode> build_default_claims(const SystemModel& model,
                                                   const std::vector<EvidenceItem>& evidence) {
  std::vector<ClaimNode> claims;
  std::set<std::string> claimed;

  auto attach_evidence = [&](ClaimNode& node) {
    for (const auto& e : evidence) {
      for (const auto& target : e.target_clauses) {
        if (target == node.clause_id) node.evidence.push_back(e.id);
      }
    }
  };

  for (const auto& g : model.composite.contract.guarantees) {
    ClaimNode root;
    root.clause_id = g.id;
    root.claim = model.composite.id + " satisfies: " + g.text;
    claimed.insert(g.id);
    attach_evidence(root);
    for (const auto& child : model.composite.children) {
      if (child.kind != ComponentKind::Decision) continue;
      for (const auto& cg : child.contract.guarantees) {
        if (cg.inherits && *cg.inherits == g.id) {
          ClaimNode sub;
          sub.clause_id = cg.id;
          sub.claim = child.id + " carries the responsibility: " + cg.text;
          claimed.insert(cg.id);
          attach_evidence(sub);
          root.children.push_back(std::move(sub));
        }
      }
    }
    claims.push_back(std::move(root));
  }

  for (const auto& e : evidence) {
    for (const auto& target : e.target_clauses) {
      if (claimed.count(target)) continue;
      const auto ref = model.find_clause(target);
      if (!ref) continue;
      ClaimNode node;
      node.clause_id = target;
      node.claim = ref.component->id + " satisfies: " + ref.clause->text;
      claimed.insert(target);
      attach_evidence(node);
      claims.push_back(std::move(node));
    }
  }
  return claims;
}

// Renders the assurance report: human-readable markdown, the same content as
// machine-readable JSON, and a DOT graph of components and discharge edges.
// Byte-identical output for identical inputs.
inline ReportBundle render_report(const SystemModel& model, const RefinementReport& refinement,
                                  const std::vector<CampaignReport>& campaigns,
                                  std::vector<ClaimNode> claims, double threshold = 0.8) {
  // Every evidence reference must resolve before anything is rendered.
  std::vector<EvidenceItem> evidence;
  for (const auto& c : campaigns) evidence.push_back(c.evidence);
  for (const auto& e : evidence) {
    const auto findings = validate_evidence(e, model);
    if (!findings.empty()) {
      throw Error("evidence " + e.id + " does not resolve: " + findings.front().to_string());
    }
  }

  if (claims.empty()) claims = build_default_claims(model, evidence);

  ClaimContext ctx;
  ctx.refinement_passed = refinement.passed;
  for (const auto& e : evidence) ctx.evidence_by_id[e.id] = e;
  for (auto& claim : claims) evaluate_claim_status(claim, threshold, ctx);

  ReportBundle bundle;

  // ---- markdown -----------------------------------------------------------
  std::string& md = bundle.markdown;
  md += "# Assurance report: " + model.composite.id + "\n\n";
  md += std::string("Generated by ada ") + kToolVersion + " (model schema " + kModelSchema +
        ")\n\n";
  if (!model.composite.assurance_context.empty()) {
    md += "Assurance context: " + model.composite.assurance_context + "\n\n";
  }

  md += "## Contracts\n\n";
  detail::contract_section(model.composite, md);
  for (const auto& child : model.composite.children) detail::contract_section(child, md);

  md += "## Refinement\n\n";
  md += std::string("Status: ") + (refinement.passed ? "PASS" : "FAIL") + "\n\n";
  md += "| Assumption | Resolution | Provider | Via |\n|---|---|---|---|\n";
  for (const auto& e : refinement.discharge.entries) {
    md += "| " + e.assumption + " | " + to_string(e.kind) + " | " +
          (e.provider.empty() ? "-" : e.provider) + " | " +
          (e.via_link ? "explicit link" : "predicate entailment") + " |\n";
  }
  md += "\n";
  if (!refinement.promoted.empty()) {
    md += "Promoted to composite assumptions: ";
    for (std::size_t i = 0; i < refinement.promoted.size(); ++i) {
      md += (i ? ", " : "") + refinement.promoted[i];
    }
    md += "\n\n";
  }
  md += "| Composite guarantee | Inherited by |\n|---|---|\n";
  for (const auto& check : refinement.inheritance) {
    std::string who;
    for (const auto& n : check.inheritors) who += (who.empty() ? "" : ", ") + n;
    md += "| " + check.composite_guarantee + " | " + (who.empty() ? "(none)" : who) + " |\n";
  }
  md += "\n";
  {
    std::vector<Finding> all = refinement.discharge.findings;
    all.insert(all.end(), refinement.findings.begin(), refinement.findings.end());
    if (all.empty()) {
      md += "No findings.\n\n";
    } else {
      md += "Findings:\n\n";
      for (const auto& f : all) md += "- " + f.to_string() + "\n";
      md += "\n";
    }
  }

  if (!campaigns.empty()) {
    md += "## Campaigns\n\n";
    md += "| Campaign | Scenarios | Pass | Falsified | Vacuous | Coverage |\n"
          "|---|---|---|---|---|---|\n";
    for (const auto& c : campaigns) {
      md += "| " + c.campaign_id + " | " + std::to_string(c.verdicts.size()) + " | " +
            std::to_string(c.pass_count) + " | " + std::to_string(c.falsification_count) +
            " | " + std::to_string(c.vacuous_count) + " | " + detail::fmt(c.coverage) + " |\n";
    }
    md += "\n";
    for (const auto& c : campaigns) {
      if (!c.evidence.falsifying_scenarios.empty()) {
        md += "Falsifying scenarios (" + c.campaign_id + "): ";
        for (std::size_t i = 0; i < c.evidence.falsifying_scenarios.size(); ++i) {
          md += (i ? ", " : "") + c.evidence.falsifying_scenarios[i];
        }
        md += "\n\n";
      }
      if (!c.boundary.empty()) {
        md += "Lowest passing margins (" + c.campaign_id + "): ";
        for (std::size_t i = 0; i < c.boundary.size(); ++i) {
          md += (i ? ", " : "") + c.boundary[i].scenario_id + " (" +
                detail::fmt(c.boundary[i].margin_m) + " m)";
        }
        md += "\n\n";
      }
    }
  }

  md += "## Claims\n\n";
  if (claims.empty()) {
    md += "No claims.\n\n";
  } else {
    for (const auto& claim : claims) detail::claim_section(claim, 0, md);
    md += "\n";
  }

  if (!evidence.empty()) {
    md += "## Evidence\n\n";
    md += "| Id | Kind | Result | Coverage | Targets | Source |\n|---|---|---|---|---|---|\n";
    for (const auto& e : evidence) {
      std::string targets;
      for (const auto& t : e.target_clauses) targets += (targets.empty() ? "" : ", ") + t;
      md += "| " + e.id + " | " + to_string(e.kind) + " | " + to_string(e.result) + " | " +
            detail::fmt(e.coverage) + " | " + targets + " | " + e.source + " |\n";
    }
    md += "\n";
  }

  // ---- json ---------------------------------------------------------------
  Json& j = bundle.json;
  j["schema"] = kReportSchema;
  j["tool"] = kToolVersion;
  j["model"] = Json{{"id", model.composite.id}, {"schema", kModelSchema}};
  {
    Json refinement_json;
    refinement_json["passed"] = refinement.passed;
    refinement_json["discharge"] = Json::array();
    for (const auto& e : refinement.discharge.entries) {
      refinement_json["discharge"].push_back(Json{{"assumption", e.assumption},
                                                  {"resolution", to_string(e.kind)},
                                                  {"provider", e.provider},
                                                  {"via_link", e.via_link}});
    }
    refinement_json["promoted"] = refinement.promoted;
    refinement_json["inheritance"] = Json::array();
    for (const auto& check : refinement.inheritance) {
      refinement_json["inheritance"].push_back(Json{{"guarantee", check.composite_guarantee},
                                                    {"inheritors", check.inheritors},
                                                    {"ok", check.ok}});
    }
    refinement_json["cycles"] = refinement.cycles;
    Json findings = Json::array();
    for (const auto& f : refinement.discharge.findings) findings.push_back(f.to_string());
    for (const auto& f : refinement.findings) findings.push_back(f.to_string());
    refinement_json["findings"] = findings;
    j["refinement"] = refinement_json;
  }
  j["campaigns"] = Json::array();
  for (const auto& c : campaigns) {
    j["campaigns"].push_back(Json{{"id", c.campaign_id},
                                  {"component", c.component},
                                  {"scenarios", c.verdicts.size()},
                                  {"pass", c.pass_count},
                                  {"falsified", c.falsification_count},
                                  {"vacuous", c.vacuous_count},
                                  {"coverage", c.coverage},
                                  {"falsifying_scenarios", c.evidence.falsifying_scenarios}});
  }
  j["claims"] = Json::array();
  for (const auto& claim : claims) j["claims"].push_back(detail::claim_to_json(claim));
  j["evidence"] = Json::array();
  for (const auto& e : evidence) j["evidence"].push_back(to_json(e));

  // ---- dot ----------------------------------------------------------------
  std::string& dot = bundle.dot;
  dot += "digraph model {\n  rankdir=LR;\n  node [shape=box];\n";
  dot += "  \"" + model.composite.id + "\" [shape=folder];\n";
  for (const auto& child : model.composite.children) {
    dot += "  \"" + child.id + "\" [label=\"" + child.id + "\\n(" + to_string(child.kind) +
           ")\"];\n";
  }
  for (const auto& e : refinement.discharge.entries) {
    const auto consumer = model.find_clause(e.assumption);
    if (!consumer) continue;
    if (e.kind == DischargeKind::DischargedBy) {
      const auto provider = model.find_clause(e.provider);
      if (!provider) continue;
      dot += "  \"" + consumer.component->id + "\" -> \"" + provider.component->id +
             "\" [label=\"" + e.assumption + " <- " + e.provider + "\"];\n";
    } else if (e.kind == DischargeKind::PromotedToParent) {
      dot += "  \"" + consumer.component->id + "\" -> \"" + e.composite +
             "\" [style=dashed, label=\"" + e.assumption + " promoted\"];\n";
    } else {
      dot += "  \"" + consumer.component->id + "\" -> \"" + consumer.component->id +
             "\" [style=dotted, label=\"" + e.assumption + " undischarged\"];\n";
    }
  }
  dot += "}\n";

  return bundle;
}

// Atomic file write: the content lands under its final name only when
// complete.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

inline void write_report(const ReportBundle& bundle, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / "report.md", bundle.markdown);
  write_file_atomic(dir / "report.json", bundle.json.dump(2) + "\n");
  write_file_atomic(dir / "model.dot", bundle.dot);
}

}  // namespace ada
