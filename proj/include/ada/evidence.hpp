#pragma once

#include <map>
#include <string>
#include <vector>

#include "ada/contract.hpp"
#include "ada/model.hpp"

namespace ada {

enum class EvidenceKind { Observation, Insight, Circumstantial };

inline const char* to_string(EvidenceKind k) {
  switch (k) {
    case EvidenceKind::Observation: return "observation";
    case EvidenceKind::Insight: return "insight";
    case EvidenceKind::Circumstantial: return "circumstantial";
  }
  return "?";
}

enum class EvidenceResult { Supports, Refutes, Inconclusive };

inline const char* to_string(EvidenceResult r) {
  switch (r) {
    case EvidenceResult::Supports: return "supports";
    case EvidenceResult::Refutes: return "refutes";
    case EvidenceResult::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct EvidenceItem {
  std::string id;
  EvidenceKind kind = EvidenceKind::Observation;
  std::vector<std::string> target_clauses;
  std::string source;  // campaign id or document reference
  double coverage = 0.0;  // fraction of the assumption space exercised, [0, 1]
  EvidenceResult result = EvidenceResult::Inconclusive;
  // Free-text qualifiers; only coverage is machine-checked.
  std::string strength;
  std::string relevance;
  std::vector<std::string> falsifying_scenarios;  // cited when result=refutes
};

inline std::vector<Finding> validate_evidence(const EvidenceItem& e, const SystemModel& model) {
  std::vector<Finding> out;
  if (!(e.coverage >= 0.0 && e.coverage <= 1.0)) {
    out.push_back({"invalid coverage", e.id, "coverage must lie in [0, 1]"});
  }
  if (e.target_clauses.empty()) {
    out.push_back({"no targets", e.id, "evidence must target at least one clause"});
  }
  for (const auto& clause : e.target_clauses) {
    if (!model.find_clause(clause)) {
      out.push_back({"dangling target", e.id, "clause " + clause + " not found"});
    }
  }
  return out;
}

enum class ClaimStatus { Supported, Refuted, Undetermined };

inline const char* to_string(ClaimStatus s) {
  switch (s) {
    case ClaimStatus::Supported: return "supported";
    case ClaimStatus::Refuted: return "refuted";
    case ClaimStatus::Undetermined: return "undetermined";
  }
  return "?";
}

// One node of the assurance argument: a claim about a single guarantee
// clause, backed by sub-claims and evidence. status is always derived by
// evaluate_claim_status, never set by hand.
struct ClaimNode {
  std::string claim;
  std::string clause_id;  // the guarantee the claim is bound to
  std::vector<ClaimNode> children;
  std::vector<std::string> evidence;  // EvidenceItem ids
  ClaimStatus status = ClaimStatus::Undetermined;
};

struct ClaimContext {
  std::map<std::string, EvidenceItem> evidence_by_id;
  bool refinement_passed = false;
};

// Derives the claim status bottom-up:
//   refuted      - any attached evidence refutes, regardless of anything else
//   supported    - all children supported, accumulated observation coverage
//                  reaches the threshold, and the refinement check passed
//   undetermined - otherwise
// Insight and circumstantial evidence annotate but never add coverage.
inline ClaimStatus evaluate_claim_status(ClaimNode& node, double threshold,
                                         const ClaimContext& ctx) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error("claim threshold must lie in (0, 1]");
  }

  bool all_children_supported = true;
  for (auto& child : node.children) {
    if (evaluate_claim_status(child, threshold, ctx) != ClaimStatus::Supported) {
      all_children_supported = false;
    }
  }

  double observation_coverage = 0.0;
  bool refuted = false;
  for (const auto& id : node.evidence) {
    const auto it = ctx.evidence_by_id.find(id);
    if (it == ctx.evidence_by_id.end()) {
      throw Error("claim '" + node.claim + "' references unknown evidence " + id);
    }
    const EvidenceItem& e = it->second;
    if (e.result == EvidenceResult::Refutes) refuted = true;
    if (e.kind == EvidenceKind::Observation && e.result == EvidenceResult::Supports) {
      observation_coverage += e.coverage;
    }
  }

  if (refuted) {
    node.status = ClaimStatus::Refuted;
  } else if (all_children_supported && observation_coverage >= threshold &&
             ctx.refinement_passed) {
    node.status = ClaimStatus::Supported;
  } else {
    node.status = ClaimStatus::Undetermined;
  }
  return node.status;
}

}  // namespace ada
