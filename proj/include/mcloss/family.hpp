#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "mcloss/simplex.hpp"

namespace mcloss {

enum class FamilyKind {
  TwoClassLikelihood,
  TwoClassExponential,
  TwoClassCalibrationAsym,
  TwoClassCalibrationSym,
  MultinomialLikelihood,
  PairwiseAsymLikelihood,
  PairwiseAsymExponential,
  PairwiseAsymCalibration,
  PairwiseSymLikelihood,
  PairwiseSymExponential,
  PairwiseSymCalibration,
  LBeta,
  LBetaRescaled,
  Hinge2,
  CW2,
  CW3,
  ZO3,
  ZO4,
  LLW2,
  DKR2,
};

struct LossFamily {
  FamilyKind kind = FamilyKind::MultinomialLikelihood;
  std::size_t m = 2;
  double beta = 0.5;
  std::optional<CostMatrix> cost;
};

std::string family_name(FamilyKind kind);
FamilyKind family_from_name(const std::string& name);

bool is_scoring_family(FamilyKind kind);
bool is_margin_family(FamilyKind kind);
// Dimension of the action a model must output for this family.
std::size_t action_dimension(const LossFamily& family);

// Univariate generator name underlying two-class and pairwise families.
std::string generator_name(FamilyKind kind);

// JSON form {"family": name, "m": m, "beta"?: b, "nu"?: v, "cost"?: [[...]]}.
// "pairwise_beta" with nu in {0, -0.5} selects the symmetric likelihood or
// exponential pairwise rule.
nlohmann::json family_to_json(const LossFamily& family);
LossFamily family_from_json(const nlohmann::json& j);

}  // namespace mcloss
