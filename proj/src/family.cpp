#include "mcloss/family.hpp"

#include <array>
#include <cmath>
#include <utility>

namespace mcloss {

namespace {

constexpr std::array<std::pair<FamilyKind, const char*>, 20> kNames{{
    {FamilyKind::TwoClassLikelihood, "two_class_likelihood"},
    {FamilyKind::TwoClassExponential, "two_class_exponential"},
    {FamilyKind::TwoClassCalibrationAsym, "two_class_calibration_a"},
    {FamilyKind::TwoClassCalibrationSym, "two_class_calibration_s"},
    {FamilyKind::MultinomialLikelihood, "likelihood"},
    {FamilyKind::PairwiseAsymLikelihood, "pairwise_asym_likelihood"},
    {FamilyKind::PairwiseAsymExponential, "pairwise_asym_exponential"},
    {FamilyKind::PairwiseAsymCalibration, "pairwise_asym_calibration"},
    {FamilyKind::PairwiseSymLikelihood, "pairwise_sym_likelihood"},
    {FamilyKind::PairwiseSymExponential, "pairwise_sym_exponential"},
    {FamilyKind::PairwiseSymCalibration, "pairwise_sym_calibration"},
    {FamilyKind::LBeta, "lbeta"},
    {FamilyKind::LBetaRescaled, "lbeta_rescaled"},
    {FamilyKind::Hinge2, "hinge2"},
    {FamilyKind::CW2, "cw2"},
    {FamilyKind::CW3, "cw3"},
    {FamilyKind::ZO3, "zo3"},
    {FamilyKind::ZO4, "zo4"},
    {FamilyKind::LLW2, "llw2"},
    {FamilyKind::DKR2, "dkr2"},
}};

bool is_two_class(FamilyKind k) {
  return k == FamilyKind::TwoClassLikelihood || k == FamilyKind::TwoClassExponential ||
         k == FamilyKind::TwoClassCalibrationAsym || k == FamilyKind::TwoClassCalibrationSym ||
         k == FamilyKind::Hinge2;
}

}  // namespace

std::string family_name(FamilyKind kind) {
  for (const auto& [k, n] : kNames) {
    if (k == kind) return n;
  }
  throw InvalidInput("family_name: unknown kind");
}

FamilyKind family_from_name(const std::string& name) {
  for (const auto& [k, n] : kNames) {
    if (name == n) return k;
  }
  throw ConfigurationError("unknown loss family: " + name);
}

bool is_scoring_family(FamilyKind kind) {
  return static_cast<int>(kind) <= static_cast<int>(FamilyKind::LBetaRescaled);
}

bool is_margin_family(FamilyKind kind) { return !is_scoring_family(kind); }

std::size_t action_dimension(const LossFamily& family) {
  if (is_scoring_family(family.kind)) return family.m;
  return family.m - 1;
}

std::string generator_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::TwoClassLikelihood:
    case FamilyKind::PairwiseAsymLikelihood:
    case FamilyKind::PairwiseSymLikelihood:
      return "likelihood";
    case FamilyKind::TwoClassExponential:
    case FamilyKind::PairwiseAsymExponential:
    case FamilyKind::PairwiseSymExponential:
      return "exponential";
    case FamilyKind::TwoClassCalibrationAsym:
    case FamilyKind::PairwiseAsymCalibration:
    case FamilyKind::PairwiseSymCalibration:
      return "calibration_a";
    case FamilyKind::TwoClassCalibrationSym:
      return "calibration_s";
    default:
      throw InvalidInput("generator_name: family has no univariate generator");
  }
}

nlohmann::json family_to_json(const LossFamily& family) {
  nlohmann::json j;
  j["family"] = family_name(family.kind);
  j["m"] = family.m;
  if (family.kind == FamilyKind::LBeta || family.kind == FamilyKind::LBetaRescaled) {
    if (std::isinf(family.beta)) {
      j["beta"] = "inf";
    } else {
      j["beta"] = family.beta;
    }
  }
  if (family.cost) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < family.cost->size(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t c = 0; c < family.cost->size(); ++c) row.push_back((*family.cost)(r, c));
      rows.push_back(row);
    }
    j["cost"] = rows;
  }
  return j;
}

LossFamily family_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("family")) throw ConfigurationError("family: missing \"family\" key");
  LossFamily f;
  const std::string name = j.at("family").get<std::string>();
  if (name == "pairwise_beta") {
    if (!j.contains("nu")) throw ConfigurationError("pairwise_beta: missing nu");
    const double nu = j.at("nu").get<double>();
    if (nu == 0.0) {
      f.kind = FamilyKind::PairwiseSymLikelihood;
    } else if (nu == -0.5) {
      f.kind = FamilyKind::PairwiseSymExponential;
    } else {
      throw ConfigurationError("pairwise_beta: only nu = 0 and nu = -0.5 have closed forms");
    }
  } else {
    f.kind = family_from_name(name);
  }
  f.m = j.value("m", std::size_t{is_two_class(f.kind) ? 2u : 3u});
  if (f.m < 2) throw ConfigurationError("family: m must be at least 2");
  if (is_two_class(f.kind) && f.m != 2) throw ConfigurationError("family: two-class family needs m = 2");
  if (f.kind == FamilyKind::CW2 || f.kind == FamilyKind::CW3 || f.kind == FamilyKind::ZO3 ||
      f.kind == FamilyKind::ZO4 || f.kind == FamilyKind::LLW2 || f.kind == FamilyKind::DKR2) {
    if (f.m < 2) throw ConfigurationError("family: hinge family needs m >= 2");
  }
  if (j.contains("beta")) {
    const auto& b = j.at("beta");
    if (b.is_string()) {
      if (b.get<std::string>() != "inf") throw ConfigurationError("family: beta must be a number or \"inf\"");
      f.beta = INFINITY;
    } else {
      f.beta = b.get<double>();
    }
  }
  if (j.contains("cost")) {
    const auto& rows = j.at("cost");
    Vec c;
    for (const auto& row : rows) {
      if (row.size() != rows.size()) throw ConfigurationError("family: cost matrix must be square");
      for (const auto& x : row) c.push_back(x.get<double>());
    }
    try {
      f.cost = CostMatrix(rows.size(), c);
    } catch (const InvalidInput& e) {
      throw ConfigurationError(e.what());
    }
    if (f.cost->size() != f.m) throw ConfigurationError("family: cost matrix size differs from m");
  }
  if ((f.kind == FamilyKind::CW2 || f.kind == FamilyKind::CW3) && !f.cost) {
    f.cost = CostMatrix::zero_one(f.m);
  }
  return f;
}

}  // namespace mcloss
