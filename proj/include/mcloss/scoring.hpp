#pragma once

#include "mcloss/entropy.hpp"
#include "mcloss/family.hpp"
#include "mcloss/loss.hpp"

namespace mcloss {

// Generic constructions from a univariate generator f0. Values follow the
// simplex parametrization of the perspective construction, without any
// additive constant.
double two_class_loss(const UnivariateConvex& f0, std::size_t j, CSpan q);
double pairwise_asymmetric(const UnivariateConvex& f0, std::size_t j, CSpan q);
double pairwise_symmetric(const UnivariateConvex& f0, std::size_t j, CSpan q);

// f0''(q1/q2) / q2^3
double two_class_weight(const UnivariateConvex& f0, double q1);
// 2^{2 nu} q1^{nu-1} q2^{nu-1}
double beta_family_weight(double nu, double q1);

// Raw L_beta: (q_j/||q||_beta)^{beta-1}, negated for beta > 1.
double lbeta_loss(double beta, std::size_t j, CSpan q);
// Rescaled L_beta, dispatching to the closed-form limits near 0, 1, inf.
double lbeta_rescaled_loss(double beta, std::size_t j, CSpan q);
// Closed forms of the rescaled loss at beta in {0, 1/2, 1, inf}.
double lbeta_limit(double beta, std::size_t j, CSpan q);

struct ScoringRule {
  LossFamily family;
  std::string label;
  std::size_t m = 0;
  std::function<double(std::size_t, CSpan)> eval;
  EntropySpec entropy;
  // Display form minus the form generated by the family's dissimilarity.
  double additive_constant = 0.0;
  bool strictly_proper = true;

  double operator()(std::size_t j, CSpan q) const { return eval(j, q); }
  Loss as_loss() const;
  // Dissimilarity generating the rule; the entropy is its perspective plus
  // additive_constant.
  std::optional<DissimilaritySpec> generator;
};

ScoringRule make_scoring_rule(const LossFamily& family);

// Sum_j eta_j L(j, q) minus the Savage form H(q) - (q - eta)^T dH(q).
double canonical_representation_residual(const ScoringRule& rule, CSpan eta, CSpan q);

Vec softmax(CSpan h);
// Softmax of (h, 0).
Vec softmax_reduced(CSpan h);

// L(j, softmax(h)) evaluated directly on the logits.
double composite_loss(const ScoringRule& rule, std::size_t j, CSpan h);
// Gradient of composite_loss with respect to h.
Vec composite_gradient(const ScoringRule& rule, std::size_t j, CSpan h);

}  // namespace mcloss
