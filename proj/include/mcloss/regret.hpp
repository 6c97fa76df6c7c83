#pragma once

#include <cstdint>
#include <functional>
#include <utility>

#include "mcloss/entropy.hpp"
#include "mcloss/family.hpp"
#include "mcloss/loss.hpp"
#include "mcloss/report.hpp"
#include "mcloss/scoring.hpp"

namespace mcloss {

// Zero-one regret of predicting argmax(score): max(eta) - eta_k.
double bzo(CSpan eta, CSpan score);
// Cost-weighted regret of predicting argmax(score): (C^T eta)_k - min(C^T eta).
double bcw(const CostMatrix& c, CSpan eta, CSpan score);

// Conditional risk minus H(eta). A value below -tol::kSlack means H exceeds
// the Bayes risk of the loss and raises ConfigurationError.
double regret(const Loss& loss, const EntropySpec& h, CSpan eta, CSpan action);

// Spot check that H matches the minimal risk of the loss over the action set
// at each point, within tolerance; throws ConfigurationError otherwise.
void certify_entropy(const Loss& loss, const EntropySpec& h, const ActionSet& actions,
                     const std::vector<Vec>& points, double tolerance = tol::kInfimum);

enum class PredictionMap { Identity, Dagger, Tilde, SigmaL };

std::string prediction_map_name(PredictionMap p);
PredictionMap prediction_map_from_name(const std::string& name);
// The m-vector whose argmax is the predicted class. Identity passes a
// length-m action through; SigmaL needs the loss.
Vec apply_prediction(PredictionMap p, CSpan action, const Loss* loss = nullptr);

struct SweepOptions {
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  Execution exec = Execution::Parallel;
  double margin_scale = 3.0;
};

// m^{-1} B^cw(eta, tau_dag) <= B_cw3(eta, tau) for FamilyKind::CW3 (cost
// taken from the family, zero-one by default) and
// m^{-1} B^zo(eta, tau_tilde) <= B_zo4(eta, tau) for FamilyKind::ZO4.
BoundReport check_hinge_bounds(const LossFamily& family, const SweepOptions& opts);

// m^{-1} B^zo(eta, sigma_L(gamma)) <= B_L(eta, gamma). The loss must share
// the zero-one entropy, which is certified on a coarse simplex mesh first.
BoundReport check_general_bound(const LossFamily& family, const SweepOptions& opts);

// For zo4 with tau_tilde and cw3 (zero-one costs) with tau_dag: a strictly
// larger prediction score never carries a strictly larger loss. lhs is the
// largest such loss excess, rhs is 0.
BoundReport check_monotone_ordering(const LossFamily& family, const SweepOptions& opts);

struct ManifoldResult {
  BoundReport membership;
  BoundReport vertices;
};

// Membership of sampled loss vectors in S^zo + R_+^m and recovery of the
// vertices of S^zo by convex combinations of the samples.
ManifoldResult value_manifold_check(const Loss& loss, const SweepOptions& opts,
                                    double vertex_tolerance = tol::kInfimum,
                                    std::size_t fw_iterations = 2000);

// Distance from v to the convex hull of points by Frank-Wolfe least squares,
// started from the nearest point.
double hull_distance(const std::vector<Vec>& points, CSpan v, std::size_t iterations);

// min over interior mesh points and directions x summing to zero of
// x^T (-Hess H) x / ||x||_1^2, by central second differences.
double strong_convexity_modulus(const EntropySpec& h, std::size_t divisions,
                                std::size_t random_directions = 64, std::uint64_t seed = 1);

// Pairwise Beta family with parameter nu (nu <= 0).
double kappa_pairwise_beta(double nu);
// Raw L_beta for beta in (0, 1).
double kappa_lbeta(std::size_t m, double beta);
// One of the two formulas: upper for beta in [1/2, 1), lower for (0, 1/2].
double kappa_lbeta_segment(std::size_t m, double beta, bool upper);
// kappa_lbeta divided by m^{1/beta - 1} - 1; the beta -> 1 limit is 1/log m.
double kappa_lbeta_rescaled(std::size_t m, double beta);
// Dispatch on a scoring family; throws InvalidInput outside the covered set.
double kappa_constant(const LossFamily& family);

// B_L(eta, q) >= (kappa/2)||eta - q||_1^2 and (kappa/2) B^zo(eta, q)^2 <= B_L(eta, q).
std::pair<BoundReport, BoundReport> check_scoring_bounds(const ScoringRule& rule, double kappa,
                                                         const SweepOptions& opts);

// Infimum of the regret over actions whose prediction picks class k. Returns
// +inf when no action on the grid predicts k. k must not be a Bayes class.
double calibration_infimum(const Loss& loss, const EntropySpec& h,
                           const std::function<Vec(CSpan)>& predict, CSpan eta, std::size_t k,
                           const std::vector<Vec>& actions);

// B(x, y) >= B(x^w, y) and B(x, y) >= B(x, x^w) with x^w = (1-w)x + wy.
std::pair<BoundReport, BoundReport> check_bregman_monotonicity(const EntropySpec& h,
                                                               const SweepOptions& opts);

}  // namespace mcloss
