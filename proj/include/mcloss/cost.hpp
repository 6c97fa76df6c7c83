#pragma once

#include <vector>

#include "mcloss/loss.hpp"
#include "mcloss/mesh.hpp"
#include "mcloss/psi.hpp"
#include "mcloss/regret.hpp"
#include "mcloss/scoring.hpp"

namespace mcloss {

// Ltilde(j, a) = c_jM L(j, a) + sum_{k != j} (c_jM - c_jk)(L(k, a) - 1).
Loss cost_transform(const Loss& loss, const CostMatrix& c);

// eta_tilde = Cbar^T eta
Vec cost_eta_tilde(const CostMatrix& c, CSpan eta);
// D(eta) = sum_j sum_{k != j} eta_j (c_jM - c_jk)
double cost_offset(const CostMatrix& c, CSpan eta);

// |R_Ltilde(eta, a) - [(1^T eta_tilde) R_L(eta_tilde / 1^T eta_tilde, a) - D(eta)]|
double risk_identity_residual(const Loss& loss, const CostMatrix& c, CSpan eta, CSpan action);

// Off-diagonal entries uniform on [0, 1), with about one in five set to 0.
CostMatrix random_cost(std::size_t m, Rng& rng);

// B^zo(eta, q) <= ||eta - q||_{inf2} and B^cw(eta, Cbar^T q) <= ||Cbar^T (eta - q)||_{inf2}
// with a fresh random cost matrix per sample.
std::pair<BoundReport, BoundReport> misclass_upper_bounds(std::size_t m, const SweepOptions& opts);

struct TightnessWitness {
  double regret = 0.0;
  double bound = 0.0;
};
// eta = (0.8, 0.2, 0, ...), q = (0.5 - eps, 0.5 + eps, 0, ...).
TightnessWitness misclass_tightness(std::size_t m, double eps);

struct CwBoundOptions {
  SweepOptions sweep;
  PsiMesh mesh;
  // Samples for the per-sample psi_{q^w} bound; each one scans the w grid.
  std::size_t wset_samples = 300;
  std::size_t w_points = 101;
};

// For a proper rule and cost matrix:
//   psi_underline(B^cw(eta, q) / 1^T eta_tilde) <= B_Ltilde(eta, q) / 1^T eta_tilde,
//   psi_underline_C(B^cw(eta, Cbar^T q)) <= B_L(eta, q),
//   psi^C_{q^w}(B^cw(eta, Cbar^T q)) <= B_L(eta, q) for w in the W set,
// and for m = 2 the bound min{psi_RW(delta), psi_RW(-delta)} <= B_L(eta, q).
std::vector<BoundReport> check_cw_bounds(const ScoringRule& rule, const CostMatrix& c,
                                         const CwBoundOptions& opts = {});

// The two-class bound on an (eta_1, q_1) mesh with the given class weights.
BoundReport check_rw_bound(const ScoringRule& rule, double c10, double c20, std::size_t divisions);

}  // namespace mcloss
