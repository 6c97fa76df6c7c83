#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcloss/scoring.hpp"
#include "mcloss/simplex.hpp"

namespace mcloss {

enum class PsiKind { Underline, UnderlineC, UnderlineC0, AtQ, AtQC, BJM, BJMConvex, RW };

std::string psi_kind_name(PsiKind kind);
PsiKind psi_kind_from_name(const std::string& name);

// Tabulated lower-bound function t -> psi(t). Values are +inf where the
// defining constraint set is empty on the mesh.
struct PsiProfile {
  PsiKind kind = PsiKind::Underline;
  std::string label;
  Vec t;
  Vec value;
  bool monotone = true;

  // Value at the largest grid point not above x; 0 below the grid.
  double operator()(double x) const;
};

// True when the values are nondecreasing within tol::kSlack.
bool is_nondecreasing(const PsiProfile& p);

struct PsiMesh {
  // Simplex mesh divisions; 0 picks 400, 30 or 12 for m = 2, 3, 4.
  std::size_t divisions = 0;
  double t_step = 0.01;
};

// inf B_L(eta', q') over mesh pairs with ||Cbar^T (eta' - q')||_{inf2} = t and
// max_j (Cbar^T q')_j <= 1^T Cbar^T q' / 2. Without a cost matrix Cbar is the
// identity. Each pair contributes the points of the segment from q' to eta'
// at every grid level up to its own norm. m <= 4.
PsiProfile psi_underline(const ScoringRule& rule, const std::optional<CostMatrix>& c, const PsiMesh& mesh = {});
// Class-weighted special case with Cbar^T q = C0 o q.
PsiProfile psi_underline_c0(const ScoringRule& rule, CSpan c0, const PsiMesh& mesh = {});

// inf B_L(eta', q) over eta' with ||Cbar^T (eta' - q)||_{inf2} >= t, as a
// profile and at a single level. Extra candidate points eta' join the mesh.
PsiProfile psi_at_q_profile(const ScoringRule& rule, CSpan q, const std::optional<CostMatrix>& c,
                            const PsiMesh& mesh = {});
double psi_at_q(const ScoringRule& rule, CSpan q, const std::optional<CostMatrix>& c, double t,
                const std::vector<Vec>& mesh_points, const std::vector<Vec>& extra = {});

// Two-class psi for a proper rule: the smaller of the regret infima at
// eta_1 = (1 + t)/2 over q_1 <= 1/2 and at eta_1 = (1 - t)/2 over q_1 >= 1/2.
PsiProfile psi_bjm(const ScoringRule& rule, std::size_t q_points = 401, double t_step = 0.01);
// Greatest convex minorant of a profile on its grid.
PsiProfile convexify(const PsiProfile& p);

// B_L^1((c20 + delta)/(c10 + c20), c20/(c10 + c20)); +inf when the first
// argument leaves [0, 1].
double psi_rw(const ScoringRule& rule, double c10, double c20, double delta);

// B_L(eta, q) as risk minus entropy.
double scoring_regret(const ScoringRule& rule, CSpan eta, CSpan q);

}  // namespace mcloss
