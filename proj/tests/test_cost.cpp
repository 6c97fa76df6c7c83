#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mcloss/cost.hpp"
#include "mcloss/hinge.hpp"
#include "mcloss/mesh.hpp"
#include "mcloss/psi.hpp"

using namespace mcloss;

namespace {

ScoringRule rule_of(FamilyKind k, std::size_t m, double beta = 0.5) {
  return make_scoring_rule(LossFamily{k, m, beta, std::nullopt});
}

const CostMatrix kCost(3, Vec{0.0, 0.2, 0.9, 0.4, 0.0, 0.3, 0.7, 0.1, 0.0});

// Piecewise-linear interpolation of a profile on its grid.
double interp(const PsiProfile& p, double x) {
  if (x <= p.t.front()) return p.value.front();
  for (std::size_t k = 1; k < p.t.size(); ++k) {
    if (x <= p.t[k]) {
      const double w = (x - p.t[k - 1]) / (p.t[k] - p.t[k - 1]);
      return (1.0 - w) * p.value[k - 1] + w * p.value[k];
    }
  }
  return p.value.back();
}

}  // namespace

TEST_CASE("cost transform special cases") {
  const ScoringRule like = rule_of(FamilyKind::MultinomialLikelihood, 3);
  const Loss base = like.as_loss();
  const Loss same = cost_transform(base, CostMatrix::zero_one(3));
  const Loss cw_from_zo = cost_transform(make_zero_one_loss(3), kCost);
  const Loss cw = make_cost_weighted_loss(kCost);
  const Vec c0{1.0, 2.5, 0.5};
  const Loss weighted = cost_transform(base, CostMatrix::class_weighted(c0));
  for (const Vec& q : simplex_mesh_min(3, 10, 0.1)) {
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(same(j, q) == doctest::Approx(base(j, q)).epsilon(1e-14));
      CHECK(cw_from_zo(j, q) == doctest::Approx(cw(j, q)).epsilon(1e-14).scale(1.0));
      CHECK(weighted(j, q) == doctest::Approx(c0[j] * base(j, q)).epsilon(1e-14));
    }
  }
}

TEST_CASE("risk identity for the transformed loss") {
  const Loss base = rule_of(FamilyKind::MultinomialLikelihood, 3).as_loss();
  for (std::size_t i = 0; i < 2000; ++i) {
    Rng rng = stream_rng(71, i);
    const Vec eta = sample_simplex_mixed(3, rng);
    const Vec q = sample_simplex_interior(3, 1e-3, rng);
    const CostMatrix c = random_cost(3, rng);
    CHECK(risk_identity_residual(base, c, eta, q) <= 1e-10);
  }
  for (std::size_t j = 0; j < 3; ++j) {
    double d = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      if (k != j) d += kCost.row_max(j) - kCost(j, k);
    }
    CHECK(cost_offset(kCost, ProbVector::vertex(3, j)) == doctest::Approx(d));
  }
  const Vec eta{0.5, 0.3, 0.2};
  const Vec t = cost_eta_tilde(CostMatrix::zero_one(3), eta);
  for (std::size_t k = 0; k < 3; ++k) CHECK(t[k] == doctest::Approx(eta[k]));
}

TEST_CASE("misclassification bounds and the tightness witness") {
  const TightnessWitness w = misclass_tightness(3, 1e-6);
  CHECK(w.regret == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(w.bound == doctest::Approx(0.6 + 2e-6).epsilon(1e-12));
  SweepOptions o;
  o.samples = 5000;
  for (std::size_t m = 2; m <= 6; ++m) {
    auto [zo, cw] = misclass_upper_bounds(m, o);
    CHECK(zo.passed());
    CHECK(cw.passed());
  }
}

TEST_CASE("two-class exponential psi matches its closed form") {
  const ScoringRule e = rule_of(FamilyKind::TwoClassExponential, 2);
  const PsiProfile under = psi_underline(e, std::nullopt);
  const PsiProfile bjm = psi_bjm(e);
  CHECK(under.value.front() == 0.0);
  for (double t = 0.1; t < 0.95; t += 0.1) {
    const double want = 1.0 - std::sqrt(1.0 - t * t);
    CHECK(std::abs(under(t) - want) <= 1e-3);
    CHECK(std::abs(bjm(t) - want) <= 1e-3);
  }
  CHECK(under.monotone);
}

TEST_CASE("convexified two-class psi satisfies Jensen on three-point mixtures") {
  for (FamilyKind k : {FamilyKind::TwoClassLikelihood, FamilyKind::TwoClassCalibrationAsym}) {
    const PsiProfile p = convexify(psi_bjm(rule_of(k, 2)));
    for (std::size_t i = 0; i < 500; ++i) {
      Rng rng = stream_rng(73, i);
      const Vec w = sample_dirichlet(3, 1.0, rng);
      std::uniform_real_distribution<double> u(0.0, 0.99);
      const Vec t{u(rng), u(rng), u(rng)};
      const double mix = w[0] * t[0] + w[1] * t[1] + w[2] * t[2];
      const double rhs = w[0] * interp(p, t[0]) + w[1] * interp(p, t[1]) + w[2] * interp(p, t[2]);
      CHECK(interp(p, mix) <= rhs + 1e-12);
    }
    const PsiProfile raw = psi_bjm(rule_of(k, 2));
    for (std::size_t j = 0; j < p.t.size(); ++j) CHECK(p.value[j] <= raw.value[j] + 1e-12);
  }
}

TEST_CASE("psi profiles at a fixed q are nondecreasing") {
  const ScoringRule like = rule_of(FamilyKind::MultinomialLikelihood, 3);
  PsiMesh mesh;
  mesh.divisions = 16;
  for (const Vec& q : {Vec{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, Vec{0.5, 0.3, 0.2}}) {
    CHECK(is_nondecreasing(psi_at_q_profile(like, q, std::nullopt, mesh)));
    CHECK(is_nondecreasing(psi_at_q_profile(like, q, kCost, mesh)));
  }
  CHECK(is_nondecreasing(psi_underline(like, kCost, mesh)));
  CHECK(is_nondecreasing(psi_underline_c0(like, Vec{1.0, 2.0, 3.0}, mesh)));
  CHECK_THROWS_AS(psi_underline(rule_of(FamilyKind::MultinomialLikelihood, 5), std::nullopt), InvalidInput);
}

TEST_CASE("class-weighted psi is finite for two classes") {
  const ScoringRule like = rule_of(FamilyKind::TwoClassLikelihood, 2);
  const PsiProfile p = psi_underline_c0(like, Vec{1.0, 2.0});
  CHECK(std::isfinite(p(0.3)));
  CHECK(p(0.3) > 0.0);
}

TEST_CASE("psi_RW bound on a two-class mesh") {
  for (FamilyKind k : {FamilyKind::TwoClassLikelihood, FamilyKind::TwoClassExponential}) {
    const ScoringRule r = rule_of(k, 2);
    CHECK(check_rw_bound(r, 1.0, 2.0, 60).passed());
    CHECK(check_rw_bound(r, 2.0, 1.0, 60).passed());
    CHECK(psi_rw(r, 1.0, 2.0, 0.0) == doctest::Approx(0.0).scale(1.0));
    CHECK(std::isinf(psi_rw(r, 1.0, 2.0, 1.5)));
  }
  const ScoringRule like = rule_of(FamilyKind::TwoClassLikelihood, 2);
  // delta = 0.3 with c = (1, 2): B((2.3)/3, 2/3).
  CHECK(psi_rw(like, 1.0, 2.0, 0.3) == doctest::Approx(scoring_regret(like, Vec{2.3 / 3.0, 0.7 / 3.0},
                                                                      Vec{2.0 / 3.0, 1.0 / 3.0})));
}

TEST_CASE("cost-weighted classification bounds at m = 3") {
  CwBoundOptions o;
  o.sweep.samples = 1500;
  o.wset_samples = 40;
  o.w_points = 21;
  o.mesh.divisions = 16;
  for (const BoundReport& r : check_cw_bounds(rule_of(FamilyKind::MultinomialLikelihood, 3), kCost, o)) {
    CHECK_MESSAGE(r.passed(), r.bound_id);
  }
}
