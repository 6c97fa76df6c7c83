#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mcloss/hinge.hpp"
#include "mcloss/mesh.hpp"
#include "mcloss/regret.hpp"

using namespace mcloss;

namespace {

LossFamily fam(FamilyKind k, std::size_t m, double beta = 0.5) { return LossFamily{k, m, beta, std::nullopt}; }

SweepOptions small(std::size_t n) {
  SweepOptions o;
  o.samples = n;
  o.seed = 3;
  return o;
}

}  // namespace

TEST_CASE("zero-one and cost-weighted regrets") {
  const Vec eta{0.5, 0.3, 0.2};
  CHECK(bzo(eta, Vec{1.0, 0.0, 0.0}) == 0.0);
  CHECK(bzo(eta, Vec{0.0, 0.0, 1.0}) == doctest::Approx(0.3));
  CHECK(bcw(CostMatrix::zero_one(3), eta, Vec{0.0, 1.0, 0.0}) == doctest::Approx(0.2));
  const CostMatrix c(3, Vec{0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0});
  // C^T eta = (0.7, 0.7, 1.3).
  CHECK(bcw(c, eta, Vec{0.0, 0.0, 1.0}) == doctest::Approx(0.6));
  CHECK(bcw(c, eta, Vec{0.0, 1.0, 0.0}) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("zo4 regret bound at the worked example") {
  const Vec eta{0.5, 0.3, 0.2}, tau{0.6, -0.3};
  const Loss z4 = make_hinge_loss(fam(FamilyKind::ZO4, 3));
  const double lhs = bzo(eta, predict_tilde(tau)) / 3.0;
  const double rhs = regret(z4, zero_one_entropy(3), eta, tau);
  CHECK(lhs == doctest::Approx(0.1));
  CHECK(rhs == doctest::Approx(0.255));
  CHECK(lhs <= rhs);
  // tau_tilde at the Bayes vertex: both sides vanish.
  CHECK(bzo(eta, predict_tilde(Vec{1.0, 0.0})) == 0.0);
  CHECK(std::abs(regret(z4, zero_one_entropy(3), eta, Vec{1.0, 0.0})) <= 1e-15);
}

TEST_CASE("regret rejects an entropy above the Bayes risk") {
  const Loss z4 = make_hinge_loss(fam(FamilyKind::ZO4, 3));
  CHECK_THROWS_AS(regret(z4, shannon_entropy(3), ProbVector::uniform(3), Vec{1.0 / 3.0, 1.0 / 3.0}),
                  ConfigurationError);
  CHECK_THROWS_AS(certify_entropy(z4, shannon_entropy(3), margin_actions(2, -1.0, 1.0, 11), {ProbVector::uniform(3).vec()}),
                  ConfigurationError);
  CHECK_NOTHROW(certify_entropy(z4, zero_one_entropy(3), margin_actions(2, -1.0, 1.0, 11),
                                {ProbVector::uniform(3).vec(), Vec{0.5, 0.3, 0.2}}));
}

TEST_CASE("hinge, general and ordering bounds on small sweeps") {
  for (std::size_t m = 2; m <= 5; ++m) {
    CHECK(check_hinge_bounds(fam(FamilyKind::ZO4, m), small(3000)).passed());
    CHECK(check_hinge_bounds(fam(FamilyKind::CW3, m), small(3000)).passed());
    for (FamilyKind k : {FamilyKind::ZO3, FamilyKind::LLW2, FamilyKind::DKR2}) {
      CHECK(check_general_bound(fam(k, m), small(2000)).passed());
    }
    CHECK(check_monotone_ordering(fam(FamilyKind::ZO4, m), small(2000)).passed());
  }
  CHECK_THROWS(check_hinge_bounds(fam(FamilyKind::LLW2, 3), small(10)));
}

TEST_CASE("value manifolds") {
  const Loss z4 = make_hinge_loss(fam(FamilyKind::ZO4, 3));
  const Vec v = z4.vector(Vec{1.0, 0.0});
  CHECK(v == Vec{0.0, 1.0, 1.0});
  const Vec z{0.55, 1.3, 0.45};
  double capped = 0.0;
  for (double x : z) capped += std::min(x, 1.0);
  CHECK(capped == doctest::Approx(2.0));
  for (FamilyKind k : {FamilyKind::ZO3, FamilyKind::ZO4, FamilyKind::LLW2, FamilyKind::DKR2}) {
    const ManifoldResult r = value_manifold_check(make_hinge_loss(fam(k, 3)), small(3000));
    CHECK(r.membership.passed());
    CHECK(r.vertices.passed());
  }
  const std::vector<Vec> pts{Vec{0.0, 0.0}, Vec{1.0, 0.0}, Vec{0.0, 1.0}};
  CHECK(hull_distance(pts, Vec{0.25, 0.25}, 500) <= 1e-9);
  CHECK(hull_distance(pts, Vec{1.0, 1.0}, 500) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
}

TEST_CASE("kappa constants") {
  for (std::size_t m = 2; m <= 6; ++m) {
    CHECK(kappa_lbeta(m, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(kappa_lbeta_segment(m, 0.5, true) == doctest::Approx(kappa_lbeta_segment(m, 0.5, false)).epsilon(1e-12));
    CHECK(kappa_lbeta_rescaled(m, 1.0) == doctest::Approx(1.0 / std::log(static_cast<double>(m))).epsilon(1e-12));
    CHECK(kappa_lbeta_rescaled(m, 1.0 - 1e-6) ==
          doctest::Approx(1.0 / std::log(static_cast<double>(m))).epsilon(1e-4));
  }
  CHECK(kappa_pairwise_beta(-0.5) == 2.0);
  CHECK(kappa_constant(fam(FamilyKind::MultinomialLikelihood, 4)) == 1.0);
  CHECK(kappa_constant(fam(FamilyKind::PairwiseSymExponential, 3)) == 2.0);
  CHECK_THROWS_AS(kappa_constant(fam(FamilyKind::ZO4, 3)), InvalidInput);
}

TEST_CASE("strong convexity moduli") {
  CHECK(strong_convexity_modulus(shannon_entropy(3), 12, 16) >= 1.0 - 1e-3);
  CHECK(strong_convexity_modulus(lbeta_entropy(3, 0.5, false), 12, 16) >= 1.0 - 1e-3);
  // Shannon attains its modulus at the two-point split, so it is also close to 1.
  CHECK(strong_convexity_modulus(shannon_entropy(2), 40, 4) <= 1.05);
  CHECK_THROWS_AS(strong_convexity_modulus(zero_one_entropy(3), 6), InvalidInput);
}

TEST_CASE("Pinsker-type spot value") {
  const double b = bregman(shannon_entropy(2), Vec{0.9, 0.1}, Vec{0.5, 0.5});
  const double z = bzo(Vec{0.9, 0.1}, Vec{0.5 - 1e-12, 0.5 + 1e-12});
  CHECK(0.5 * z * z == doctest::Approx(0.32));
  CHECK(0.5 * z * z <= b);
  for (std::size_t m = 2; m <= 5; ++m) {
    const ScoringRule like = make_scoring_rule(fam(FamilyKind::MultinomialLikelihood, m));
    auto [l1, zq] = check_scoring_bounds(like, 1.0, small(3000));
    CHECK(l1.passed());
    CHECK(zq.passed());
  }
}

TEST_CASE("calibration infima") {
  const Vec eta{0.5, 0.3, 0.2};
  const auto actions = box_grid(2, -1.5, 1.5, 61);
  const Loss z4 = make_hinge_loss(fam(FamilyKind::ZO4, 3));
  auto tilde = [](CSpan a) { return predict_tilde(a); };
  CHECK(calibration_infimum(z4, zero_one_entropy(3), tilde, eta, 2, actions) >= 0.1 - 1e-3);
  CHECK_THROWS_AS(calibration_infimum(z4, zero_one_entropy(3), tilde, eta, 0, actions), InvalidInput);
  const Loss l2 = make_hinge_loss(fam(FamilyKind::LLW2, 3));
  CHECK(calibration_infimum(l2, zero_one_entropy(3), tilde, eta, 1, actions) >= 0.2 / 3.0 - 1e-3);
}

TEST_CASE("Bregman monotonicity along segments") {
  for (const EntropySpec& h : {shannon_entropy(3), lbeta_entropy(4, 0.5, false), lbeta_entropy(3, 2.0, true)}) {
    auto [a, b] = check_bregman_monotonicity(h, small(2000));
    CHECK(a.passed());
    CHECK(b.passed());
  }
}

TEST_CASE("prediction map names round trip") {
  for (PredictionMap p : {PredictionMap::Identity, PredictionMap::Dagger, PredictionMap::Tilde, PredictionMap::SigmaL}) {
    CHECK(prediction_map_from_name(prediction_map_name(p)) == p);
  }
  CHECK(prediction_map_from_name("argmax") == PredictionMap::Identity);
  CHECK_THROWS(prediction_map_from_name("sideways"));
}
