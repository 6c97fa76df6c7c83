#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "mcloss/entropy.hpp"
#include "mcloss/family.hpp"
#include "mcloss/hinge.hpp"
#include "mcloss/loss.hpp"
#include "mcloss/mesh.hpp"
#include "mcloss/scoring.hpp"

using namespace mcloss;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Closed form of the Shannon dissimilarity's conjugate.
double shannon_conjugate(const Vec& s) {
  double e = 0.0;
  for (double x : s) e += std::exp(x);
  return e < 1.0 ? -std::log1p(-e) : kInf;
}

DissimilaritySpec zero_dissimilarity(std::size_t dim) {
  DissimilaritySpec f;
  f.label = "zero";
  f.dim = dim;
  f.eval = [](CSpan) { return 0.0; };
  f.subgradient = [dim](CSpan) { return Vec(dim, 0.0); };
  return f;
}

}  // namespace

TEST_CASE("conjugate of the zero-one dissimilarity") {
  const DissimilaritySpec f = zero_one_dissimilarity(2);
  CHECK(conjugate_numeric(f, Vec{-0.5}) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(conjugate_numeric(f, Vec{0.5}) == kInf);
  CHECK(conjugate_numeric(zero_dissimilarity(1), Vec{0.0}) == 0.0);
  for (double s : {-3.0, -1.0, -0.7, -0.2, 0.0}) {
    CHECK(conjugate_numeric(f, Vec{s}) == doctest::Approx(std::max(0.0, 1.0 + s)).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("cost-weighted conjugate") {
  const CostMatrix zo = CostMatrix::zero_one(2);
  CHECK(conjugate_cw(zo, Vec{-0.5}) == doctest::Approx(0.5));
  CHECK(conjugate_cw(zo, Vec{0.1}) == kInf);
  const CostMatrix c(3, Vec{0.0, 0.2, 0.9, 0.4, 0.0, 0.3, 0.7, 0.1, 0.0});
  // s_j = -(C e_m)_j makes lambda = e_m feasible with value c_mm = 0.
  CHECK(conjugate_cw(c, Vec{-0.9, -0.3}) == doctest::Approx(0.0).scale(1.0));
  const DissimilaritySpec f = cost_weighted_dissimilarity(c);
  for (const Vec& s : box_grid(2, -1.5, 0.0, 7)) {
    const double exact = conjugate_cw(c, s);
    const double numeric = conjugate_numeric(f, s);
    if (std::isinf(exact)) {
      CHECK(std::isinf(numeric));
    } else {
      // The numeric sup is a grid search and can only fall short of the LP value.
      CHECK(numeric <= exact + 1e-12);
      CHECK(numeric >= exact - 1e-3);
    }
  }
}

TEST_CASE("numeric conjugate of the Shannon dissimilarity") {
  for (std::size_t m = 2; m <= 3; ++m) {
    const DissimilaritySpec f = shannon_dissimilarity(m);
    for (const Vec& s : box_grid(m - 1, -4.0, -0.8, 5)) {
      CHECK(conjugate_numeric(f, s) == doctest::Approx(shannon_conjugate(s)).epsilon(1e-7).scale(1.0));
    }
  }
}

TEST_CASE("Fenchel-Young equality at subgradients") {
  for (const DissimilaritySpec& f : {lbeta_dissimilarity(3, 0.5, false), shannon_dissimilarity(3),
                                     separable_dissimilarity(f0_exponential(), 3)}) {
    for (const Vec& t : box_grid(2, 0.2, 3.0, 4)) {
      const Vec g = f.subgradient(t);
      CHECK(conjugate_numeric(f, g) == doctest::Approx(dot(g, t) - f(t)).epsilon(1e-7).scale(1.0));
    }
  }
}

TEST_CASE("L_f parametrizations") {
  const DissimilaritySpec f = separable_dissimilarity(f0_exponential(), 2);
  CHECK(loss_from_f_simplex(f, 0, Vec{0.8, 0.2}) == doctest::Approx(-0.5));
  CHECK(std::abs(loss_from_f_ratio(f, 1, Vec{1.0})) <= 1e-15);
  CHECK(loss_from_f(0, Vec{0.3, -0.2}, 1.5) == -0.3);
  CHECK(loss_from_f(2, Vec{0.3, -0.2}, 1.5) == 1.5);

  for (const DissimilaritySpec& g : {shannon_dissimilarity(3), lbeta_dissimilarity(3, 0.5, false)}) {
    const EntropySpec h = entropy_from_dissimilarity(g);
    for (const Vec& q : simplex_mesh_min(3, 10, 0.1)) {
      double r = 0.0;
      for (std::size_t j = 0; j < 3; ++j) r += q[j] * loss_from_f_simplex(g, j, q);
      CHECK(r == doctest::Approx(h(q)).epsilon(1e-12));
      const Vec u{q[0] / q[2], q[1] / q[2]};
      for (std::size_t j = 0; j < 3; ++j) {
        CHECK(loss_from_f_ratio(g, j, u) == doctest::Approx(loss_from_f_simplex(g, j, q)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("L_f3 of the two-class likelihood generator is the log loss up to a constant") {
  const DissimilaritySpec f = separable_dissimilarity(f0_likelihood(), 2);
  const double shift = loss_from_f_simplex(f, 0, Vec{0.5, 0.5}) + std::log(0.5);
  for (double q1 : {0.1, 0.3, 0.5, 0.77, 0.95}) {
    const Vec q{q1, 1.0 - q1};
    CHECK(loss_from_f_simplex(f, 0, q) - shift == doctest::Approx(-std::log(q1)).epsilon(1e-12));
    CHECK(loss_from_f_simplex(f, 1, q) - shift == doctest::Approx(-std::log(1.0 - q1)).epsilon(1e-12));
  }
}

TEST_CASE("entropy of a loss by grid search") {
  LossFamily hinge{FamilyKind::Hinge2, 2, 0.5, std::nullopt};
  const Loss h2 = make_hinge_loss(hinge);
  CHECK(entropy_of_loss(h2, margin_actions(1, -2.0, 3.0, 101), Vec{0.3, 0.7}).value ==
        doctest::Approx(0.3).epsilon(1e-3));

  const ScoringRule like = make_scoring_rule(LossFamily{FamilyKind::MultinomialLikelihood, 3, 0.5, std::nullopt});
  const Optimum o = entropy_of_loss(like.as_loss(), simplex_actions(3, 20), ProbVector::uniform(3));
  CHECK(o.value == doctest::Approx(std::log(3.0)).epsilon(1e-3));

  LossFamily z4{FamilyKind::ZO4, 3, 0.5, std::nullopt};
  CHECK(entropy_of_loss(make_hinge_loss(z4), margin_actions(2, -1.0, 1.0, 21), Vec{0.5, 0.3, 0.2}).value ==
        doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("loss from an entropy by the sup construction") {
  const EntropySpec hz = zero_one_entropy(3);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(loss_from_entropy_duchi(hz, j, Vec{0.0, 0.0, 0.0}) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  }
  const Vec g{0.3, -0.2, 0.1};
  const Vec shifted{5.3, 4.8, 5.1};
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(loss_from_entropy_duchi(hz, j, shifted) == doctest::Approx(loss_from_entropy_duchi(hz, j, g)).epsilon(1e-9));
  }
}
