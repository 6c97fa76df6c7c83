#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mcloss/entropy.hpp"
#include "mcloss/mesh.hpp"
#include "mcloss/simplex.hpp"

using namespace mcloss;

namespace {

double kl(const Vec& p, const Vec& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) s += p[i] * std::log(p[i] / q[i]);
  }
  return s;
}

double power_sum_norm(const Vec& v, double beta) {
  double s = 0.0;
  for (double x : v) s += std::pow(x, beta);
  return std::pow(s, 1.0 / beta);
}

}  // namespace

TEST_CASE("perspective entropy examples") {
  const EntropySpec h = entropy_from_dissimilarity(separable_dissimilarity(f0_exponential(), 2));
  CHECK(std::abs(h(Vec{0.5, 0.5})) <= 1e-15);
  CHECK(h(Vec{0.8, 0.2}) == doctest::Approx(-0.2).epsilon(1e-13));
  const EntropySpec hz = entropy_from_dissimilarity(zero_one_dissimilarity(2));
  CHECK(hz(Vec{0.3, 0.7}) == doctest::Approx(0.3).epsilon(1e-13));
}

TEST_CASE("dissimilarity of the zero-one entropy is -min(t, 1)") {
  const DissimilaritySpec f = dissimilarity_from_entropy(zero_one_entropy(2));
  for (double t : {0.0, 0.2, 0.999, 1.0, 1.5, 7.0}) CHECK(f(Vec{t}) == doctest::Approx(-std::min(t, 1.0)));
}

TEST_CASE("dissimilarity of the Shannon entropy") {
  for (std::size_t m = 2; m <= 4; ++m) {
    const DissimilaritySpec f = dissimilarity_from_entropy(shannon_entropy(m));
    for (const Vec& t : box_grid(m - 1, 0.0, 3.0, 5)) {
      double tb = 1.0;
      for (double x : t) tb += x;
      double expected = std::log(1.0 / tb);
      for (double x : t) expected += x > 0.0 ? x * std::log(x / tb) : 0.0;
      CHECK(f(t) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("closed-form entropies") {
  CHECK(zero_one_entropy(3)(Vec{0.5, 0.3, 0.2}) == doctest::Approx(0.5));
  CHECK(zero_one_entropy(4)(ProbVector::uniform(4)) == doctest::Approx(0.75));
  CHECK(zero_one_entropy(3)(Vec{1.0, 0.0, 0.0}) == 0.0);
  CHECK(shannon_entropy(3)(ProbVector::uniform(3)) == doctest::Approx(std::log(3.0)));

  const EntropySpec cw = cost_weighted_entropy(CostMatrix::zero_one(3));
  for (const Vec& eta : simplex_mesh(3, 9)) CHECK(cw(eta) == doctest::Approx(zero_one_entropy(3)(eta)).epsilon(1e-14));
  const CostMatrix c(3, Vec{0.0, 0.2, 0.9, 0.4, 0.0, 0.3, 0.7, 0.1, 0.0});
  for (std::size_t j = 0; j < 3; ++j) CHECK(cost_weighted_entropy(c)(ProbVector::vertex(3, j)) == 0.0);
}

TEST_CASE("L_beta entropies") {
  for (std::size_t m = 2; m <= 5; ++m) {
    for (double beta : {0.3, 0.5, 2.0, 3.0}) {
      CHECK(entropy_lbeta(ProbVector::uniform(m), beta, true) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(entropy_lbeta(ProbVector::vertex(m, m - 1), beta, true)) <= 1e-14);
    }
  }
  const Vec eta{0.25, 0.25, 0.5};
  const double norm = power_sum_norm(eta, 0.5);
  CHECK(entropy_lbeta(eta, 0.5, false) == doctest::Approx(norm).epsilon(1e-14));
  CHECK(entropy_lbeta(eta, 0.5, true) == doctest::Approx((norm - 1.0) / 2.0).epsilon(1e-14));
  CHECK(entropy_lbeta(eta, 0.5, true) == doctest::Approx(0.95710678118654746).epsilon(1e-14));
}

TEST_CASE("duality round trip on interior and face points") {
  for (std::size_t m = 2; m <= 4; ++m) {
    for (const EntropySpec& h : {shannon_entropy(m), zero_one_entropy(m), lbeta_entropy(m, 0.5, false),
                                 lbeta_entropy(m, 2.0, true), lbeta_entropy(m, 0.0, true)}) {
      const EntropySpec back = entropy_from_dissimilarity(dissimilarity_from_entropy(h));
      for (const Vec& eta : simplex_mesh(m, m == 4 ? 6 : 12)) {
        CHECK(std::abs(back(eta) - h(eta)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("dissimilarity recession limits agree with the small-scale perspective") {
  const double c = 1e-12;
  for (const DissimilaritySpec& f : {shannon_dissimilarity(3), zero_one_dissimilarity(3),
                                     lbeta_dissimilarity(3, 2.0, false), separable_dissimilarity(f0_exponential(), 3),
                                     pairwise_symmetric_dissimilarity(f0_likelihood(), 3)}) {
    REQUIRE(f.recession);
    for (const Vec& t : box_grid(2, 0.0, 2.0, 5)) {
      Vec u(t);
      for (double& x : u) x /= c;
      CHECK(f.recession(t) == doctest::Approx(c * f(u)).epsilon(1e-5).scale(1.0));
    }
  }
}

TEST_CASE("Bregman divergences") {
  const Vec eta{0.9, 0.1}, q{0.5, 0.5};
  CHECK(bregman(shannon_entropy(2), eta, q) == doctest::Approx(0.9 * std::log(1.8) + 0.1 * std::log(0.2)));
  CHECK(bregman(shannon_entropy(2), eta, q) == doctest::Approx(0.36807).epsilon(2e-5));
  CHECK(std::abs(bregman(shannon_entropy(3), Vec{0.2, 0.3, 0.5}, Vec{0.2, 0.3, 0.5})) <= 1e-15);

  const EntropySpec h = lbeta_entropy(3, 0.5, false);
  for (std::size_t i = 0; i < 500; ++i) {
    Rng rng = stream_rng(5, i);
    const Vec a = sample_simplex_interior(3, 1e-3, rng);
    const Vec b = sample_simplex_interior(3, 1e-3, rng);
    double sq = 0.0, ratio = 0.0, se = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      sq += std::sqrt(b[k]);
      ratio += a[k] / std::sqrt(b[k]);
      se += std::sqrt(a[k]);
    }
    CHECK(bregman(h, a, b) == doctest::Approx(sq * ratio - se * se).epsilon(1e-10).scale(1.0));
    CHECK(bregman(shannon_entropy(3), a, b) == doctest::Approx(kl(a, b)).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("Bregman divergences are nonnegative") {
  for (std::size_t i = 0; i < 2000; ++i) {
    Rng rng = stream_rng(9, i);
    const std::size_t m = 2 + i % 4;
    const Vec a = sample_simplex_mixed(m, rng);
    const Vec b = sample_simplex_interior(m, 1e-6, rng);
    CHECK(bregman(shannon_entropy(m), a, b) >= -1e-12);
    CHECK(bregman(lbeta_entropy(m, 0.5, true), a, b) >= -1e-12);
    CHECK(bregman(lbeta_entropy(m, 2.0, true), a, b) >= -1e-12);
  }
}

TEST_CASE("entropy arguments are validated") {
  CHECK_THROWS_AS(shannon_entropy(3)(Vec{0.5, 0.5}), InvalidInput);
  CHECK_THROWS_AS(lbeta_entropy(3, -1.0, false), InvalidInput);
}
