#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mcloss/mesh.hpp"
#include "mcloss/simplex.hpp"

using namespace mcloss;

namespace {

// Exhaustive oracle for the sum of the two largest absolute entries.
double inf2_pairs(const Vec& v) {
  if (v.size() < 2) return v.empty() ? 0.0 : std::abs(v[0]);
  double best = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) best = std::max(best, std::abs(v[i]) + std::abs(v[j]));
  }
  return best;
}

std::size_t binom(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("norm_inf2 examples") {
  CHECK(norm_inf2(Vec{0.3, -0.3, 0.0}) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(norm_inf2(Vec{0.0, 0.0, 0.0}) == 0.0);
  CHECK(norm_inf2(Vec{1.0, -2.0, 0.5, 0.5}) == doctest::Approx(3.0));
}

TEST_CASE("norm_inf2 matches the pair maximum on random vectors") {
  Rng rng = stream_rng(11, 0);
  std::normal_distribution<double> n01;
  for (int it = 0; it < 2000; ++it) {
    Vec v(2 + it % 6);
    for (double& x : v) x = n01(rng);
    CHECK(norm_inf2(v) == doctest::Approx(inf2_pairs(v)).epsilon(1e-14));
    CHECK(norm_inf2(v) <= norm1(v) + 1e-15);
    CHECK(norm_inf2(v) >= norm_inf(v));
  }
}

TEST_CASE("l1 norm examples") {
  CHECK(norm1(Vec{0.4, -0.4}) == doctest::Approx(0.8));
  CHECK(norm1(Vec{0.0, 0.0, 0.0}) == 0.0);
  CHECK(norm1(Vec{0.1, 0.2, -0.3}) == doctest::Approx(0.6));
}

TEST_CASE("argmax breaks ties toward the lowest index") {
  CHECK(argmax_lowest(Vec{0.5, 0.5, 0.0}) == 0);
  CHECK(argmax_lowest(Vec{0.0, 0.0, 1.0}) == 2);
  CHECK(argmax_lowest(Vec{2.0, 3.0, 3.0}) == 1);
  CHECK(argmin_lowest(Vec{1.0, 0.0, 0.0}) == 1);
  CHECK_THROWS_AS(argmax_lowest(Vec{}), InvalidInput);
}

TEST_CASE("make_prob") {
  CHECK(make_prob(Vec{0.5, 0.5}).vec() == Vec{0.5, 0.5});
  const ProbVector v = make_prob(Vec{1.0, 0.0}, 0.0);
  CHECK(v[0] == 1.0);
  CHECK(v[1] == 0.0);
  const ProbVector u = make_prob(Vec{0.3333333, 0.3333333, 0.3333334});
  double s = 0.0;
  for (double x : u) s += x;
  CHECK(std::abs(s - 1.0) <= 1e-12);
  for (double x : u) CHECK(std::abs(x - 1.0 / 3.0) <= 1e-7);
  CHECK_THROWS_AS(make_prob(Vec{0.7, 0.7}), InvalidInput);
  CHECK_THROWS_AS(make_prob(Vec{1.2, -0.2}), InvalidInput);
  const ProbVector c = make_prob(Vec{1.0, 0.0}, 1e-6);
  CHECK(c[1] > 0.0);
  CHECK(on_simplex(c));
}

TEST_CASE("ProbVector constructors validate") {
  CHECK(ProbVector::uniform(4)[3] == doctest::Approx(0.25));
  CHECK(ProbVector::vertex(3, 1).vec() == Vec{0.0, 1.0, 0.0});
  CHECK_THROWS_AS(ProbVector::from_exact(Vec{0.5, 0.6}), InvalidInput);
  CHECK_THROWS_AS(ProbVector::vertex(3, 3), InvalidInput);
}

TEST_CASE("cost matrices") {
  const CostMatrix zo = CostMatrix::zero_one(3);
  CHECK(zo(0, 0) == 0.0);
  CHECK(zo(0, 2) == 1.0);
  const Vec eta{0.5, 0.3, 0.2};
  // Cbar for zero-one costs is the identity.
  const Vec t = zo.cbar_transpose_apply(eta);
  for (std::size_t k = 0; k < 3; ++k) CHECK(t[k] == doctest::Approx(eta[k]));
  const CostMatrix cw = CostMatrix::class_weighted(Vec{1.0, 2.0, 3.0});
  CHECK(cw(1, 0) == 2.0);
  CHECK(cw(1, 1) == 0.0);
  const Vec tc = cw.cbar_transpose_apply(eta);
  CHECK(tc[0] == doctest::Approx(0.5));
  CHECK(tc[1] == doctest::Approx(0.6));
  CHECK(tc[2] == doctest::Approx(0.6));
  CHECK_THROWS_AS(CostMatrix(2, Vec{1.0, 1.0, 1.0, 0.0}), InvalidInput);
  CHECK_THROWS_AS(CostMatrix(2, Vec{0.0, -1.0, 1.0, 0.0}), InvalidInput);
}

TEST_CASE("simplex meshes have the binomial size and lie on the simplex") {
  for (std::size_t m = 2; m <= 5; ++m) {
    for (std::size_t d : {1u, 3u, 6u}) {
      const auto mesh = simplex_mesh(m, d);
      CHECK(mesh.size() == binom(d + m - 1, m - 1));
      for (const Vec& p : mesh) CHECK(on_simplex(p));
    }
  }
  for (const Vec& p : simplex_mesh_min(3, 10, 0.1)) CHECK(*std::min_element(p.begin(), p.end()) >= 0.1 - 1e-12);
  CHECK(box_grid(2, -1.0, 1.0, 5).size() == 25);
}

TEST_CASE("stream_rng is a pure function of seed and index") {
  Rng a = stream_rng(7, 123), b = stream_rng(7, 123), c = stream_rng(7, 124);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
}

TEST_CASE("samplers stay on the simplex") {
  for (std::size_t i = 0; i < 2000; ++i) {
    Rng rng = stream_rng(3, i);
    const std::size_t m = 2 + i % 5;
    CHECK(on_simplex(sample_simplex_mixed(m, rng), 1e-12));
    const Vec in = sample_simplex_interior(m, 0.01, rng);
    CHECK(on_simplex(in, 1e-12));
    CHECK(*std::min_element(in.begin(), in.end()) >= 0.01 - 1e-12);
  }
}
