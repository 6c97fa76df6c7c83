#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mcloss/hinge.hpp"
#include "mcloss/mesh.hpp"

using namespace mcloss;

namespace {

LossFamily fam(FamilyKind k, std::size_t m) { return LossFamily{k, m, 0.5, std::nullopt}; }

Vec values(double (*l)(std::size_t, CSpan), CSpan tau) {
  Vec v(tau.size() + 1);
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = l(j, tau);
  return v;
}

void check_vec(const Vec& got, const Vec& want, double tol = 1e-15) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) <= tol);
}

Vec random_tau(std::size_t dim, Rng& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Vec t(dim);
  for (double& x : t) x = u(rng);
  return t;
}

}  // namespace

TEST_CASE("hand values at tau = (0.6, -0.3)") {
  const Vec tau{0.6, -0.3};
  check_vec(values(zo3, tau), {0.4, 1.3, 0.6}, 1e-15);
  check_vec(values(llw2, tau), {0.7, 1.3, 0.6}, 1e-15);
  check_vec(values(zo4, tau), {0.55, 1.3, 0.45}, 1e-15);
  check_vec(values(dkr2, tau), {0.55, 1.45, 0.45}, 1e-15);
  check_vec(zo4_all(tau), {0.55, 1.3, 0.45}, 1e-15);
}

TEST_CASE("prediction maps disagree on the worked example") {
  const Vec tau{0.6, -0.3};
  check_vec(predict_dag(tau), {0.6, -0.3, 0.4}, 1e-15);
  check_vec(predict_tilde(tau), {0.6, -0.3, 0.7}, 1e-15);
  CHECK(argmax_lowest(predict_dag(tau)) == 0);
  CHECK(argmax_lowest(predict_tilde(tau)) == 2);
  check_vec(predict_tilde(Vec{1.0, 0.0}), {1.0, 0.0, 0.0});
  check_vec(predict_dag(Vec{0.0, 0.0}), {0.0, 0.0, 1.0});
  const Vec pos{0.2, 0.5};
  check_vec(predict_dag(pos), predict_tilde(pos));
}

TEST_CASE("sigma_L") {
  const Loss z4 = make_hinge_loss(fam(FamilyKind::ZO4, 3));
  const Vec s = sigma_L(z4, Vec{0.6, -0.3});
  check_vec(s, {-0.55, -1.3, -0.45}, 1e-15);
  CHECK(argmax_lowest(s) == argmax_lowest(predict_tilde(Vec{0.6, -0.3})));
  const Vec h = sigma_L(make_hinge_loss(fam(FamilyKind::Hinge2, 2)), Vec{2.0});
  check_vec(h, {0.0, -2.0});
  CHECK(argmax_lowest(h) == 0);
}

TEST_CASE("two-class hinge") {
  CHECK(hinge2(0, 0.0) == 1.0);
  CHECK(hinge2(0, 2.0) == 0.0);
  CHECK(hinge2(1, 2.0) == 2.0);
  for (double t = 0.0; t <= 1.0; t += 0.125) {
    CHECK(hinge2(0, t) == doctest::Approx(1.0 - t));
    CHECK(hinge2(1, t) == doctest::Approx(t));
  }
  check_vec(values(zo4, Vec{2.0}), {0.0, 2.0});
  check_vec(values(dkr2, Vec{2.0}), {0.0, 3.0});
  for (double t : {-1.5, -0.2, 0.0, 0.4, 1.0, 2.5}) {
    CHECK(zo3(0, Vec{t}) == doctest::Approx(hinge2(0, t)));
    CHECK(zo3(1, Vec{t}) == doctest::Approx(hinge2(1, t)));
  }
}

TEST_CASE("cost-weighted hinges") {
  const CostMatrix zo = CostMatrix::zero_one(3);
  CHECK(cw2(zo, 1, Vec{0.2, 0.5, 0.3}) == doctest::Approx(0.5));
  CHECK(cw2(zo, 2, Vec{0.0, 0.0, 1.0}) == 0.0);
  // cw2 is not proper: at eta = (0.6, 0.4) the vertex beats lambda = eta.
  const CostMatrix zo2 = CostMatrix::zero_one(2);
  const Vec eta{0.6, 0.4};
  auto r = [&](const Vec& lam) { return eta[0] * cw2(zo2, 0, lam) + eta[1] * cw2(zo2, 1, lam); };
  CHECK(r(Vec{1.0, 0.0}) == doctest::Approx(0.4));
  CHECK(r(eta) == doctest::Approx(0.48));

  const CostMatrix c(3, Vec{0.0, 0.2, 0.9, 0.4, 0.0, 0.3, 0.7, 0.1, 0.0});
  for (std::size_t i = 0; i < 500; ++i) {
    Rng rng = stream_rng(41, i);
    const Vec tau = random_tau(2, rng);
    for (std::size_t j = 0; j < 3; ++j) CHECK(cw3(zo, j, tau) == doctest::Approx(zo3(j, tau)).epsilon(1e-14));
    const Vec p = sample_simplex_mixed(3, rng);
    const Vec ct = c.apply(p);
    for (std::size_t j = 0; j < 3; ++j) CHECK(cw3(c, j, Vec{p[0], p[1]}) == doctest::Approx(ct[j]).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("all four hinges equal 1 - tau_tilde_j on the simplex") {
  for (std::size_t m = 2; m <= 6; ++m) {
    for (std::size_t i = 0; i < 300; ++i) {
      Rng rng = stream_rng(43, i);
      const Vec p = sample_simplex_mixed(m, rng);
      const Vec tau(p.begin(), p.end() - 1);
      for (std::size_t j = 0; j < m; ++j) {
        const double want = 1.0 - p[j];
        CHECK(std::abs(zo3(j, tau) - want) <= 1e-12);
        CHECK(std::abs(llw2(j, tau) - want) <= 1e-12);
        CHECK(std::abs(zo4(j, tau) - want) <= 1e-12);
        CHECK(std::abs(dkr2(j, tau) - want) <= 1e-12);
      }
    }
  }
}

TEST_CASE("ordering 0 <= zo3 <= llw2 and 0 <= zo4 <= dkr2") {
  for (std::size_t m = 2; m <= 6; ++m) {
    for (std::size_t i = 0; i < 2000; ++i) {
      Rng rng = stream_rng(47, i);
      const Vec tau = random_tau(m - 1, rng);
      for (std::size_t j = 0; j < m; ++j) {
        CHECK(zo3(j, tau) >= 0.0);
        CHECK(zo3(j, tau) <= llw2(j, tau) + 1e-12);
        CHECK(zo4(j, tau) >= 0.0);
        CHECK(zo4(j, tau) <= dkr2(j, tau) + 1e-12);
      }
    }
  }
}

TEST_CASE("zo4_all agrees with the per-label reference") {
  for (std::size_t m = 2; m <= 9; ++m) {
    for (std::size_t i = 0; i < 1000; ++i) {
      Rng rng = stream_rng(53, i);
      Vec tau = random_tau(m - 1, rng);
      if (i % 5 == 0) {
        for (double& x : tau) x = std::round(x * 2.0) / 2.0;
      }
      const Vec fast = zo4_all(tau), slow = zo4_all_reference(tau);
      for (std::size_t j = 0; j < m; ++j) {
        CHECK(std::abs(fast[j] - slow[j]) <= 1e-12);
        CHECK(std::abs(fast[j] - zo4(j, tau)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("sum-to-zero forms are translation invariant") {
  for (std::size_t i = 0; i < 500; ++i) {
    Rng rng = stream_rng(59, i);
    Vec g = random_tau(4, rng);
    double mean = 0.0;
    for (double x : g) mean += x / 4.0;
    for (double& x : g) x -= mean;
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const double b = u(rng);
    Vec shifted(g);
    for (double& x : shifted) x += b;
    for (std::size_t j = 0; j < 4; ++j) CHECK(dkr(j, g) == doctest::Approx(dkr(j, shifted)).epsilon(1e-12));
    CHECK_NOTHROW(llw(0, g));
  }
  CHECK_THROWS_AS(llw(0, Vec{1.0, 0.0, 0.0}), InvalidInput);
}

TEST_CASE("subgradients satisfy the convexity inequality") {
  for (FamilyKind k : {FamilyKind::ZO3, FamilyKind::ZO4, FamilyKind::LLW2, FamilyKind::DKR2, FamilyKind::CW3}) {
    for (std::size_t m = 2; m <= 5; ++m) {
      const LossFamily f = fam(k, m);
      for (std::size_t i = 0; i < 300; ++i) {
        Rng rng = stream_rng(61, i);
        const Vec tau = random_tau(m - 1, rng);
        const Vec other = random_tau(m - 1, rng);
        const std::size_t j = i % m;
        const Vec g = hinge_subgradient(f, j, tau);
        const Vec at = hinge_values(f, tau), there = hinge_values(f, other);
        double lin = at[j];
        for (std::size_t l = 0; l + 1 < m; ++l) lin += g[l] * (other[l] - tau[l]);
        CHECK(there[j] >= lin - 1e-12);
      }
    }
  }
}

TEST_CASE("hinge arguments are validated") {
  CHECK_THROWS_AS(zo4(3, Vec{0.1, 0.2}), InvalidInput);
  CHECK_THROWS_AS(cw3(CostMatrix::zero_one(3), 0, Vec{0.1}), InvalidInput);
}
