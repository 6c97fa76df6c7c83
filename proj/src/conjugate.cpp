#include <algorithm>
#include <cmath>
#include <limits>

#include "mcloss/entropy.hpp"
#include "mcloss/mesh.hpp"

namespace mcloss {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct GridBest {
  double value = -kInf;
  Vec point;
};

GridBest best_on_box(const std::function<double(CSpan)>& obj, CSpan lo, CSpan hi,
                     std::size_t per_axis) {
  const std::size_t d = lo.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= per_axis;
  GridBest best;
  Vec t(d);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t r = idx;
    for (std::size_t i = 0; i < d; ++i) {
      const double frac = static_cast<double>(r % per_axis) / static_cast<double>(per_axis - 1);
      t[i] = lo[i] + (hi[i] - lo[i]) * frac;
      r /= per_axis;
    }
    const double v = obj(t);
    if (v > best.value || best.point.empty()) {
      best.value = v;
      best.point = t;
    }
  }
  return best;
}

// Solves a (n x n) system in place; returns false when singular.
bool solve_linear(std::vector<double>& a, Vec& b, std::size_t n) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    }
    if (std::abs(a[piv * n + col]) < 1e-13) return false;
    if (piv != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[piv * n + k], a[col * n + k]);
      std::swap(b[piv], b[col]);
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double factor = a[r * n + col] / a[col * n + col];
      if (factor == 0.0) continue;
      for (std::size_t k = col; k < n; ++k) a[r * n + k] -= factor * a[col * n + k];
      b[r] -= factor * b[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i * n + i];
  return true;
}

}  // namespace

double conjugate_numeric(const DissimilaritySpec& f, CSpan s, const ConjugateOptions& opts) {
  const std::size_t d = f.dim;
  if (s.size() != d) throw InvalidInput("conjugate_numeric: wrong dimension");
  if (opts.points_per_axis < 3 || !(opts.box > 0.0) || !(opts.zoom_factor > 1.0)) {
    throw InvalidInput("conjugate_numeric: invalid options");
  }
  auto obj = [&](CSpan t) {
    const double v = f.eval(t);
    if (std::isnan(v) || v == kInf) return -kInf;
    return dot(s, t) - v;
  };
  const std::size_t p = opts.points_per_axis;
  for (std::size_t doubling = 0; doubling <= opts.max_doublings; ++doubling) {
    const double hi = opts.box * std::pow(2.0, static_cast<double>(doubling));
    const Vec lo_v(d, 0.0), hi_v(d, hi);
    GridBest best = best_on_box(obj, lo_v, hi_v, p);
    double spacing = hi / static_cast<double>(p - 1);
    bool on_face = false;
    for (double x : best.point) on_face = on_face || x >= hi - 0.5 * spacing;
    if (on_face) {
      if (doubling == opts.max_doublings) return kInf;
      continue;
    }
    double width = hi;
    for (std::size_t round = 0; round < opts.zoom_rounds; ++round) {
      width /= opts.zoom_factor;
      Vec lo_z(d), hi_z(d);
      for (std::size_t i = 0; i < d; ++i) {
        lo_z[i] = std::max(0.0, best.point[i] - 0.5 * width);
        hi_z[i] = lo_z[i] + width;
      }
      GridBest z = best_on_box(obj, lo_z, hi_z, p);
      if (z.value > best.value) best = std::move(z);
      spacing = width / static_cast<double>(p - 1);
    }
    if (opts.polish && std::isfinite(best.value)) {
      auto neg = [&](CSpan t) { return -obj(t); };
      Optimum o = compass_minimize(neg, best.point, spacing, ActionGeometry::Orthant, 1e-12, 20000);
      if (-o.value > best.value) best.value = -o.value;
    }
    return best.value;
  }
  return kInf;
}

double conjugate_cw(const CostMatrix& c, CSpan s) {
  const std::size_t m = c.size();
  if (s.size() + 1 != m) throw InvalidInput("conjugate_cw: wrong dimension");
  auto feasible = [&](CSpan lambda, double slack) {
    double sum = 0.0;
    for (double x : lambda) {
      if (x < -slack) return false;
      sum += x;
    }
    if (std::abs(sum - 1.0) > slack * static_cast<double>(m)) return false;
    const Vec cl = c.apply(lambda);
    for (std::size_t j = 0; j + 1 < m; ++j) {
      if (cl[j] > -s[j] + slack * (1.0 + std::abs(s[j]))) return false;
    }
    return true;
  };
  auto objective = [&](CSpan lambda) {
    double v = 0.0;
    for (std::size_t k = 0; k < m; ++k) v += c(m - 1, k) * lambda[k];
    return v;
  };
  double best = kInf;
  if (m <= 6) {
    // Inequalities: lambda_k >= 0 (k < m) and (C lambda)_j <= -s_j (j < m-1).
    const std::size_t n_ineq = 2 * m - 1;
    std::vector<int> pick(n_ineq, 0);
    std::fill(pick.begin(), pick.begin() + static_cast<long>(m - 1), 1);
    std::sort(pick.begin(), pick.end());
    do {
      std::vector<double> a(m * m, 0.0);
      Vec b(m, 0.0);
      std::size_t row = 0;
      for (std::size_t i = 0; i < n_ineq; ++i) {
        if (!pick[i]) continue;
        if (i < m) {
          a[row * m + i] = 1.0;
          b[row] = 0.0;
        } else {
          const std::size_t j = i - m;
          for (std::size_t k = 0; k < m; ++k) a[row * m + k] = c(j, k);
          b[row] = -s[j];
        }
        ++row;
      }
      for (std::size_t k = 0; k < m; ++k) a[row * m + k] = 1.0;
      b[row] = 1.0;
      if (!solve_linear(a, b, m)) continue;
      if (!feasible(b, 1e-11)) continue;
      best = std::min(best, objective(b));
    } while (std::next_permutation(pick.begin(), pick.end()));
    return best;
  }
  Rng rng = stream_rng(0xC057, m);
  std::vector<Vec> pts;
  for (std::size_t j = 0; j < m; ++j) pts.push_back(ProbVector::vertex(m, j).vec());
  for (std::size_t i = 0; i < 20000; ++i) pts.push_back(sample_dirichlet(m, 1.0, rng));
  for (const auto& p : pts) {
    if (feasible(p, 1e-12)) best = std::min(best, objective(p));
  }
  return best;
}

}  // namespace mcloss
