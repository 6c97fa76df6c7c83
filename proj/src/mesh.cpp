#include "mcloss/mesh.hpp"

#include <algorithm>
#include <omp.h>

#include "mcloss/parallel.hpp"

namespace mcloss {

int parallel_threads() { return omp_get_max_threads(); }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Rng stream_rng(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(splitmix64(seed) ^ (index * 0xD1B54A32D192ED03ULL + 1)));
}

namespace {

void compositions(std::size_t m, std::size_t remaining, std::size_t divisions, Vec& cur,
                  std::vector<Vec>& out) {
  const std::size_t k = cur.size();
  if (k + 1 == m) {
    cur.push_back(static_cast<double>(remaining) / static_cast<double>(divisions));
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (std::size_t a = 0; a <= remaining; ++a) {
    cur.push_back(static_cast<double>(a) / static_cast<double>(divisions));
    compositions(m, remaining - a, divisions, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<Vec> simplex_mesh(std::size_t m, std::size_t divisions) {
  if (m == 0 || divisions == 0) throw InvalidInput("simplex_mesh: need m >= 1 and divisions >= 1");
  std::vector<Vec> out;
  Vec cur;
  compositions(m, divisions, divisions, cur, out);
  return out;
}

std::vector<Vec> simplex_mesh_min(std::size_t m, std::size_t divisions, double min_entry) {
  std::vector<Vec> out;
  for (auto& p : simplex_mesh(m, divisions)) {
    if (*std::min_element(p.begin(), p.end()) >= min_entry - 1e-15) out.push_back(std::move(p));
  }
  return out;
}

std::vector<Vec> box_grid(std::size_t dim, double lo, double hi, std::size_t per_axis) {
  if (per_axis < 2) throw InvalidInput("box_grid: need at least two points per axis");
  std::size_t total = 1;
  for (std::size_t i = 0; i < dim; ++i) total *= per_axis;
  std::vector<Vec> out;
  out.reserve(total);
  const double h = (hi - lo) / static_cast<double>(per_axis - 1);
  for (std::size_t idx = 0; idx < total; ++idx) {
    Vec p(dim);
    std::size_t r = idx;
    for (std::size_t i = 0; i < dim; ++i) {
      p[i] = lo + h * static_cast<double>(r % per_axis);
      r /= per_axis;
    }
    out.push_back(std::move(p));
  }
  return out;
}

Vec sample_dirichlet(std::size_t m, double alpha, Rng& rng) {
  std::gamma_distribution<double> g(alpha, 1.0);
  Vec p(m);
  double s = 0.0;
  for (auto& x : p) {
    x = g(rng);
    s += x;
  }
  if (!(s > 0.0)) {
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    std::fill(p.begin(), p.end(), 0.0);
    p[pick(rng)] = 1.0;
    return p;
  }
  for (auto& x : p) x /= s;
  return p;
}

Vec sample_simplex_mixed(std::size_t m, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = u(rng);
  if (r < 0.5) return sample_dirichlet(m, 1.0, rng);
  if (r < 0.75) return sample_dirichlet(m, 0.1, rng);
  std::uniform_int_distribution<std::size_t> pick(1, m);
  const std::size_t support = pick(rng);
  std::vector<std::size_t> idx(m);
  for (std::size_t i = 0; i < m; ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  Vec face = sample_dirichlet(support, 1.0, rng);
  Vec p(m, 0.0);
  for (std::size_t i = 0; i < support; ++i) p[idx[i]] = face[i];
  return p;
}

Vec sample_simplex_interior(std::size_t m, double floor, Rng& rng) {
  Vec p = sample_dirichlet(m, 1.0, rng);
  const double scale = 1.0 - floor * static_cast<double>(m);
  for (auto& x : p) x = floor + scale * x;
  return p;
}

Vec sample_margin(std::size_t dim, double scale, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> box(-scale, scale);
  const double r = u(rng);
  Vec t(dim);
  if (r < 0.5) {
    for (auto& x : t) x = box(rng);
  } else if (r < 0.8) {
    Vec p = sample_simplex_mixed(dim + 1, rng);
    std::normal_distribution<double> noise(0.0, 0.05);
    for (std::size_t i = 0; i < dim; ++i) t[i] = p[i] + (r < 0.65 ? noise(rng) : 0.0);
  } else {
    std::uniform_int_distribution<int> lattice(-2, 2);
    for (auto& x : t) x = 0.5 * lattice(rng);
  }
  return t;
}

}  // namespace mcloss
