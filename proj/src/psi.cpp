#include "mcloss/psi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mcloss/mesh.hpp"
#include "mcloss/parallel.hpp"

namespace mcloss {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t mesh_divisions(std::size_t m, std::size_t requested) {
  if (m < 2 || m > 4) throw InvalidInput("psi: mesh kinds need 2 <= m <= 4");
  if (requested) return requested;
  return m == 2 ? 400 : (m == 3 ? 30 : 12);
}

// Cbar^T x, or x itself without a cost matrix.
Vec transform(const std::optional<CostMatrix>& c, CSpan x) {
  if (c) return c->cbar_transpose_apply(x);
  return Vec(x.begin(), x.end());
}

Vec loss_vector(const ScoringRule& rule, CSpan q) {
  Vec z(rule.m);
  for (std::size_t j = 0; j < rule.m; ++j) z[j] = rule(j, q);
  return z;
}

double breg_with(const ScoringRule& rule, CSpan z, CSpan eta) { return expect(eta, z) - rule.entropy(eta); }

Vec along(CSpan from, CSpan to, double s) {
  Vec p(from.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::max(0.0, from[i] + s * (to[i] - from[i]));
  return p;
}

Vec t_grid(double t_max, double step) {
  if (!(step > 0.0)) throw InvalidInput("psi: t_step must be positive");
  Vec t;
  const auto n = static_cast<std::size_t>(std::floor(t_max / step + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) t.push_back(static_cast<double>(i) * step);
  return t;
}

// Vertices of {q in simplex : max_k (Cbar^T q)_k <= 1^T Cbar^T q / 2}, from
// every choice of m - 1 active constraints.
std::vector<Vec> anchor_vertices(const std::optional<CostMatrix>& c, std::size_t m) {
  Vec cbar(m * m, 0.0);
  if (c) {
    cbar = c->cbar_row_major();
  } else {
    for (std::size_t i = 0; i < m; ++i) cbar[i * m + i] = 1.0;
  }
  std::vector<Vec> rows;
  for (std::size_t i = 0; i < m; ++i) {
    Vec r(m, 0.0);
    r[i] = -1.0;
    rows.push_back(std::move(r));
  }
  for (std::size_t k = 0; k < m; ++k) {
    Vec r(m);
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (std::size_t l = 0; l < m; ++l) s += cbar[j * m + l];
      r[j] = cbar[j * m + k] - 0.5 * s;
    }
    rows.push_back(std::move(r));
  }
  std::vector<Vec> out;
  const std::size_t n = rows.size();
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + static_cast<long>(m - 1), true);
  do {
    std::vector<Vec> a;
    Vec b;
    for (std::size_t i = 0; i < n; ++i) {
      if (pick[i]) {
        a.push_back(rows[i]);
        b.push_back(0.0);
      }
    }
    a.push_back(Vec(m, 1.0));
    b.push_back(1.0);
    bool singular = false;
    for (std::size_t col = 0; col < m && !singular; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < m; ++r) {
        if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
      }
      if (std::abs(a[piv][col]) < 1e-12) {
        singular = true;
        break;
      }
      std::swap(a[piv], a[col]);
      std::swap(b[piv], b[col]);
      for (std::size_t r = 0; r < m; ++r) {
        if (r == col) continue;
        const double f = a[r][col] / a[col][col];
        for (std::size_t k = col; k < m; ++k) a[r][k] -= f * a[col][k];
        b[r] -= f * b[col];
      }
    }
    if (singular) continue;
    Vec q(m);
    for (std::size_t i = 0; i < m; ++i) q[i] = b[i] / a[i][i];
    bool feasible = true;
    for (const Vec& r : rows) feasible = feasible && dot(r, q) <= 1e-12;
    if (!feasible) continue;
    for (double& x : q) x = std::max(0.0, x);
    double s = 0.0;
    for (double x : q) s += x;
    for (double& x : q) x /= s;
    bool seen = false;
    for (const Vec& v : out) {
      double d = 0.0;
      for (std::size_t i = 0; i < m; ++i) d = std::max(d, std::abs(v[i] - q[i]));
      seen = seen || d < 1e-12;
    }
    if (!seen) out.push_back(std::move(q));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

PsiProfile underline_impl(const ScoringRule& rule, const std::optional<CostMatrix>& c, const PsiMesh& mesh,
                          PsiKind kind) {
  const std::size_t m = rule.m;
  auto points = simplex_mesh(m, mesh_divisions(m, mesh.divisions));
  for (Vec& v : anchor_vertices(c, m)) points.push_back(std::move(v));
  std::vector<std::size_t> anchors;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vec tq = transform(c, points[i]);
    double total = 0.0;
    for (double x : tq) total += x;
    if (*std::max_element(tq.begin(), tq.end()) <= 0.5 * total + 1e-12) anchors.push_back(i);
  }
  double t_max = 0.0;
  for (std::size_t a : anchors) {
    for (const Vec& e : points) {
      Vec d(m);
      for (std::size_t i = 0; i < m; ++i) d[i] = e[i] - points[a][i];
      t_max = std::max(t_max, norm_inf2(transform(c, d)));
    }
  }
  PsiProfile p;
  p.kind = kind;
  p.label = psi_kind_name(kind) + "_" + rule.label;
  p.t = t_grid(t_max, mesh.t_step);
  const std::size_t nt = p.t.size();
  std::vector<Vec> partial(anchors.size(), Vec(nt, kInf));
  for_each_index(anchors.size(), Execution::Parallel, [&](std::size_t ai) {
    const Vec& q = points[anchors[ai]];
    const Vec z = loss_vector(rule, q);
    Vec& best = partial[ai];
    best[0] = 0.0;
    for (const Vec& e : points) {
      Vec d(m);
      for (std::size_t i = 0; i < m; ++i) d[i] = e[i] - q[i];
      const double dist = norm_inf2(transform(c, d));
      if (dist <= 0.0) continue;
      for (std::size_t k = 1; k < nt && p.t[k] <= dist * (1.0 + 1e-12); ++k) {
        const double b = breg_with(rule, z, along(q, e, std::min(1.0, p.t[k] / dist)));
        best[k] = std::min(best[k], b);
      }
    }
  });
  p.value.assign(nt, kInf);
  for (const Vec& b : partial) {
    for (std::size_t k = 0; k < nt; ++k) p.value[k] = std::min(p.value[k], b[k]);
  }
  p.monotone = is_nondecreasing(p);
  return p;
}

}  // namespace

std::string psi_kind_name(PsiKind kind) {
  switch (kind) {
    case PsiKind::Underline: return "psi_underline";
    case PsiKind::UnderlineC: return "psi_underline_C";
    case PsiKind::UnderlineC0: return "psi_underline_C0";
    case PsiKind::AtQ: return "psi_q";
    case PsiKind::AtQC: return "psi_q_C";
    case PsiKind::BJM: return "psi_BJM";
    case PsiKind::BJMConvex: return "psi_BJM_convex";
    case PsiKind::RW: return "psi_RW";
  }
  return "psi";
}

PsiKind psi_kind_from_name(const std::string& name) {
  for (PsiKind k : {PsiKind::Underline, PsiKind::UnderlineC, PsiKind::UnderlineC0, PsiKind::AtQ, PsiKind::AtQC,
                    PsiKind::BJM, PsiKind::BJMConvex, PsiKind::RW}) {
    if (psi_kind_name(k) == name) return k;
  }
  throw ConfigurationError("unknown psi kind: " + name);
}

double PsiProfile::operator()(double x) const {
  if (t.empty() || x < t.front()) return 0.0;
  const auto it = std::upper_bound(t.begin(), t.end(), x * (1.0 + 1e-12) + 1e-15);
  return value[static_cast<std::size_t>(it - t.begin()) - 1];
}

bool is_nondecreasing(const PsiProfile& p) {
  for (std::size_t k = 1; k < p.value.size(); ++k) {
    if (p.value[k] < p.value[k - 1] - tol::kSlack) return false;
  }
  return true;
}

PsiProfile psi_underline(const ScoringRule& rule, const std::optional<CostMatrix>& c, const PsiMesh& mesh) {
  return underline_impl(rule, c, mesh, c ? PsiKind::UnderlineC : PsiKind::Underline);
}

PsiProfile psi_underline_c0(const ScoringRule& rule, CSpan c0, const PsiMesh& mesh) {
  return underline_impl(rule, CostMatrix::class_weighted(c0), mesh, PsiKind::UnderlineC0);
}

double psi_at_q(const ScoringRule& rule, CSpan q, const std::optional<CostMatrix>& c, double t,
                const std::vector<Vec>& mesh_points, const std::vector<Vec>& extra) {
  const std::size_t m = rule.m;
  const Vec z = loss_vector(rule, q);
  if (t <= 0.0) return 0.0;
  double best = kInf;
  auto visit = [&](const Vec& e) {
    Vec d(m);
    for (std::size_t i = 0; i < m; ++i) d[i] = e[i] - q[i];
    const double dist = norm_inf2(transform(c, d));
    if (dist < t || dist <= 0.0) return;
    best = std::min(best, breg_with(rule, z, along(q, e, t / dist)));
  };
  for (const Vec& e : mesh_points) visit(e);
  for (const Vec& e : extra) visit(e);
  return best;
}

PsiProfile psi_at_q_profile(const ScoringRule& rule, CSpan q, const std::optional<CostMatrix>& c,
                            const PsiMesh& mesh) {
  const std::size_t m = rule.m;
  const auto points = simplex_mesh(m, mesh_divisions(m, mesh.divisions));
  double t_max = 0.0;
  for (const Vec& e : points) {
    Vec d(m);
    for (std::size_t i = 0; i < m; ++i) d[i] = e[i] - q[i];
    t_max = std::max(t_max, norm_inf2(transform(c, d)));
  }
  PsiProfile p;
  p.kind = c ? PsiKind::AtQC : PsiKind::AtQ;
  p.label = psi_kind_name(p.kind) + "_" + rule.label;
  p.t = t_grid(t_max, mesh.t_step);
  p.value.resize(p.t.size());
  for_each_index(p.t.size(), Execution::Parallel,
                 [&](std::size_t k) { p.value[k] = psi_at_q(rule, q, c, p.t[k], points); });
  p.monotone = is_nondecreasing(p);
  return p;
}

PsiProfile psi_bjm(const ScoringRule& rule, std::size_t q_points, double t_step) {
  if (rule.m != 2) throw InvalidInput("psi_bjm: two-class rules only");
  if (q_points < 3) throw InvalidInput("psi_bjm: need at least 3 grid points");
  PsiProfile p;
  p.kind = PsiKind::BJM;
  p.label = psi_kind_name(p.kind) + "_" + rule.label;
  p.t = t_grid(1.0, t_step);
  p.value.resize(p.t.size());
  std::vector<Vec> qs;
  for (std::size_t i = 0; i < q_points; ++i) {
    const double q1 = static_cast<double>(i) / static_cast<double>(q_points - 1);
    qs.push_back(make_prob(Vec{q1, 1.0 - q1}, 1e-9).vec());
  }
  for_each_index(p.t.size(), Execution::Parallel, [&](std::size_t k) {
    const double t = p.t[k];
    const Vec up{(1.0 + t) / 2.0, (1.0 - t) / 2.0};
    const Vec down{(1.0 - t) / 2.0, (1.0 + t) / 2.0};
    double best = kInf;
    for (const Vec& q : qs) {
      if (q[0] <= q[1] + 1e-15) best = std::min(best, scoring_regret(rule, up, q));
      if (q[0] >= q[1] - 1e-15) best = std::min(best, scoring_regret(rule, down, q));
    }
    p.value[k] = t == 0.0 ? 0.0 : best;
  });
  p.monotone = is_nondecreasing(p);
  return p;
}

PsiProfile convexify(const PsiProfile& p) {
  std::vector<std::size_t> hull;
  auto cross = [&](std::size_t o, std::size_t a, std::size_t b) {
    return (p.t[a] - p.t[o]) * (p.value[b] - p.value[o]) - (p.value[a] - p.value[o]) * (p.t[b] - p.t[o]);
  };
  for (std::size_t i = 0; i < p.t.size(); ++i) {
    if (!std::isfinite(p.value[i])) continue;
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), i) <= 0.0) hull.pop_back();
    hull.push_back(i);
  }
  PsiProfile out = p;
  out.kind = p.kind == PsiKind::BJM ? PsiKind::BJMConvex : p.kind;
  out.label = p.label + "_convex";
  std::size_t seg = 0;
  for (std::size_t i = 0; i < p.t.size(); ++i) {
    if (hull.empty() || p.t[i] < p.t[hull.front()] || p.t[i] > p.t[hull.back()]) {
      out.value[i] = hull.empty() || p.t[i] < p.t[hull.front()] ? p.value[i] : kInf;
      continue;
    }
    while (seg + 1 < hull.size() && p.t[hull[seg + 1]] < p.t[i]) ++seg;
    if (seg + 1 >= hull.size()) {
      out.value[i] = p.value[hull.back()];
      continue;
    }
    const std::size_t a = hull[seg], b = hull[seg + 1];
    const double w = (p.t[i] - p.t[a]) / (p.t[b] - p.t[a]);
    out.value[i] = (1.0 - w) * p.value[a] + w * p.value[b];
  }
  out.monotone = is_nondecreasing(out);
  return out;
}

double psi_rw(const ScoringRule& rule, double c10, double c20, double delta) {
  if (rule.m != 2) throw InvalidInput("psi_rw: two-class rules only");
  if (!(c10 > 0.0 && c20 > 0.0)) throw InvalidInput("psi_rw: class weights must be positive");
  const double eta1 = (c20 + delta) / (c10 + c20);
  if (eta1 < -1e-15 || eta1 > 1.0 + 1e-15) return kInf;
  const double e = std::clamp(eta1, 0.0, 1.0);
  const double q1 = c20 / (c10 + c20);
  return scoring_regret(rule, Vec{e, 1.0 - e}, Vec{q1, 1.0 - q1});
}

double scoring_regret(const ScoringRule& rule, CSpan eta, CSpan q) {
  return expect(eta, loss_vector(rule, q)) - rule.entropy(eta);
}

}  // namespace mcloss
