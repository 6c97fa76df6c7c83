#include "mcloss/cost.hpp"

#include <algorithm>
#include <cmath>

namespace mcloss {

namespace {

double total(CSpan v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

Vec joined(std::initializer_list<CSpan> parts) {
  Vec out;
  for (CSpan p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

Vec normalized_tilde(const CostMatrix& c, CSpan eta) {
  Vec t = cost_eta_tilde(c, eta);
  const double s = total(t);
  for (double& x : t) x /= s;
  return t;
}

}  // namespace

Loss cost_transform(const Loss& loss, const CostMatrix& c) {
  if (c.size() != loss.m) throw InvalidInput("cost_transform: cost matrix has wrong size");
  Loss out;
  out.name = loss.name + "_cost";
  out.m = loss.m;
  out.action_dim = loss.action_dim;
  out.value = [loss, c](std::size_t j, CSpan a) {
    const double cm = c.row_max(j);
    double v = cm == 0.0 ? 0.0 : cm * loss(j, a);
    for (std::size_t k = 0; k < loss.m; ++k) {
      if (k == j) continue;
      const double w = cm - c(j, k);
      if (w != 0.0) v += w * (loss(k, a) - 1.0);
    }
    return v;
  };
  return out;
}

Vec cost_eta_tilde(const CostMatrix& c, CSpan eta) { return c.cbar_transpose_apply(eta); }

double cost_offset(const CostMatrix& c, CSpan eta) {
  double d = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    const double cm = c.row_max(j);
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (k != j) d += eta[j] * (cm - c(j, k));
    }
  }
  return d;
}

double risk_identity_residual(const Loss& loss, const CostMatrix& c, CSpan eta, CSpan action) {
  const Loss lt = cost_transform(loss, c);
  const double lhs = risk(lt, eta, action);
  const Vec tilde = cost_eta_tilde(c, eta);
  const double s = total(tilde);
  const double d = cost_offset(c, eta);
  if (s <= 0.0) return std::abs(lhs + d);
  Vec tt(tilde);
  for (double& x : tt) x /= s;
  return std::abs(lhs - (s * risk(loss, tt, action) - d));
}

CostMatrix random_cost(std::size_t m, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec c(m * m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < m; ++k) {
      if (j == k) continue;
      const double zero = u(rng);
      const double v = u(rng);
      c[j * m + k] = zero < 0.2 ? 0.0 : v;
    }
  }
  return CostMatrix(m, std::move(c));
}

std::pair<BoundReport, BoundReport> misclass_upper_bounds(std::size_t m, const SweepOptions& opts) {
  struct Sample {
    Vec eta, q;
    CostMatrix c;
  };
  auto make = [&](std::size_t i) {
    Rng rng = stream_rng(opts.seed, i);
    Sample s;
    s.eta = sample_simplex_mixed(m, rng);
    s.q = sample_simplex_mixed(m, rng);
    s.c = random_cost(m, rng);
    return s;
  };
  auto diff = [m](const Sample& s) {
    Vec d(m);
    for (std::size_t i = 0; i < m; ++i) d[i] = s.eta[i] - s.q[i];
    return d;
  };
  auto zo = [&](const Sample& s) { return SampleCheck{bzo(s.eta, s.q), norm_inf2(diff(s))}; };
  auto cw = [&](const Sample& s) {
    return SampleCheck{bcw(s.c, s.eta, s.c.cbar_transpose_apply(s.q)),
                       norm_inf2(s.c.cbar_transpose_apply(diff(s)))};
  };
  auto flat_zo = [](const Sample& s) { return joined({s.eta, s.q}); };
  auto flat_cw = [](const Sample& s) { return joined({s.eta, s.q, s.c.row_major()}); };
  const std::string tag = "_m" + std::to_string(m);
  return {sweep_bound("misclass_zo" + tag, m, opts.samples, opts.exec, make, zo, flat_zo, "eta[m];q[m]"),
          sweep_bound("misclass_cw" + tag, m, opts.samples, opts.exec, make, cw, flat_cw, "eta[m];q[m];C[m*m]")};
}

TightnessWitness misclass_tightness(std::size_t m, double eps) {
  if (m < 2) throw InvalidInput("misclass_tightness: m must be at least 2");
  Vec eta(m, 0.0), q(m, 0.0), d(m);
  eta[0] = 0.8;
  eta[1] = 0.2;
  q[0] = 0.5 - eps;
  q[1] = 0.5 + eps;
  for (std::size_t i = 0; i < m; ++i) d[i] = eta[i] - q[i];
  return {bzo(eta, q), norm_inf2(d)};
}

std::vector<BoundReport> check_cw_bounds(const ScoringRule& rule, const CostMatrix& c, const CwBoundOptions& opts) {
  const std::size_t m = rule.m;
  if (c.size() != m) throw InvalidInput("check_cw_bounds: cost matrix has wrong size");
  const Loss base = rule.as_loss();
  const Loss transformed = cost_transform(base, c);
  const PsiProfile under = psi_underline(rule, std::nullopt, opts.mesh);
  const PsiProfile under_c = psi_underline(rule, c, opts.mesh);
  const auto& sw = opts.sweep;

  struct Sample {
    Vec eta, q;
  };
  auto make = [&](std::size_t i) {
    Rng rng = stream_rng(sw.seed, i);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Sample s;
    s.eta = sample_simplex_mixed(m, rng);
    Vec other = sample_simplex_mixed(m, rng);
    const double w = u(rng) < 0.5 ? u(rng) : 0.05 * u(rng);
    Vec q(m);
    for (std::size_t k = 0; k < m; ++k) q[k] = (1.0 - w) * s.eta[k] + w * other[k];
    s.q = make_prob(q, 1e-9).vec();
    return s;
  };
  auto flatten = [](const Sample& s) { return joined({s.eta, s.q}); };
  const std::string tag = rule.label + "_m" + std::to_string(m);
  std::vector<BoundReport> out;

  auto transformed_check = [&](const Sample& s) {
    const double scale = total(cost_eta_tilde(c, s.eta));
    if (scale <= 0.0) return SampleCheck{0.0, 0.0};
    const Vec best = make_prob(normalized_tilde(c, s.eta), 1e-12).vec();
    const double b_tilde = risk(transformed, s.eta, s.q) - risk(transformed, s.eta, best);
    return SampleCheck{under(bcw(c, s.eta, s.q) / scale), b_tilde / scale};
  };
  out.push_back(sweep_bound("cw_transformed_" + tag, m, sw.samples, sw.exec, make, transformed_check, flatten, "eta[m];q[m]"));

  auto independent_check = [&](const Sample& s) {
    return SampleCheck{under_c(bcw(c, s.eta, c.cbar_transpose_apply(s.q))), scoring_regret(rule, s.eta, s.q)};
  };
  out.push_back(sweep_bound("cw_independent_" + tag, m, sw.samples, sw.exec, make, independent_check, flatten, "eta[m];q[m]"));

  const auto mesh_points = simplex_mesh(m, opts.mesh.divisions ? opts.mesh.divisions : (m == 2 ? 200 : (m == 3 ? 20 : 8)));
  auto wset = [&](const Sample& s) {
    const Vec score = c.cbar_transpose_apply(s.q);
    const std::size_t k = argmax_lowest(score);
    const double t = bcw(c, s.eta, score);
    double lhs = 0.0;
    for (std::size_t i = 0; i < opts.w_points; ++i) {
      const double w = opts.w_points == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(opts.w_points - 1);
      Vec qw(m);
      for (std::size_t j = 0; j < m; ++j) qw[j] = (1.0 - w) * s.eta[j] + w * s.q[j];
      const Vec sw_score = c.cbar_transpose_apply(qw);
      if (sw_score[k] < *std::max_element(sw_score.begin(), sw_score.end()) - 1e-12) continue;
      lhs = std::max(lhs, psi_at_q(rule, qw, c, t, mesh_points, {s.eta}));
    }
    return SampleCheck{lhs, scoring_regret(rule, s.eta, s.q)};
  };
  out.push_back(sweep_bound("cw_wset_" + tag, m, std::min(sw.samples, opts.wset_samples), sw.exec, make, wset,
                            flatten, "eta[m];q[m]"));

  if (m == 2) {
    const double c10 = c(0, 1), c20 = c(1, 0);
    if (c10 > 0.0 && c20 > 0.0) {
      auto rw = [&](const Sample& s) {
        const Vec score{c10 * s.q[0], c20 * s.q[1]};
        const double delta = bcw(c, s.eta, score);
        return SampleCheck{std::min(psi_rw(rule, c10, c20, delta), psi_rw(rule, c10, c20, -delta)),
                           scoring_regret(rule, s.eta, s.q)};
      };
      out.push_back(sweep_bound("cw_rw_" + tag, m, sw.samples, sw.exec, make, rw, flatten, "eta[m];q[m]"));
    }
  }
  return out;
}

BoundReport check_rw_bound(const ScoringRule& rule, double c10, double c20, std::size_t divisions) {
  if (rule.m != 2) throw InvalidInput("check_rw_bound: two-class rules only");
  if (divisions < 2) throw InvalidInput("check_rw_bound: mesh too coarse");
  const CostMatrix c = CostMatrix::class_weighted(Vec{c10, c20});
  const std::size_t side = divisions + 1;
  auto make = [&](std::size_t i) {
    const double e1 = static_cast<double>(i / side) / static_cast<double>(divisions);
    const double q1 = std::clamp(static_cast<double>(i % side) / static_cast<double>(divisions), 1e-6, 1.0 - 1e-6);
    return std::pair<Vec, Vec>{Vec{e1, 1.0 - e1}, Vec{q1, 1.0 - q1}};
  };
  auto check = [&](const std::pair<Vec, Vec>& s) {
    const Vec score{c10 * s.second[0], c20 * s.second[1]};
    const double delta = bcw(c, s.first, score);
    return SampleCheck{std::min(psi_rw(rule, c10, c20, delta), psi_rw(rule, c10, c20, -delta)),
                       scoring_regret(rule, s.first, s.second)};
  };
  auto flatten = [](const std::pair<Vec, Vec>& s) { return joined({s.first, s.second}); };
  return sweep_bound("rw_mesh_" + rule.label, 2, side * side, Execution::Parallel, make, check, flatten,
                     "eta[2];q[2]");
}

}  // namespace mcloss
