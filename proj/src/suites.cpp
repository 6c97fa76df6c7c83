#include "mcloss/suites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mcloss/cost.hpp"
#include "mcloss/entropy.hpp"
#include "mcloss/hinge.hpp"
#include "mcloss/mesh.hpp"
#include "mcloss/psi.hpp"
#include "mcloss/regret.hpp"
#include "mcloss/scoring.hpp"

namespace mcloss {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string tag_m(std::size_t m) { return "_m" + std::to_string(m); }

// Reports for checks of the form err <= tolerance are stored as the ratio
// err / tolerance against 1, so the shared violation threshold applies to
// every tolerance alike.
SampleCheck within(double err, double tolerance) {
  if (std::isnan(err)) return {kInf, 1.0};
  return {err / tolerance, 1.0};
}

template <class Item, class Check>
BoundReport over_items(std::string id, std::size_t m, const std::vector<Item>& items, Execution exec, Check&& check,
                       std::string layout) {
  auto make = [&](std::size_t i) -> const Item& { return items[i]; };
  auto flatten = [](const Item& it) -> Vec {
    if constexpr (std::is_same_v<Item, Vec>) {
      return it;
    } else {
      Vec out(it.first.begin(), it.first.end());
      out.insert(out.end(), it.second.begin(), it.second.end());
      return out;
    }
  };
  return sweep_bound(std::move(id), m, items.size(), exec, make, check, flatten, std::move(layout));
}

SweepOptions sweep_of(const SuiteConfig& cfg, std::size_t cap = 0) {
  SweepOptions o;
  o.samples = cap ? std::min(cfg.samples, cap) : cfg.samples;
  o.seed = cfg.seed;
  o.exec = cfg.exec;
  return o;
}

std::size_t pick(std::size_t override_value, std::size_t fallback) { return override_value ? override_value : fallback; }

LossFamily fam(FamilyKind k, std::size_t m, double beta = 0.5) {
  LossFamily f;
  f.kind = k;
  f.m = m;
  f.beta = beta;
  return f;
}

std::vector<Vec> mesh_with_last_positive(std::size_t m, std::size_t divisions) {
  std::vector<Vec> out;
  for (Vec& p : simplex_mesh(m, divisions)) {
    if (p.back() > 0.0) out.push_back(std::move(p));
  }
  return out;
}

// ---------------------------------------------------------------- duality

std::vector<BoundReport> suite_duality(const SuiteConfig& cfg) {
  const std::size_t m = cfg.m;
  std::vector<EntropySpec> hs{shannon_entropy(m), zero_one_entropy(m), cost_weighted_entropy(ordinal_cost(m)),
                              lbeta_entropy(m, 0.5, false), lbeta_entropy(m, 2.0, false),
                              lbeta_entropy(m, 0.0, true), lbeta_entropy(m, 1.0, true)};
  if (cfg.beta > 0.0 && std::isnan(lbeta_limit_point(cfg.beta))) hs.push_back(lbeta_entropy(m, cfg.beta, true));
  std::vector<DissimilaritySpec> fs{shannon_dissimilarity(m), zero_one_dissimilarity(m),
                                    cost_weighted_dissimilarity(ordinal_cost(m)), lbeta_dissimilarity(m, 0.5, false)};
  for (const char* name : {"likelihood", "exponential", "calibration_a", "calibration_s"}) {
    fs.push_back(separable_dissimilarity(f0_by_name(name), m));
  }
  for (const char* name : {"likelihood", "exponential"}) {
    fs.push_back(pairwise_symmetric_dissimilarity(f0_by_name(name), m));
  }

  const auto interior = mesh_with_last_positive(m, pick(cfg.density, m <= 3 ? 20 : 8));
  std::vector<Vec> face;
  for (Vec& p : simplex_mesh(m, pick(cfg.density, m <= 3 ? 20 : 8))) {
    if (p.back() == 0.0) face.push_back(std::move(p));
  }
  const auto grid = box_grid(m - 1, 0.0, 4.0, m <= 3 ? 17 : 6);

  std::vector<BoundReport> out;
  for (const EntropySpec& h : hs) {
    const EntropySpec back = entropy_from_dissimilarity(dissimilarity_from_entropy(h));
    auto err = [&](const Vec& eta) {
      const double a = h(eta), b = back(eta);
      return a == b ? 0.0 : std::abs(a - b);
    };
    out.push_back(over_items("duality_H_" + h.label + tag_m(m), m, interior, cfg.exec,
                             [&](const Vec& eta) { return within(err(eta), 1e-10); }, "eta[m]"));
    out.push_back(over_items("duality_H_face_" + h.label + tag_m(m), m, face, cfg.exec,
                             [&](const Vec& eta) { return within(err(eta), 1e-8); }, "eta[m]"));
  }
  for (const DissimilaritySpec& f : fs) {
    const DissimilaritySpec back = dissimilarity_from_entropy(entropy_from_dissimilarity(f));
    auto check = [&](const Vec& t) {
      const double a = f(t), b = back(t);
      return within(a == b ? 0.0 : std::abs(a - b), 1e-10 * std::max(1.0, std::abs(a)));
    };
    out.push_back(over_items("duality_f_" + f.label + tag_m(m), m, grid, cfg.exec, check, "t[m-1]"));
  }
  return out;
}

// ------------------------------------------------------------- properness

std::vector<BoundReport> suite_properness(const SuiteConfig& cfg) {
  const std::size_t m = cfg.m;
  std::vector<BoundReport> out;
  const auto mesh = simplex_mesh(m, pick(cfg.density, m <= 3 ? 12 : (m == 4 ? 8 : 6)));
  const SweepOptions so = sweep_of(cfg, 10000);
  for (const LossFamily& family : scoring_families(m)) {
    const ScoringRule rule = make_scoring_rule(family);
    const Loss loss = rule.as_loss();
    auto make = [&](std::size_t i) {
      Rng rng = stream_rng(cfg.seed, i);
      return std::pair<Vec, Vec>{sample_simplex_mixed(m, rng), sample_simplex_interior(m, 1e-3, rng)};
    };
    auto residual = [&](const std::pair<Vec, Vec>& s) {
      return within(canonical_representation_residual(rule, s.first, s.second), 1e-9);
    };
    auto flatten = [](const std::pair<Vec, Vec>& s) {
      Vec v(s.first);
      v.insert(v.end(), s.second.begin(), s.second.end());
      return v;
    };
    out.push_back(sweep_bound("canonical_" + rule.label + tag_m(m), m, so.samples, cfg.exec, make, residual, flatten,
                              "eta[m];q[m]"));
    auto argmin = [&](const Vec& eta) {
      const double at_eta = risk(loss, eta, eta);
      const bool boundary = *std::min_element(eta.begin(), eta.end()) == 0.0;
      if (boundary && !std::isfinite(at_eta)) return SampleCheck{0.0, 0.0};
      double best = kInf;
      for (const Vec& q : mesh) {
        const double r = risk(loss, eta, q);
        if (r < best) best = r;
      }
      return SampleCheck{at_eta - best, 0.0};
    };
    out.push_back(over_items("grid_argmin_" + rule.label + tag_m(m), m, mesh, cfg.exec, argmin, "eta[m]"));
  }
  return out;
}

// -------------------------------------------------------------- gradients

std::vector<BoundReport> suite_gradients(const SuiteConfig& cfg) {
  const std::size_t m = cfg.m;
  std::vector<BoundReport> out;
  const std::size_t n = std::min<std::size_t>(cfg.samples, 1000);
  for (const LossFamily& family : scoring_families(m)) {
    if (family.kind == FamilyKind::LBetaRescaled && std::isinf(family.beta)) continue;
    const ScoringRule rule = make_scoring_rule(family);
    auto make = [&](std::size_t i) {
      Rng rng = stream_rng(cfg.seed, i);
      std::normal_distribution<double> n01;
      Vec h(m);
      for (double& x : h) x = 1.5 * n01(rng);
      return h;
    };
    auto check = [&](const Vec& h) {
      double worst = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const Vec g = composite_gradient(rule, j, h);
        double scale = 1.0;
        for (double x : g) scale = std::max(scale, std::abs(x));
        for (std::size_t i = 0; i < m; ++i) {
          const double e = 1e-5 * (1.0 + std::abs(h[i]));
          Vec a(h), b(h);
          a[i] += e;
          b[i] -= e;
          const double fd = (composite_loss(rule, j, a) - composite_loss(rule, j, b)) / (2.0 * e);
          worst = std::max(worst, std::abs(g[i] - fd) / scale);
        }
      }
      return within(worst, 1e-6);
    };
    out.push_back(sweep_bound("gradient_" + rule.label + tag_m(m), m, n, cfg.exec, make, check,
                              [](const Vec& h) { return h; }, "h[m]"));
  }
  return out;
}

// ------------------------------------------------------------ hinge-order

std::vector<BoundReport> suite_hinge_order(const SuiteConfig& cfg) {
  const std::size_t m = cfg.m;
  if (m < 2) throw ConfigurationError("hinge-order needs m >= 2");
  std::vector<BoundReport> out;
  const SweepOptions so = sweep_of(cfg);
  auto make = [&](std::size_t i) {
    Rng rng = stream_rng(cfg.seed, i);
    return sample_margin(m - 1, 3.0, rng);
  };
  auto flatten = [](const Vec& t) { return t; };
  struct Pair {
    const char* id;
    FamilyKind lower, upper;
  };
  for (const Pair& p : {Pair{"zo3_le_llw2", FamilyKind::ZO3, FamilyKind::LLW2},
                        Pair{"zo4_le_dkr2", FamilyKind::ZO4, FamilyKind::DKR2}}) {
    const LossFamily lo = fam(p.lower, m), hi = fam(p.upper, m);
    auto nonneg = [&](const Vec& t) {
      const Vec z = hinge_values(lo, t);
      return SampleCheck{-*std::min_element(z.begin(), z.end()), 0.0};
    };
    auto order = [&](const Vec& t) {
      const Vec a = hinge_values(lo, t), b = hinge_values(hi, t);
      double worst = -kInf;
      for (std::size_t j = 0; j < m; ++j) worst = std::max(worst, a[j] - b[j]);
      return SampleCheck{worst, 0.0};
    };
    out.push_back(sweep_bound(std::string(family_name(p.lower)) + "_nonneg" + tag_m(m), m, so.samples, so.exec, make,
                              nonneg, flatten, "tau[m-1]"));
    out.push_back(sweep_bound(std::string(p.id) + tag_m(m), m, so.samples, so.exec, make, order, flatten, "tau[m-1]"));
  }

  auto make_simplex = [&](std::size_t i) {
    Rng rng = stream_rng(cfg.seed, i);
    Vec eta = sample_simplex_mixed(m, rng);
    eta.pop_back();
    return eta;
  };
  auto align = [&](const Vec& t) {
    const Vec tt = predict_tilde(t);
    double worst = 0.0;
    for (FamilyKind k : {FamilyKind::ZO3, FamilyKind::LLW2, FamilyKind::ZO4, FamilyKind::DKR2}) {
      const Vec z = hinge_values(fam(k, m), t);
      for (std::size_t j = 0; j < m; ++j) worst = std::max(worst, std::abs(z[j] - (1.0 - tt[j])));
    }
    return within(worst, 1e-12);
  };
  out.push_back(sweep_bound("simplex_alignment" + tag_m(m), m, std::min<std::size_t>(so.samples, 20000), so.exec,
                            make_simplex, align, flatten, "tau[m-1]"));

  auto fast = [&](const Vec& t) {
    const Vec a = zo4_all(t), b = zo4_all_reference(t);
    double worst = 0.0;
    for (std::size_t j = 0; j < m; ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
    return within(worst, 1e-12);
  };
  out.push_back(sweep_bound("zo4_all_vs_reference" + tag_m(m), m, so.samples, so.exec, make, fast, flatten, "tau[m-1]"));

  if (m == 3) {
    const Vec tau{0.6, -0.3};
    struct Hand {
      FamilyKind kind;
      Vec expected;
    };
    const std::vector<Hand> hands{{FamilyKind::ZO3, {0.4, 1.3, 0.6}},
                                  {FamilyKind::LLW2, {0.7, 1.3, 0.6}},
                                  {FamilyKind::ZO4, {0.55, 1.3, 0.45}},
                                  {FamilyKind::DKR2, {0.55, 1.45, 0.45}}};
    std::vector<std::size_t> idx{0, 1, 2, 3};
    auto check = [&](std::size_t i) {
      const Vec z = hinge_values(fam(hands[i].kind, 3), tau);
      double worst = 0.0;
      for (std::size_t j = 0; j < 3; ++j) worst = std::max(worst, std::abs(z[j] - hands[i].expected[j]));
      return within(worst, 1e-12);
    };
    auto mk = [](std::size_t i) { return i; };
    auto fl = [&](std::size_t i) { return hands[i].expected; };
    out.push_back(sweep_bound("hand_values_tau_0.6_-0.3", 3, hands.size(), Execution::Serial, mk, check, fl,
                              "expected[m] for zo3,llw2,zo4,dkr2"));
  }
  return out;
}

// ---------------------------------------------------------- entropy-match

std::vector<BoundReport> suite_entropy_match(const SuiteConfig& cfg) {
  const std::size_t m = cfg.m;
  const std::size_t div = pick(cfg.density, m <= 3 ? 10 : 5);
  const std::size_t eval_div = m <= 3 ? 7 : 5;
  const std::size_t action_div = m <= 3 ? 12 : 6;
  std::vector<BoundReport> out;
  const auto mesh = simplex_mesh(m, div);
  std::vector<Vec> inner;
  for (const Vec& p : simplex_mesh(m, eval_div)) {
    if (*std::min_element(p.begin(), p.end()) >= 0.1 - 1e-12) inner.push_back(p);
  }

  for (const DissimilaritySpec& f : {shannon_dissimilarity(m), lbeta_dissimilarity(m, 0.5, false)}) {
    const EntropySpec h = entropy_from_dissimilarity(f);
    ActionSet s_grid;
    s_grid.refine_step = 0.05;
    for (const Vec& p : simplex_mesh_min(m, action_div, 0.5 / static_cast<double>(action_div))) {
      Vec u(p.begin(), p.end() - 1);
      for (double& x : u) x /= p.back();
      s_grid.points.push_back(f.subgradient(u));
    }
    ConjugateOptions co;
    if (m >= 4) {
      co.points_per_axis = m == 4 ? 11 : 7;
      co.zoom_rounds = 5;
      co.zoom_factor = 4.0;
    }
    const Loss lf = make_loss_f(f, [f, co](CSpan s) { return conjugate_numeric(f, s, co); });
    const LossTable table_f = tabulate(lf, s_grid, cfg.exec);
    out.push_back(over_items("entropy_Lf_" + f.label + tag_m(m), m, inner, cfg.exec, [&](const Vec& eta) {
      return within(std::abs(entropy_of_loss(lf, table_f, eta).value - h(eta)), tol::kInfimum);
    }, "eta[m]"));

    ActionSet u_grid;
    u_grid.geometry = ActionGeometry::Orthant;
    u_grid.refine_step = 0.05;
    for (const Vec& p : simplex_mesh(m, action_div)) {
      if (p.back() <= 0.0) continue;
      Vec u(p.begin(), p.end() - 1);
      for (double& x : u) x /= p.back();
      u_grid.points.push_back(std::move(u));
    }
    const Loss lf2 = make_loss_f_ratio(f);
    const LossTable table_f2 = tabulate(lf2, u_grid, cfg.exec);
    out.push_back(over_items("entropy_Lf2_" + f.label + tag_m(m), m, inner, cfg.exec, [&](const Vec& eta) {
      return within(std::abs(entropy_of_loss(lf2, table_f2, eta).value - h(eta)), tol::kInfimum);
    }, "eta[m]"));

    const Loss lf3 = make_loss_f_simplex(f);
    const LossTable table_f3 = tabulate(lf3, simplex_actions(m, action_div), cfg.exec);
    out.push_back(over_items("entropy_Lf3_" + f.label + tag_m(m), m, inner, cfg.exec, [&](const Vec& eta) {
      return within(std::abs(entropy_of_loss(lf3, table_f3, eta).value - h(eta)), tol::kInfimum);
    }, "eta[m]"));
  }

  static constexpr std::size_t kPerAxis[] = {0, 81, 21, 9, 7, 5};
  const ActionSet margins = margin_actions(m - 1, -1.0, 1.0, m - 1 < 6 ? kPerAxis[m - 1] : 5);
  struct Case {
    LossFamily family;
    EntropySpec h;
    std::string tag;
  };
  std::vector<Case> cases;
  for (FamilyKind k : {FamilyKind::ZO3, FamilyKind::ZO4, FamilyKind::LLW2, FamilyKind::DKR2}) {
    cases.push_back({fam(k, m), zero_one_entropy(m), family_name(k)});
  }
  cases.push_back({fam(FamilyKind::CW3, m), zero_one_entropy(m), "cw3_zero_one"});
  LossFamily ord = fam(FamilyKind::CW3, m);
  ord.cost = ordinal_cost(m);
  cases.push_back({ord, cost_weighted_entropy(*ord.cost), "cw3_ordinal"});
  for (const Case& c : cases) {
    const Loss loss = make_hinge_loss(c.family);
    const LossTable table = tabulate(loss, margins, cfg.exec);
    out.push_back(over_items("entropy_" + c.tag + tag_m(m), m, mesh, cfg.exec, [&](const Vec& eta) {
      return within(std::abs(entropy_of_loss(loss, table, eta).value - c.h(eta)), tol::kInfimum);
    }, "eta[m]"));
  }
  return out;
}

// ----------------------------------------------------------- hinge-bounds

std::vector<BoundReport> suite_hinge_bounds(const SuiteConfig& cfg) {
  const std::size_t m = cfg.m;
  const SweepOptions so = sweep_of(cfg);
  std::vector<BoundReport> out;
  out.push_back(check_hinge_bounds(fam(FamilyKind::ZO4, m), so));
  out.push_back(check_hinge_bounds(fam(FamilyKind::CW3, m), so));
  LossFamily ord = fam(FamilyKind::CW3, m);
  ord.cost = ordinal_cost(m);
  BoundReport r = check_hinge_bounds(ord, so);
  r.bound_id += "_ordinal";
  out.push_back(std::move(r));
  return out;
}

std::vector<BoundReport> suite_general_bound(const SuiteConfig& cfg) {
  const std::size_t m = cfg.m;
  const SweepOptions so = sweep_of(cfg);
  std::vector<BoundReport> out;
  for (FamilyKind k : {FamilyKind::ZO4, FamilyKind::ZO3, FamilyKind::LLW2, FamilyKind::DKR2}) {
    out.push_back(check_general_bound(fam(k, m), so));
  }
  out.push_back(check_monotone_ordering(fam(FamilyKind::ZO4, m), so));
  out.push_back(check_monotone_ordering(fam(FamilyKind::CW3, m), so));
  return out;
}

std::vector<BoundReport> suite_manifold(const SuiteConfig& cfg) {
  const std::size_t m = cfg.m;
  const SweepOptions so = sweep_of(cfg, 20000);
  std::vector<BoundReport> out;
  for (FamilyKind k : {FamilyKind::ZO3, FamilyKind::ZO4, FamilyKind::LLW2, FamilyKind::DKR2}) {
    ManifoldResult r = value_manifold_check(make_hinge_loss(fam(k, m)), so);
    out.push_back(std::move(r.membership));
    out.push_back(std::move(r.vertices));
  }
  return out;
}

// ----------------------------------------------------------------- pinsker

std::vector<BoundReport> suite_pinsker(const SuiteConfig& cfg) {
  const std::size_t m = cfg.m;
  const SweepOptions so = sweep_of(cfg);
  std::vector<LossFamily> families{fam(FamilyKind::MultinomialLikelihood, m), fam(FamilyKind::LBeta, m, 0.5),
                                   fam(FamilyKind::PairwiseSymLikelihood, m),
                                   fam(FamilyKind::PairwiseSymExponential, m)};
  if (m == 2) {
    families.push_back(fam(FamilyKind::TwoClassLikelihood, 2));
    families.push_back(fam(FamilyKind::TwoClassExponential, 2));
  }
  if (cfg.beta > 0.0 && cfg.beta < 1.0 && cfg.beta != 0.5) {
    families.push_back(fam(FamilyKind::LBeta, m, cfg.beta));
    families.push_back(fam(FamilyKind::LBetaRescaled, m, cfg.beta));
  }
  std::vector<BoundReport> out;
  for (const LossFamily& f : families) {
    auto [l1, zo] = check_scoring_bounds(make_scoring_rule(f), kappa_constant(f), so);
    out.push_back(std::move(l1));
    out.push_back(std::move(zo));
  }
  for (const EntropySpec& h : {shannon_entropy(m), lbeta_entropy(m, 0.5, false)}) {
    auto [a, b] = check_bregman_monotonicity(h, sweep_of(cfg, 20000));
    out.push_back(std::move(a));
    out.push_back(std::move(b));
  }
  const ScoringRule kl = make_scoring_rule(fam(FamilyKind::MultinomialLikelihood, 2));
  const Vec eta{0.9, 0.1}, q{0.5, 0.5};
  const double b = scoring_regret(kl, eta, q);
  const std::vector<std::size_t> one{0};
  out.push_back(sweep_bound("pinsker_spot_0.9_0.5", 2, 1, Execution::Serial, [](std::size_t i) { return i; },
                            [&](std::size_t) { return SampleCheck{0.5 * std::pow(bzo(eta, q), 2.0), b}; },
                            [&](std::size_t) { return Vec{0.9, 0.1, 0.5, 0.5}; }, "eta[2];q[2]"));
  return out;
}

// ------------------------------------------------------------------- kappa

std::vector<BoundReport> suite_kappa(const SuiteConfig& cfg) {
  const std::size_t m = cfg.m;
  static constexpr std::size_t kDiv[] = {0, 0, 40, 24, 16, 10};
  const std::size_t div = pick(cfg.density, m < 6 ? kDiv[m] : 8);
  struct Case {
    std::string id;
    EntropySpec h;
    double kappa;
  };
  std::vector<Case> cases{
      {"shannon", shannon_entropy(m), 1.0},
      {"lbeta_0.5", lbeta_entropy(m, 0.5, false), kappa_lbeta(m, 0.5)},
      {"pairwise_beta_nu_0", make_scoring_rule(fam(FamilyKind::PairwiseSymLikelihood, m)).entropy, kappa_pairwise_beta(0.0)},
      {"pairwise_beta_nu_-0.5", make_scoring_rule(fam(FamilyKind::PairwiseSymExponential, m)).entropy,
       kappa_pairwise_beta(-0.5)}};
  if (cfg.beta > 0.0 && cfg.beta < 1.0 && cfg.beta != 0.5) {
    cases.push_back({"lbeta_" + format_double(cfg.beta), lbeta_entropy(m, cfg.beta, false), kappa_lbeta(m, cfg.beta)});
  }
  std::vector<double> moduli(cases.size());
  for (std::size_t i = 0; i < cases.size(); ++i) moduli[i] = strong_convexity_modulus(cases[i].h, div, 64, cfg.seed);

  std::vector<BoundReport> out;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    out.push_back(sweep_bound("modulus_" + cases[i].id + tag_m(m), m, 1, Execution::Serial, [](std::size_t k) { return k; },
                              [&](std::size_t) { return SampleCheck{cases[i].kappa - 1e-3, moduli[i]}; },
                              [&](std::size_t) { return Vec{cases[i].kappa, moduli[i]}; }, "kappa;modulus"));
  }
  out.push_back(sweep_bound("modulus_shannon_cap" + tag_m(m), m, 1, Execution::Serial, [](std::size_t k) { return k; },
                            [&](std::size_t) { return SampleCheck{moduli[0], 1.2}; },
                            [&](std::size_t) { return Vec{moduli[0]}; }, "modulus"));
  const double upper = kappa_lbeta_segment(m, 0.5, true);
  const double lower = kappa_lbeta_segment(m, 0.5, false);
  out.push_back(sweep_bound("kappa_segments_at_half" + tag_m(m), m, 1, Execution::Serial, [](std::size_t k) { return k; },
                            [&](std::size_t) {
                              return within(std::max(std::abs(upper - 1.0), std::abs(lower - 1.0)), 1e-12);
                            },
                            [&](std::size_t) { return Vec{upper, lower}; }, "upper;lower"));
  const double near_one = kappa_lbeta_rescaled(m, 1.0 - 1e-6);
  const double limit = 1.0 / std::log(static_cast<double>(m));
  out.push_back(sweep_bound("kappa_rescaled_limit" + tag_m(m), m, 1, Execution::Serial, [](std::size_t k) { return k; },
                            [&](std::size_t) { return within(std::abs(near_one - limit) / limit, 1e-4); },
                            [&](std::size_t) { return Vec{near_one, limit}; }, "kappa(1-1e-6);1/log m"));
  return out;
}

// --------------------------------------------------------------- cw-bounds

std::vector<BoundReport> suite_cw_bounds(const SuiteConfig& cfg) {
  const std::size_t m = cfg.m;
  std::vector<BoundReport> out;
  const SweepOptions so = sweep_of(cfg);
  auto [zo, cw] = misclass_upper_bounds(m, so);
  out.push_back(std::move(zo));
  out.push_back(std::move(cw));

  const TightnessWitness tw = misclass_tightness(m, 1e-6);
  out.push_back(sweep_bound("misclass_tightness" + tag_m(m), m, 1, Execution::Serial, [](std::size_t k) { return k; },
                            [&](std::size_t) { return within(std::abs(tw.regret - 0.6), 3e-6); },
                            [&](std::size_t) { return Vec{tw.regret, tw.bound}; }, "regret;bound"));

  const ScoringRule like = make_scoring_rule(fam(FamilyKind::MultinomialLikelihood, m));
  const Loss like_loss = like.as_loss();
  auto make_rc = [&](std::size_t i) {
    Rng rng = stream_rng(cfg.seed, i);
    Vec eta = sample_simplex_mixed(m, rng);
    Vec q = sample_simplex_interior(m, 1e-3, rng);
    CostMatrix c = random_cost(m, rng);
    return std::tuple<Vec, Vec, CostMatrix>{std::move(eta), std::move(q), std::move(c)};
  };
  auto flat_rc = [](const std::tuple<Vec, Vec, CostMatrix>& s) {
    Vec v(std::get<0>(s));
    v.insert(v.end(), std::get<1>(s).begin(), std::get<1>(s).end());
    v.insert(v.end(), std::get<2>(s).row_major().begin(), std::get<2>(s).row_major().end());
    return v;
  };
  const std::size_t n_id = std::min<std::size_t>(cfg.samples, 20000);
  out.push_back(sweep_bound("risk_identity" + tag_m(m), m, n_id, cfg.exec, make_rc,
                            [&](const std::tuple<Vec, Vec, CostMatrix>& s) {
                              return within(risk_identity_residual(like_loss, std::get<2>(s), std::get<0>(s),
                                                                   std::get<1>(s)),
                                            1e-9);
                            },
                            flat_rc, "eta[m];q[m];C[m*m]"));

  const Loss zo_loss = make_zero_one_loss(m);
  out.push_back(sweep_bound("transform_identity" + tag_m(m), m, n_id, cfg.exec, make_rc,
                            [&](const std::tuple<Vec, Vec, CostMatrix>& s) {
                              const Vec& q = std::get<1>(s);
                              const CostMatrix& c = std::get<2>(s);
                              const Loss same = cost_transform(like_loss, CostMatrix::zero_one(m));
                              const Loss to_cw = cost_transform(zo_loss, c);
                              const Loss cw_loss = make_cost_weighted_loss(c);
                              Vec c0(m);
                              for (std::size_t j = 0; j < m; ++j) c0[j] = 0.5 + c(j, (j + 1) % m);
                              const Loss weighted = cost_transform(like_loss, CostMatrix::class_weighted(c0));
                              double worst = 0.0;
                              for (std::size_t j = 0; j < m; ++j) {
                                worst = std::max(worst, std::abs(same(j, q) - like_loss(j, q)));
                                worst = std::max(worst, std::abs(to_cw(j, q) - cw_loss(j, q)));
                                worst = std::max(worst, std::abs(weighted(j, q) - c0[j] * like_loss(j, q)));
                              }
                              return within(worst, 1e-12);
                            },
                            flat_rc, "eta[m];q[m];C[m*m]"));

  // The psi profiles below tabulate simplex meshes, which stop at m = 4.
  if (m > 4) return out;
  CwBoundOptions co;
  co.sweep = sweep_of(cfg, 20000);
  co.mesh.divisions = cfg.density;
  std::vector<std::pair<std::string, CostMatrix>> costs{{"ordinal", ordinal_cost(m)}};
  Vec c0(m);
  for (std::size_t j = 0; j < m; ++j) c0[j] = 1.0 + static_cast<double>(j);
  costs.emplace_back("class_weighted", CostMatrix::class_weighted(c0));
  costs.emplace_back("zero_one", CostMatrix::zero_one(m));
  std::vector<LossFamily> rules{fam(FamilyKind::MultinomialLikelihood, m), fam(FamilyKind::LBeta, m, 0.5)};
  for (const LossFamily& f : rules) {
    const ScoringRule rule = make_scoring_rule(f);
    for (const auto& [name, c] : costs) {
      for (BoundReport& r : check_cw_bounds(rule, c, co)) {
        r.bound_id += "_" + name;
        out.push_back(std::move(r));
      }
    }
  }
  if (m == 2) {
    for (FamilyKind k : {FamilyKind::TwoClassLikelihood, FamilyKind::TwoClassExponential}) {
      out.push_back(check_rw_bound(make_scoring_rule(fam(k, 2)), 1.0, 2.0, pick(cfg.density, 200)));
    }
  }
  return out;
}

// ------------------------------------------------------------- calibration

std::vector<BoundReport> suite_calibration(const SuiteConfig& cfg) {
  const std::size_t m = cfg.m;
  const std::size_t div = pick(cfg.density, m <= 3 ? 10 : 6);
  std::vector<std::pair<Vec, Vec>> items;
  for (const Vec& eta : simplex_mesh_min(m, div, 1.0 / static_cast<double>(div) - 1e-12)) {
    const double mx = *std::max_element(eta.begin(), eta.end());
    for (std::size_t k = 0; k < m; ++k) {
      if (eta[k] < mx - tol::kConstruction) items.push_back({eta, Vec{static_cast<double>(k)}});
    }
  }
  static constexpr std::size_t kPerAxis[] = {0, 121, 31, 13, 7, 5};
  const auto grid = box_grid(m - 1, -1.5, 1.5, m - 1 < 6 ? kPerAxis[m - 1] : 5);
  struct Case {
    FamilyKind kind;
    PredictionMap map;
  };
  std::vector<BoundReport> out;
  for (const Case& c : {Case{FamilyKind::ZO4, PredictionMap::Tilde}, Case{FamilyKind::CW3, PredictionMap::Dagger},
                        Case{FamilyKind::ZO3, PredictionMap::SigmaL}, Case{FamilyKind::LLW2, PredictionMap::SigmaL},
                        Case{FamilyKind::DKR2, PredictionMap::SigmaL}, Case{FamilyKind::ZO4, PredictionMap::SigmaL}}) {
    const Loss loss = make_hinge_loss(fam(c.kind, m));
    const EntropySpec h = zero_one_entropy(m);
    auto predict = [&](CSpan a) { return apply_prediction(c.map, a, &loss); };
    const double md = static_cast<double>(m);
    auto check = [&](const std::pair<Vec, Vec>& it) {
      const Vec& eta = it.first;
      const auto k = static_cast<std::size_t>(it.second[0]);
      const double gap = *std::max_element(eta.begin(), eta.end()) - eta[k];
      return SampleCheck{gap / md - tol::kInfimum, calibration_infimum(loss, h, predict, eta, k, grid)};
    };
    out.push_back(over_items("calibration_" + family_name(c.kind) + "_" + prediction_map_name(c.map) + tag_m(m), m,
                             items, cfg.exec, check, "eta[m];k"));
  }
  return out;
}

using SuiteFn = std::vector<BoundReport> (*)(const SuiteConfig&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r{
      {"duality", suite_duality},         {"properness", suite_properness},
      {"gradients", suite_gradients},     {"hinge-order", suite_hinge_order},
      {"entropy-match", suite_entropy_match}, {"hinge-bounds", suite_hinge_bounds},
      {"general-bound", suite_general_bound}, {"manifold", suite_manifold},
      {"pinsker", suite_pinsker},         {"kappa", suite_kappa},
      {"cw-bounds", suite_cw_bounds},     {"calibration", suite_calibration}};
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : registry()) n.push_back(name);
    return n;
  }();
  return names;
}

bool is_suite(const std::string& name) {
  const auto& n = suite_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

std::vector<BoundReport> run_suite(const SuiteConfig& cfg) {
  if (cfg.m < 2) throw ConfigurationError("m must be at least 2");
  for (const auto& [name, fn] : registry()) {
    if (name == cfg.suite) return fn(cfg);
  }
  throw ConfigurationError("unknown suite: " + cfg.suite);
}

std::vector<LossFamily> scoring_families(std::size_t m) {
  std::vector<LossFamily> out;
  if (m == 2) {
    for (FamilyKind k : {FamilyKind::TwoClassLikelihood, FamilyKind::TwoClassExponential,
                         FamilyKind::TwoClassCalibrationAsym, FamilyKind::TwoClassCalibrationSym}) {
      out.push_back(fam(k, 2));
    }
  }
  for (FamilyKind k : {FamilyKind::MultinomialLikelihood, FamilyKind::PairwiseAsymLikelihood,
                       FamilyKind::PairwiseAsymExponential, FamilyKind::PairwiseAsymCalibration,
                       FamilyKind::PairwiseSymLikelihood, FamilyKind::PairwiseSymExponential,
                       FamilyKind::PairwiseSymCalibration}) {
    out.push_back(fam(k, m));
  }
  for (double b : {0.5, 2.0}) out.push_back(fam(FamilyKind::LBeta, m, b));
  for (double b : {0.0, 0.5, 1.0, 2.0, std::numeric_limits<double>::infinity()}) {
    out.push_back(fam(FamilyKind::LBetaRescaled, m, b));
  }
  return out;
}

CostMatrix ordinal_cost(std::size_t m) {
  Vec c(m * m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < m; ++k) c[j * m + k] = std::abs(static_cast<double>(j) - static_cast<double>(k));
  }
  return CostMatrix(m, std::move(c));
}

}  // namespace mcloss
