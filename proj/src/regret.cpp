#include "mcloss/regret.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mcloss/hinge.hpp"
#include "mcloss/mesh.hpp"

namespace mcloss {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double max_entry(CSpan v) { return *std::max_element(v.begin(), v.end()); }

Vec concat(std::initializer_list<CSpan> parts) {
  Vec out;
  for (CSpan p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::string suffix_m(std::size_t m) { return "_m" + std::to_string(m); }

// A pair of simplex points where q is either unrelated to eta or a small
// perturbation of it, so that both the bulk and the near-tight region of a
// bound are exercised.
std::pair<Vec, Vec> sample_prob_pair(std::size_t m, Rng& rng, double floor) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec eta = sample_simplex_mixed(m, rng);
  Vec other = sample_simplex_mixed(m, rng);
  const double w = u(rng) < 0.5 ? u(rng) : 0.05 * u(rng);
  Vec q(m);
  for (std::size_t i = 0; i < m; ++i) q[i] = (1.0 - w) * eta[i] + w * other[i];
  if (floor > 0.0) q = make_prob(q, floor).vec();
  return {std::move(eta), std::move(q)};
}

}  // namespace

double bzo(CSpan eta, CSpan score) {
  if (eta.size() != score.size()) throw InvalidInput("bzo: dimension mismatch");
  return max_entry(eta) - eta[argmax_lowest(score)];
}

double bcw(const CostMatrix& c, CSpan eta, CSpan score) {
  if (eta.size() != c.size() || score.size() != c.size()) throw InvalidInput("bcw: dimension mismatch");
  const Vec r = c.apply_transpose(eta);
  return r[argmax_lowest(score)] - *std::min_element(r.begin(), r.end());
}

double regret(const Loss& loss, const EntropySpec& h, CSpan eta, CSpan action) {
  if (h.m != loss.m) throw ConfigurationError("regret: entropy and loss disagree on m");
  const double b = risk(loss, eta, action) - h(eta);
  if (b < -tol::kSlack) {
    throw ConfigurationError("regret: entropy " + h.label + " exceeds the risk of " + loss.name +
                             " at eta=" + format_vec(eta));
  }
  return b;
}

void certify_entropy(const Loss& loss, const EntropySpec& h, const ActionSet& actions,
                     const std::vector<Vec>& points, double tolerance) {
  const LossTable table = tabulate(loss, actions);
  for (const Vec& eta : points) {
    const double got = entropy_of_loss(loss, table, eta).value;
    const double want = h(eta);
    if (!(std::abs(got - want) <= tolerance)) {
      throw ConfigurationError("certify_entropy: " + loss.name + " has minimal risk " +
                               format_double(got) + " but " + h.label + " gives " +
                               format_double(want) + " at eta=" + format_vec(eta));
    }
  }
}

std::string prediction_map_name(PredictionMap p) {
  switch (p) {
    case PredictionMap::Identity: return "identity";
    case PredictionMap::Dagger: return "dagger";
    case PredictionMap::Tilde: return "tilde";
    case PredictionMap::SigmaL: return "sigma_l";
  }
  return "identity";
}

PredictionMap prediction_map_from_name(const std::string& name) {
  if (name == "identity" || name == "argmax") return PredictionMap::Identity;
  if (name == "dagger") return PredictionMap::Dagger;
  if (name == "tilde") return PredictionMap::Tilde;
  if (name == "sigma_l" || name == "sigma") return PredictionMap::SigmaL;
  throw ConfigurationError("unknown prediction map: " + name);
}

Vec apply_prediction(PredictionMap p, CSpan action, const Loss* loss) {
  switch (p) {
    case PredictionMap::Identity: return Vec(action.begin(), action.end());
    case PredictionMap::Dagger: return predict_dag(action);
    case PredictionMap::Tilde: return predict_tilde(action);
    case PredictionMap::SigmaL:
      if (!loss) throw InvalidInput("apply_prediction: sigma_L needs a loss");
      return sigma_L(*loss, action);
  }
  return {};
}

BoundReport check_hinge_bounds(const LossFamily& family, const SweepOptions& opts) {
  const std::size_t m = family.m;
  if (m < 2) throw InvalidInput("check_hinge_bounds: m must be at least 2");
  struct Sample {
    Vec eta, tau;
  };
  auto make = [&](std::size_t i) {
    Rng rng = stream_rng(opts.seed, i);
    Sample s;
    s.eta = sample_simplex_mixed(m, rng);
    s.tau = sample_margin(m - 1, opts.margin_scale, rng);
    return s;
  };
  auto flatten = [](const Sample& s) { return concat({s.eta, s.tau}); };
  const double md = static_cast<double>(m);

  if (family.kind == FamilyKind::CW3) {
    const CostMatrix c = family.cost ? *family.cost : CostMatrix::zero_one(m);
    const EntropySpec h = cost_weighted_entropy(c);
    auto check = [&](const Sample& s) {
      const Vec z = hinge_values(family, s.tau);
      return SampleCheck{bcw(c, s.eta, predict_dag(s.tau)) / md, expect(s.eta, z) - h(s.eta)};
    };
    return sweep_bound("hinge_cw3" + suffix_m(m), m, opts.samples, opts.exec, make, check, flatten,
                       "eta[m];tau[m-1]");
  }
  if (family.kind == FamilyKind::ZO4) {
    auto check = [&](const Sample& s) {
      const Vec z = zo4_all(s.tau);
      return SampleCheck{bzo(s.eta, predict_tilde(s.tau)) / md,
                         expect(s.eta, z) - (1.0 - max_entry(s.eta))};
    };
    return sweep_bound("hinge_zo4" + suffix_m(m), m, opts.samples, opts.exec, make, check, flatten,
                       "eta[m];tau[m-1]");
  }
  throw InvalidInput("check_hinge_bounds: family must be cw3 or zo4");
}

BoundReport check_general_bound(const LossFamily& family, const SweepOptions& opts) {
  const std::size_t m = family.m;
  const Loss loss = make_hinge_loss(family);
  const std::size_t dim = loss.action_dim;
  static constexpr std::size_t kPerAxis[] = {0, 161, 41, 17, 9, 7};
  const std::size_t per_axis = dim < 6 ? kPerAxis[dim] : 5;
  ActionSet actions = margin_actions(dim, -1.0, 1.0, per_axis);
  certify_entropy(loss, zero_one_entropy(m), actions, simplex_mesh(m, m <= 3 ? 6 : 4));

  struct Sample {
    Vec eta, gamma;
  };
  auto make = [&](std::size_t i) {
    Rng rng = stream_rng(opts.seed, i);
    Sample s;
    s.eta = sample_simplex_mixed(m, rng);
    s.gamma = sample_margin(dim, opts.margin_scale, rng);
    return s;
  };
  const double md = static_cast<double>(m);
  auto check = [&](const Sample& s) {
    const Vec z = loss.vector(s.gamma);
    Vec sigma(z);
    for (double& x : sigma) x = -x;
    return SampleCheck{bzo(s.eta, sigma) / md, expect(s.eta, z) - (1.0 - max_entry(s.eta))};
  };
  auto flatten = [](const Sample& s) { return concat({s.eta, s.gamma}); };
  return sweep_bound("general_" + family_name(family.kind) + suffix_m(m), m, opts.samples, opts.exec,
                     make, check, flatten, "eta[m];gamma[m-1]");
}

BoundReport check_monotone_ordering(const LossFamily& family, const SweepOptions& opts) {
  const std::size_t m = family.m;
  PredictionMap map;
  if (family.kind == FamilyKind::ZO4) {
    map = PredictionMap::Tilde;
  } else if (family.kind == FamilyKind::CW3) {
    map = PredictionMap::Dagger;
  } else {
    throw InvalidInput("check_monotone_ordering: family must be zo4 or cw3");
  }
  auto make = [&](std::size_t i) {
    Rng rng = stream_rng(opts.seed, i);
    return sample_margin(m - 1, opts.margin_scale, rng);
  };
  auto check = [&](const Vec& tau) {
    const Vec score = apply_prediction(map, tau);
    const Vec z = hinge_values(family, tau);
    double worst = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = 0; k < m; ++k) {
        if (score[j] > score[k] + tol::kConstruction) worst = std::max(worst, z[j] - z[k]);
      }
    }
    return SampleCheck{worst, 0.0};
  };
  auto flatten = [](const Vec& tau) { return tau; };
  return sweep_bound("order_" + family_name(family.kind) + "_" + prediction_map_name(map) + suffix_m(m),
                     m, opts.samples, opts.exec, make, check, flatten, "tau[m-1]");
}

double hull_distance(const std::vector<Vec>& points, CSpan v, std::size_t iterations) {
  if (points.empty()) return kInf;
  const std::size_t d = v.size();
  auto dist2 = [&](CSpan a) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) s += (a[i] - v[i]) * (a[i] - v[i]);
    return s;
  };
  std::size_t best = 0;
  double best_d = kInf;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double di = dist2(points[i]);
    if (di < best_d) {
      best_d = di;
      best = i;
    }
  }
  Vec x = points[best];
  for (std::size_t it = 0; it < iterations && best_d > 0.0; ++it) {
    Vec g(d);
    for (std::size_t i = 0; i < d; ++i) g[i] = x[i] - v[i];
    std::size_t s = 0;
    double smin = kInf;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double val = dot(g, points[i]);
      if (val < smin) {
        smin = val;
        s = i;
      }
    }
    Vec dir(d);
    double dd = 0.0, gd = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      dir[i] = points[s][i] - x[i];
      dd += dir[i] * dir[i];
      gd += g[i] * dir[i];
    }
    if (dd <= 0.0 || gd >= 0.0) break;
    const double step = std::min(1.0, -gd / dd);
    for (std::size_t i = 0; i < d; ++i) x[i] += step * dir[i];
    best_d = dist2(x);
  }
  return std::sqrt(best_d);
}

ManifoldResult value_manifold_check(const Loss& loss, const SweepOptions& opts, double vertex_tolerance,
                                    std::size_t fw_iterations) {
  const std::size_t m = loss.m;
  const double md = static_cast<double>(m);
  auto make = [&](std::size_t i) {
    Rng rng = stream_rng(opts.seed, i);
    return sample_margin(loss.action_dim, opts.margin_scale, rng);
  };
  std::vector<Vec> values(opts.samples);
  auto check = [&](const Vec& action) {
    const Vec z = loss.vector(action);
    double capped = 0.0, negative = -kInf;
    for (double x : z) {
      capped += std::min(x, 1.0);
      negative = std::max(negative, -x);
    }
    return SampleCheck{std::max(md - 1.0 - capped, negative), 0.0};
  };
  auto flatten = [](const Vec& a) { return a; };
  ManifoldResult out;
  out.membership = sweep_bound("manifold_membership_" + loss.name + suffix_m(m), m, opts.samples,
                               opts.exec, make, check, flatten, "action");
  for_each_index(opts.samples, opts.exec, [&](std::size_t i) { values[i] = loss.vector(make(i)); });

  auto vertex = [m](std::size_t j) {
    Vec v(m, 1.0);
    v[j] = 0.0;
    return v;
  };
  auto vcheck = [&](std::size_t j) {
    return SampleCheck{hull_distance(values, vertex(j), fw_iterations), vertex_tolerance};
  };
  auto identity = [](std::size_t j) { return j; };
  auto vflatten = [&](std::size_t j) { return vertex(j); };
  out.vertices = sweep_bound("manifold_vertices_" + loss.name + suffix_m(m), m, m, Execution::Serial,
                             identity, vcheck, vflatten, "vertex[m]");
  return out;
}

double strong_convexity_modulus(const EntropySpec& h, std::size_t divisions, std::size_t random_directions,
                                std::uint64_t seed) {
  if (!h.smooth) throw InvalidInput("strong_convexity_modulus: " + h.label + " is not smooth");
  const std::size_t m = h.m;
  if (m < 2 || divisions < m) throw InvalidInput("strong_convexity_modulus: mesh too coarse");
  const auto points = simplex_mesh_min(m, divisions, 1.0 / static_cast<double>(divisions) - 1e-12);
  Vec result(points.size(), kInf);

  for_each_index(points.size(), Execution::Parallel, [&](std::size_t p) {
    const Vec& eta = points[p];
    std::vector<Vec> dirs;
    for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << m); ++mask) {
      double pos = 0.0, neg = 0.0;
      for (std::size_t i = 0; i < m; ++i) ((mask >> i) & 1 ? pos : neg) += eta[i];
      Vec x(m);
      for (std::size_t i = 0; i < m; ++i) x[i] = (mask >> i) & 1 ? eta[i] / pos : -eta[i] / neg;
      dirs.push_back(std::move(x));
    }
    Rng rng = stream_rng(seed, p);
    std::normal_distribution<double> n01;
    for (std::size_t r = 0; r < random_directions; ++r) {
      Vec x(m);
      double mean = 0.0;
      for (double& xi : x) mean += (xi = n01(rng));
      for (double& xi : x) xi -= mean / static_cast<double>(m);
      dirs.push_back(std::move(x));
    }
    const double eta_min = *std::min_element(eta.begin(), eta.end());
    const double h0 = h(eta);
    double best = kInf;
    for (Vec& x : dirs) {
      const double l1 = norm1(x);
      if (l1 <= 0.0) continue;
      for (double& xi : x) xi /= l1;
      const double step = 1e-3 * eta_min;
      Vec a(eta), b(eta);
      for (std::size_t i = 0; i < m; ++i) {
        a[i] += step * x[i];
        b[i] -= step * x[i];
      }
      const double q = -(h(a) - 2.0 * h0 + h(b)) / (step * step);
      best = std::min(best, q);
    }
    result[p] = best;
  });
  return *std::min_element(result.begin(), result.end());
}

double kappa_pairwise_beta(double nu) {
  if (!(nu <= 0.0)) throw InvalidInput("kappa: the pairwise Beta family needs nu <= 0");
  return 2.0;
}

double kappa_lbeta_segment(std::size_t m, double beta, bool upper) {
  if (!(beta > 0.0 && beta < 1.0)) throw InvalidInput("kappa: L_beta needs beta in (0, 1)");
  if (m < 2) throw InvalidInput("kappa: m must be at least 2");
  if (upper ? beta < 0.5 : beta > 0.5) throw InvalidInput("kappa: beta outside the segment");
  const double md = static_cast<double>(m);
  if (upper) {
    return (1.0 - beta) * std::pow(md, (1.0 - 1.0 / beta) * (2.0 * beta - 1.0)) * std::pow(2.0, 2.0 - 2.0 * beta);
  }
  return (1.0 - beta) * std::pow(2.0, 1.0 / beta - 1.0);
}

double kappa_lbeta(std::size_t m, double beta) { return kappa_lbeta_segment(m, beta, beta >= 0.5); }

double kappa_lbeta_rescaled(std::size_t m, double beta) {
  if (m < 2) throw InvalidInput("kappa: m must be at least 2");
  if (std::abs(beta - 1.0) < 1e-8) return 1.0 / std::log(static_cast<double>(m));
  return kappa_lbeta(m, beta) / lbeta_rescale_denominator(m, beta);
}

double kappa_constant(const LossFamily& family) {
  switch (family.kind) {
    case FamilyKind::TwoClassLikelihood:
    case FamilyKind::TwoClassExponential:
    case FamilyKind::MultinomialLikelihood:
      return 1.0;
    case FamilyKind::PairwiseSymLikelihood:
      return kappa_pairwise_beta(0.0);
    case FamilyKind::PairwiseSymExponential:
      return kappa_pairwise_beta(-0.5);
    case FamilyKind::LBeta:
      return kappa_lbeta(family.m, family.beta);
    case FamilyKind::LBetaRescaled:
      return kappa_lbeta_rescaled(family.m, family.beta);
    default:
      throw InvalidInput("kappa_constant: no constant for " + family_name(family.kind));
  }
}

std::pair<BoundReport, BoundReport> check_scoring_bounds(const ScoringRule& rule, double kappa,
                                                         const SweepOptions& opts) {
  const std::size_t m = rule.m;
  const Loss loss = rule.as_loss();
  struct Sample {
    Vec eta, q;
  };
  auto make = [&](std::size_t i) {
    Rng rng = stream_rng(opts.seed, i);
    auto [eta, q] = sample_prob_pair(m, rng, 1e-9);
    return Sample{std::move(eta), std::move(q)};
  };
  auto breg = [&](const Sample& s) { return risk(loss, s.eta, s.q) - rule.entropy(s.eta); };
  auto flatten = [](const Sample& s) { return concat({s.eta, s.q}); };
  auto l1 = [&](const Sample& s) {
    Vec d(m);
    for (std::size_t i = 0; i < m; ++i) d[i] = s.eta[i] - s.q[i];
    const double n = norm1(d);
    return SampleCheck{0.5 * kappa * n * n, breg(s)};
  };
  auto zo = [&](const Sample& s) {
    const double b = bzo(s.eta, s.q);
    return SampleCheck{0.5 * kappa * b * b, breg(s)};
  };
  const std::string tag = rule.label + suffix_m(m);
  return {sweep_bound("bregman_l1_" + tag, m, opts.samples, opts.exec, make, l1, flatten, "eta[m];q[m]"),
          sweep_bound("zo_quadratic_" + tag, m, opts.samples, opts.exec, make, zo, flatten, "eta[m];q[m]")};
}

double calibration_infimum(const Loss& loss, const EntropySpec& h, const std::function<Vec(CSpan)>& predict,
                           CSpan eta, std::size_t k, const std::vector<Vec>& actions) {
  if (k >= eta.size()) throw InvalidInput("calibration_infimum: class out of range");
  if (!(eta[k] < max_entry(eta) - tol::kConstruction)) {
    throw InvalidInput("calibration_infimum: class is a Bayes class");
  }
  const double hv = h(eta);
  double best = kInf;
  for (const Vec& a : actions) {
    if (argmax_lowest(predict(a)) != k) continue;
    best = std::min(best, risk(loss, eta, a) - hv);
  }
  return best;
}

std::pair<BoundReport, BoundReport> check_bregman_monotonicity(const EntropySpec& h, const SweepOptions& opts) {
  const std::size_t m = h.m;
  struct Sample {
    Vec x, y;
    double w;
  };
  auto make = [&](std::size_t i) {
    Rng rng = stream_rng(opts.seed, i);
    Sample s;
    s.x = make_prob(sample_simplex_mixed(m, rng), 1e-9).vec();
    s.y = make_prob(sample_simplex_mixed(m, rng), 1e-9).vec();
    s.w = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    return s;
  };
  auto xw = [m](const Sample& s) {
    Vec v(m);
    for (std::size_t i = 0; i < m; ++i) v[i] = (1.0 - s.w) * s.x[i] + s.w * s.y[i];
    return v;
  };
  auto first = [&](const Sample& s) { return SampleCheck{bregman(h, xw(s), s.y), bregman(h, s.x, s.y)}; };
  auto second = [&](const Sample& s) { return SampleCheck{bregman(h, s.x, xw(s)), bregman(h, s.x, s.y)}; };
  auto flatten = [](const Sample& s) { return concat({s.x, s.y, Vec{s.w}}); };
  const std::string tag = h.label + suffix_m(m);
  return {sweep_bound("bregman_mono_first_" + tag, m, opts.samples, opts.exec, make, first, flatten, "x[m];y[m];w"),
          sweep_bound("bregman_mono_second_" + tag, m, opts.samples, opts.exec, make, second, flatten,
                      "x[m];y[m];w")};
}

}  // namespace mcloss
