#include "mcloss/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mcloss {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double logistic(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

double log_sum_exp(CSpan h) {
  const double mx = *std::max_element(h.begin(), h.end());
  double s = 0.0;
  for (double x : h) s += std::exp(x - mx);
  return mx + std::log(s);
}

void require_label(std::size_t j, std::size_t m) {
  if (j >= m) throw InvalidInput("label out of range");
}

double ratio(double a, double b) {
  if (b == 0.0) return a == 0.0 ? std::numeric_limits<double>::quiet_NaN() : kInf;
  return a / b;
}

double safe_log(double x) { return x > 0.0 ? std::log(x) : -kInf; }

double display_value(const LossFamily& fam, std::size_t j, CSpan q) {
  const std::size_t m = q.size();
  require_label(j, m);
  const std::size_t last = m - 1;
  switch (fam.kind) {
    case FamilyKind::TwoClassLikelihood:
    case FamilyKind::MultinomialLikelihood:
      return -safe_log(q[j]);
    case FamilyKind::TwoClassExponential:
      return std::sqrt(ratio(q[1 - j], q[j]));
    case FamilyKind::TwoClassCalibrationAsym:
      if (j == 0) return 0.5 * ratio(q[1], q[0]);
      return 0.5 * (safe_log(q[0]) - safe_log(q[1]) - 1.0);
    case FamilyKind::TwoClassCalibrationSym:
      return two_class_loss(f0_calibration_sym(), j, q);
    case FamilyKind::PairwiseAsymLikelihood: {
      if (j < last) return std::log1p(ratio(q[last], q[j]));
      double s = 0.0;
      for (std::size_t k = 0; k < last; ++k) s += std::log1p(ratio(q[k], q[last]));
      return s;
    }
    case FamilyKind::PairwiseAsymExponential: {
      if (j < last) return std::sqrt(ratio(q[last], q[j])) - 1.0;
      double s = 0.0;
      for (std::size_t k = 0; k < last; ++k) s += std::sqrt(ratio(q[k], q[last])) - 1.0;
      return s;
    }
    case FamilyKind::PairwiseAsymCalibration: {
      if (j < last) return 0.5 * ratio(q[last], q[j]);
      double s = 0.0;
      for (std::size_t k = 0; k < last; ++k) s += 0.5 * (safe_log(q[k]) - safe_log(q[last]) - 1.0);
      return s;
    }
    case FamilyKind::PairwiseSymLikelihood: {
      double s = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        if (k != j) s += 2.0 * std::log1p(ratio(q[k], q[j]));
      }
      return s;
    }
    case FamilyKind::PairwiseSymExponential: {
      double s = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        if (k != j) s += 2.0 * std::sqrt(ratio(q[k], q[j]));
      }
      return s;
    }
    case FamilyKind::PairwiseSymCalibration: {
      double s = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        if (k != j) s += 0.5 * (ratio(q[k], q[j]) + safe_log(q[k]) - safe_log(q[j]));
      }
      return s;
    }
    case FamilyKind::LBeta:
      return lbeta_loss(fam.beta, j, q);
    case FamilyKind::LBetaRescaled:
      return lbeta_rescaled_loss(fam.beta, j, q);
    default:
      throw InvalidInput("scoring rule: not a scoring family");
  }
}

double family_offset(const LossFamily& fam) {
  const auto m = static_cast<double>(fam.m);
  switch (fam.kind) {
    case FamilyKind::TwoClassExponential:
      return 1.0;
    case FamilyKind::PairwiseSymExponential:
      return 2.0 * (m - 1.0);
    case FamilyKind::PairwiseSymCalibration:
      return 0.5 * (m - 1.0);
    default:
      return 0.0;
  }
}

}  // namespace

double two_class_loss(const UnivariateConvex& f0, std::size_t j, CSpan q) {
  if (q.size() != 2) throw InvalidInput("two_class_loss: needs m = 2");
  return pairwise_asymmetric(f0, j, q);
}

double pairwise_asymmetric(const UnivariateConvex& f0, std::size_t j, CSpan q) {
  const std::size_t m = q.size();
  require_label(j, m);
  const std::size_t last = m - 1;
  if (j < last) return -f0.d1(ratio(q[j], q[last]));
  double s = 0.0;
  for (std::size_t k = 0; k < last; ++k) {
    const double u = ratio(q[k], q[last]);
    s += u * f0.d1(u) - f0.f(u);
  }
  return s;
}

double pairwise_symmetric(const UnivariateConvex& f0, std::size_t j, CSpan q) {
  const std::size_t m = q.size();
  require_label(j, m);
  double s = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    if (k == j) continue;
    const double r = ratio(q[k], q[j]);
    s -= f0.f(r) - r * f0.d1(r) + f0.d1(ratio(q[j], q[k]));
  }
  return s;
}

double two_class_weight(const UnivariateConvex& f0, double q1) {
  if (!(q1 > 0.0 && q1 < 1.0)) throw InvalidInput("two_class_weight: q1 must lie in (0,1)");
  const double q2 = 1.0 - q1;
  return f0.d2(q1 / q2) / (q2 * q2 * q2);
}

double beta_family_weight(double nu, double q1) {
  if (!(q1 > 0.0 && q1 < 1.0)) throw InvalidInput("beta_family_weight: q1 must lie in (0,1)");
  const double q2 = 1.0 - q1;
  return std::pow(2.0, 2.0 * nu) * std::pow(q1, nu - 1.0) * std::pow(q2, nu - 1.0);
}

double lbeta_loss(double beta, std::size_t j, CSpan q) {
  require_label(j, q.size());
  if (!(beta > 0.0) || !std::isnan(lbeta_limit_point(beta))) {
    throw InvalidInput("lbeta_loss: beta must be positive and away from 1 and inf");
  }
  const double n = lp_norm(q, beta);
  const double v = q[j] > 0.0 ? std::pow(q[j] / n, beta - 1.0) : (beta < 1.0 ? kInf : 0.0);
  return beta < 1.0 ? v : -v;
}

double lbeta_limit(double beta, std::size_t j, CSpan q) {
  const std::size_t m = q.size();
  require_label(j, m);
  const auto md = static_cast<double>(m);
  if (beta == 0.0) {
    double s = 0.0;
    for (double x : q) s += safe_log(x);
    return std::exp(s / md - safe_log(q[j]));
  }
  if (beta == 0.5) {
    double s = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      if (k != j) s += std::sqrt(ratio(q[k], q[j]));
    }
    return s / (md - 1.0);
  }
  if (beta == 1.0) return -safe_log(q[j]) / std::log(md);
  if (std::isinf(beta)) return (j == argmax_lowest(q) ? 0.0 : 1.0) / (1.0 - 1.0 / md);
  throw InvalidInput("lbeta_limit: beta must be one of 0, 1/2, 1, inf");
}

double lbeta_rescaled_loss(double beta, std::size_t j, CSpan q) {
  require_label(j, q.size());
  if (std::isnan(beta) || beta < 0.0) throw InvalidInput("lbeta_rescaled_loss: beta must be nonnegative");
  const double lim = lbeta_limit_point(beta);
  if (!std::isnan(lim)) return lbeta_limit(lim, j, q);
  const double n = lp_norm(q, beta);
  const double v = q[j] > 0.0 ? std::pow(q[j] / n, beta - 1.0) : (beta < 1.0 ? kInf : 0.0);
  return (v - 1.0) / lbeta_rescale_denominator(q.size(), beta);
}

Loss ScoringRule::as_loss() const {
  Loss l;
  l.name = label;
  l.m = m;
  l.action_dim = m;
  l.value = eval;
  return l;
}

ScoringRule make_scoring_rule(const LossFamily& family) {
  if (!is_scoring_family(family.kind)) throw InvalidInput("make_scoring_rule: not a scoring family");
  const std::size_t m = family.m;
  if (m < 2) throw InvalidInput("make_scoring_rule: m must be at least 2");
  ScoringRule r;
  r.family = family;
  r.label = family_name(family.kind);
  r.m = m;
  r.additive_constant = family_offset(family);
  r.eval = [family](std::size_t j, CSpan q) { return display_value(family, j, q); };
  switch (family.kind) {
    case FamilyKind::TwoClassLikelihood:
    case FamilyKind::MultinomialLikelihood:
      r.generator = shannon_dissimilarity(m);
      r.entropy = shannon_entropy(m);
      break;
    case FamilyKind::TwoClassExponential:
    case FamilyKind::TwoClassCalibrationAsym:
    case FamilyKind::TwoClassCalibrationSym:
    case FamilyKind::PairwiseAsymLikelihood:
    case FamilyKind::PairwiseAsymExponential:
    case FamilyKind::PairwiseAsymCalibration:
      r.generator = separable_dissimilarity(f0_by_name(generator_name(family.kind)), m);
      break;
    case FamilyKind::PairwiseSymLikelihood:
    case FamilyKind::PairwiseSymExponential:
    case FamilyKind::PairwiseSymCalibration:
      r.generator = pairwise_symmetric_dissimilarity(f0_by_name(generator_name(family.kind)), m);
      break;
    case FamilyKind::LBeta:
      r.generator = lbeta_dissimilarity(m, family.beta, false);
      r.entropy = lbeta_entropy(m, family.beta, false);
      r.label += "(" + std::to_string(family.beta) + ")";
      break;
    case FamilyKind::LBetaRescaled:
      r.generator = lbeta_dissimilarity(m, family.beta, true);
      r.entropy = lbeta_entropy(m, family.beta, true);
      r.strictly_proper = !std::isinf(lbeta_limit_point(family.beta));
      r.label += "(" + std::to_string(family.beta) + ")";
      break;
    default:
      break;
  }
  if (!r.entropy.eval) {
    EntropySpec base = entropy_from_dissimilarity(*r.generator);
    const double c = r.additive_constant;
    r.entropy = base;
    r.entropy.label = r.label;
    r.entropy.eval = [base, c](CSpan eta) { return base.eval(eta) + c; };
  }
  return r;
}

double canonical_representation_residual(const ScoringRule& rule, CSpan eta, CSpan q) {
  double risk_value = 0.0;
  for (std::size_t j = 0; j < rule.m; ++j) {
    if (eta[j] != 0.0) risk_value += eta[j] * rule.eval(j, q);
  }
  const Vec g = rule.entropy.supergradient(q);
  double savage = rule.entropy.eval(q);
  for (std::size_t j = 0; j < rule.m; ++j) {
    if (eta[j] != 0.0) savage += eta[j] * g[j];
    if (q[j] != 0.0) savage -= q[j] * g[j];
  }
  return std::abs(risk_value - savage);
}

Vec softmax(CSpan h) {
  const double mx = *std::max_element(h.begin(), h.end());
  Vec q(h.size());
  double s = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    q[i] = std::exp(h[i] - mx);
    s += q[i];
  }
  for (double& x : q) x /= s;
  return q;
}

Vec softmax_reduced(CSpan h) {
  Vec full(h.begin(), h.end());
  full.push_back(0.0);
  return softmax(full);
}

double composite_loss(const ScoringRule& rule, std::size_t j, CSpan h) {
  const std::size_t m = h.size();
  if (m != rule.m) throw InvalidInput("composite_loss: wrong logit dimension");
  require_label(j, m);
  const std::size_t last = m - 1;
  switch (rule.family.kind) {
    case FamilyKind::TwoClassLikelihood:
    case FamilyKind::MultinomialLikelihood:
      return log_sum_exp(h) - h[j];
    case FamilyKind::TwoClassExponential:
      return std::exp(0.5 * (h[1 - j] - h[j]));
    case FamilyKind::TwoClassCalibrationAsym:
      return j == 0 ? 0.5 * std::exp(h[1] - h[0]) : 0.5 * (h[0] - h[1] - 1.0);
    case FamilyKind::TwoClassCalibrationSym: {
      const double d = h[0] - h[1];
      return j == 0 ? -0.5 * (d + 1.0 - std::exp(-d)) : 0.5 * (std::exp(d) - 1.0 + d);
    }
    case FamilyKind::PairwiseAsymLikelihood: {
      if (j < last) return softplus(h[last] - h[j]);
      double s = 0.0;
      for (std::size_t k = 0; k < last; ++k) s += softplus(h[k] - h[last]);
      return s;
    }
    case FamilyKind::PairwiseAsymExponential: {
      if (j < last) return std::exp(0.5 * (h[last] - h[j])) - 1.0;
      double s = 0.0;
      for (std::size_t k = 0; k < last; ++k) s += std::exp(0.5 * (h[k] - h[last])) - 1.0;
      return s;
    }
    case FamilyKind::PairwiseAsymCalibration: {
      if (j < last) return 0.5 * std::exp(h[last] - h[j]);
      double s = 0.0;
      for (std::size_t k = 0; k < last; ++k) s += 0.5 * (h[k] - h[last] - 1.0);
      return s;
    }
    case FamilyKind::PairwiseSymLikelihood: {
      double s = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        if (k != j) s += 2.0 * softplus(h[k] - h[j]);
      }
      return s;
    }
    case FamilyKind::PairwiseSymExponential: {
      double s = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        if (k != j) s += 2.0 * std::exp(0.5 * (h[k] - h[j]));
      }
      return s;
    }
    case FamilyKind::PairwiseSymCalibration: {
      double s = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        if (k != j) s += 0.5 * (std::exp(h[k] - h[j]) + h[k] - h[j]);
      }
      return s;
    }
    default:
      return rule.eval(j, softmax(h));
  }
}

Vec composite_gradient(const ScoringRule& rule, std::size_t j, CSpan h) {
  const std::size_t m = h.size();
  if (m != rule.m) throw InvalidInput("composite_gradient: wrong logit dimension");
  require_label(j, m);
  const std::size_t last = m - 1;
  Vec g(m, 0.0);
  switch (rule.family.kind) {
    case FamilyKind::TwoClassLikelihood:
    case FamilyKind::MultinomialLikelihood: {
      g = softmax(h);
      g[j] -= 1.0;
      return g;
    }
    case FamilyKind::TwoClassExponential: {
      const double l = std::exp(0.5 * (h[1 - j] - h[j]));
      g[j] = -0.5 * l;
      g[1 - j] = 0.5 * l;
      return g;
    }
    case FamilyKind::TwoClassCalibrationAsym: {
      if (j == 0) {
        const double l = 0.5 * std::exp(h[1] - h[0]);
        g = {-l, l};
      } else {
        g = {0.5, -0.5};
      }
      return g;
    }
    case FamilyKind::TwoClassCalibrationSym: {
      const double d = h[0] - h[1];
      const double c = j == 0 ? -0.5 * (1.0 + std::exp(-d)) : 0.5 * (std::exp(d) + 1.0);
      g = {c, -c};
      return g;
    }
    case FamilyKind::PairwiseAsymLikelihood: {
      if (j < last) {
        const double s = logistic(h[last] - h[j]);
        g[j] = -s;
        g[last] = s;
      } else {
        for (std::size_t k = 0; k < last; ++k) {
          const double s = logistic(h[k] - h[last]);
          g[k] = s;
          g[last] -= s;
        }
      }
      return g;
    }
    case FamilyKind::PairwiseAsymExponential: {
      if (j < last) {
        const double e = 0.5 * std::exp(0.5 * (h[last] - h[j]));
        g[j] = -e;
        g[last] = e;
      } else {
        for (std::size_t k = 0; k < last; ++k) {
          const double e = 0.5 * std::exp(0.5 * (h[k] - h[last]));
          g[k] = e;
          g[last] -= e;
        }
      }
      return g;
    }
    case FamilyKind::PairwiseAsymCalibration: {
      if (j < last) {
        const double e = 0.5 * std::exp(h[last] - h[j]);
        g[j] = -e;
        g[last] = e;
      } else {
        for (std::size_t k = 0; k < last; ++k) g[k] = 0.5;
        g[last] = -0.5 * static_cast<double>(last);
      }
      return g;
    }
    case FamilyKind::PairwiseSymLikelihood: {
      for (std::size_t k = 0; k < m; ++k) {
        if (k == j) continue;
        const double s = 2.0 * logistic(h[k] - h[j]);
        g[k] = s;
        g[j] -= s;
      }
      return g;
    }
    case FamilyKind::PairwiseSymExponential: {
      for (std::size_t k = 0; k < m; ++k) {
        if (k == j) continue;
        const double e = std::exp(0.5 * (h[k] - h[j]));
        g[k] = e;
        g[j] -= e;
      }
      return g;
    }
    case FamilyKind::PairwiseSymCalibration: {
      for (std::size_t k = 0; k < m; ++k) {
        if (k == j) continue;
        const double e = 0.5 * (std::exp(h[k] - h[j]) + 1.0);
        g[k] = e;
        g[j] -= e;
      }
      return g;
    }
    case FamilyKind::LBeta:
    case FamilyKind::LBetaRescaled: {
      const double beta = rule.family.beta;
      const bool rescaled = rule.family.kind == FamilyKind::LBetaRescaled;
      const double lim = rescaled ? lbeta_limit_point(beta) : std::numeric_limits<double>::quiet_NaN();
      const auto md = static_cast<double>(m);
      if (std::isinf(lim)) throw InvalidInput("composite_gradient: the beta = inf loss is not differentiable");
      const Vec q = softmax(h);
      if (lim == 1.0) {
        for (std::size_t l = 0; l < m; ++l) g[l] = (q[l] - (l == j ? 1.0 : 0.0)) / std::log(md);
        return g;
      }
      if (lim == 0.0) {
        double mean = 0.0;
        for (double x : h) mean += x;
        mean /= md;
        const double l0 = std::exp(mean - h[j]);
        for (std::size_t l = 0; l < m; ++l) g[l] = l0 * (1.0 / md - (l == j ? 1.0 : 0.0));
        return g;
      }
      double s = 0.0;
      Vec qb(m);
      for (std::size_t l = 0; l < m; ++l) {
        qb[l] = std::pow(q[l], beta);
        s += qb[l];
      }
      const double raw = std::pow(q[j] / std::pow(s, 1.0 / beta), beta - 1.0);
      double scale;
      if (rescaled) {
        scale = (1.0 - beta) * raw / lbeta_rescale_denominator(m, beta);
      } else {
        scale = (1.0 - beta) * raw * (beta < 1.0 ? 1.0 : -1.0);
      }
      for (std::size_t l = 0; l < m; ++l) g[l] = scale * (qb[l] / s - (l == j ? 1.0 : 0.0));
      return g;
    }
    default:
      throw InvalidInput("composite_gradient: not a scoring family");
  }
}

}  // namespace mcloss
