#include "mcloss/hinge.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mcloss {

namespace {

double pos(double x) { return x > 0.0 ? x : 0.0; }

void require_label(std::size_t j, std::size_t m) {
  if (j >= m) throw InvalidInput("hinge: label out of range");
}

double sum_pos_except(CSpan tau, std::size_t skip) {
  double s = 0.0;
  for (std::size_t k = 0; k < tau.size(); ++k) {
    if (k != skip) s += pos(tau[k]);
  }
  return s;
}

std::vector<std::size_t> descending_order(CSpan v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  return idx;
}

// Active running-average term of S^(j); `others` lists the remaining
// components in descending order.
struct Zo4Active {
  double s = 0.0;
  std::size_t k = 0;
  bool positive = false;
  std::vector<std::size_t> others;
};

Zo4Active zo4_active(std::size_t j, CSpan tt) {
  const std::size_t m = tt.size();
  Zo4Active a;
  for (std::size_t i : descending_order(tt)) {
    if (i != j) a.others.push_back(i);
  }
  double top = 0.0;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    if (k > 0) top += tt[a.others[k - 1]];
    const double term = (tt[j] + top - 1.0) / static_cast<double>(k + 1);
    if (term > a.s) {
      a.s = term;
      a.k = k;
      a.positive = true;
    }
  }
  return a;
}

struct DkrActive {
  double s = 0.0;
  std::size_t k = 0;
  bool positive = false;
  std::vector<std::size_t> order;
};

// max over k in [1, kmax] of (P[k] - 1)/k, with an optional floor of 0.
DkrActive dkr_active(CSpan v, std::size_t kmax, bool floor_zero) {
  DkrActive a;
  a.order = descending_order(v);
  a.s = floor_zero ? 0.0 : -INFINITY;
  double p = 0.0;
  for (std::size_t k = 1; k <= kmax; ++k) {
    p += v[a.order[k - 1]];
    const double term = (p - 1.0) / static_cast<double>(k);
    if (term > a.s) {
      a.s = term;
      a.k = k;
      a.positive = true;
    }
  }
  return a;
}

Vec tilde_to_tau(const Vec& g_tilde) {
  const std::size_t m = g_tilde.size();
  Vec g(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i) g[i] = g_tilde[i] - g_tilde[m - 1];
  return g;
}

}  // namespace

Vec predict_dag(CSpan tau) {
  Vec out(tau.begin(), tau.end());
  double s = 0.0;
  for (double x : tau) s += pos(x);
  out.push_back(1.0 - s);
  return out;
}

Vec predict_tilde(CSpan tau) {
  Vec out(tau.begin(), tau.end());
  double s = 0.0;
  for (double x : tau) s += x;
  out.push_back(1.0 - s);
  return out;
}

Vec sigma_L(const Loss& loss, CSpan action) {
  Vec z = loss.vector(action);
  for (double& x : z) x = -x;
  return z;
}

double hinge2(std::size_t j, double tau) {
  require_label(j, 2);
  return j == 0 ? pos(1.0 - tau) : pos(tau);
}

double cw2(const CostMatrix& c, std::size_t j, CSpan lambda) {
  require_label(j, c.size());
  if (lambda.size() != c.size()) throw InvalidInput("cw2: wrong dimension");
  double s = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) s += c(j, k) * lambda[k];
  return s;
}

double cw3(const CostMatrix& c, std::size_t j, CSpan tau) {
  const std::size_t m = c.size();
  require_label(j, m);
  if (tau.size() + 1 != m) throw InvalidInput("cw3: wrong dimension");
  const std::size_t last = m - 1;
  double s = 0.0;
  for (std::size_t k = 0; k < last; ++k) {
    if (k != j) s += c(j, k) * pos(tau[k]);
  }
  if (j < last) s += c(j, last) * pos(1.0 - tau[j] - sum_pos_except(tau, j));
  return s;
}

double zo3(std::size_t j, CSpan tau) {
  const std::size_t m = tau.size() + 1;
  require_label(j, m);
  if (j + 1 == m) return sum_pos_except(tau, m);
  return std::max(1.0 - tau[j], sum_pos_except(tau, j));
}

double llw2(std::size_t j, CSpan tau) {
  const std::size_t m = tau.size() + 1;
  require_label(j, m);
  if (j + 1 == m) return sum_pos_except(tau, m);
  double total = 0.0;
  for (double x : tau) total += x;
  return sum_pos_except(tau, j) + pos(1.0 - total);
}

double llw(std::size_t j, CSpan gamma) {
  require_label(j, gamma.size());
  double total = 0.0;
  for (double x : gamma) total += x;
  if (std::abs(total) > 1e-9) throw InvalidInput("llw: gamma must sum to zero");
  double s = 0.0;
  for (std::size_t k = 0; k < gamma.size(); ++k) {
    if (k != j) s += pos(1.0 + gamma[k]);
  }
  return s;
}

double zo4(std::size_t j, CSpan tau) {
  const Vec tt = predict_tilde(tau);
  require_label(j, tt.size());
  return 1.0 - tt[j] + zo4_active(j, tt).s;
}

Vec zo4_all_reference(CSpan tau) {
  const Vec tt = predict_tilde(tau);
  Vec out(tt.size());
  for (std::size_t j = 0; j < tt.size(); ++j) out[j] = 1.0 - tt[j] + zo4_active(j, tt).s;
  return out;
}

Vec zo4_all(CSpan tau) {
  const Vec tt = predict_tilde(tau);
  const std::size_t m = tt.size();
  const std::vector<std::size_t> order = descending_order(tt);
  Vec v(m), prefix(m + 1, 0.0);
  for (std::size_t p = 0; p < m; ++p) {
    v[p] = tt[order[p]];
    prefix[p + 1] = prefix[p] + v[p];
  }
  // Terms with k > p do not involve the excluded entry: (P[k+1]-1)/(k+1).
  Vec suffix(m + 1, -INFINITY);
  for (std::size_t k = m - 1; k-- > 0;) {
    suffix[k] = std::max(suffix[k + 1], (prefix[k + 1] - 1.0) / static_cast<double>(k + 1));
  }
  // Terms with k <= p are lines in x = v[p]: slope 1/(k+1), intercept (P[k]-1)/(k+1).
  struct Line {
    double a, b;
    double at(double x) const { return a * x + b; }
  };
  std::vector<Line> hull;
  auto redundant = [](const Line& l1, const Line& l2, const Line& l3) {
    return (l3.b - l2.b) * (l1.a - l2.a) >= (l2.b - l1.b) * (l2.a - l3.a);
  };
  Vec out(m);
  for (std::size_t p = 0; p < m; ++p) {
    if (p + 1 < m) {
      const double w = 1.0 / static_cast<double>(p + 1);
      Line ln{w, (prefix[p] - 1.0) * w};
      while (hull.size() >= 2 && redundant(hull[hull.size() - 2], hull.back(), ln)) hull.pop_back();
      hull.push_back(ln);
    }
    const double x = v[p];
    std::size_t lo = 0, hi = hull.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (hull[mid].at(x) >= hull[mid + 1].at(x)) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    const double s = std::max({0.0, hull[lo].at(x), suffix[p + 1]});
    out[order[p]] = 1.0 - x + s;
  }
  return out;
}

double dkr2(std::size_t j, CSpan tau) {
  const Vec tt = predict_tilde(tau);
  require_label(j, tt.size());
  return 1.0 - tt[j] + dkr_active(tt, tt.size() - 1, true).s;
}

double dkr(std::size_t j, CSpan gamma) {
  require_label(j, gamma.size());
  return 1.0 - gamma[j] + dkr_active(gamma, gamma.size(), false).s;
}

Vec hinge_values(const LossFamily& family, CSpan tau) {
  const std::size_t m = family.m;
  if (tau.size() + 1 != m) throw InvalidInput("hinge_values: wrong margin dimension");
  Vec z(m);
  switch (family.kind) {
    case FamilyKind::Hinge2:
      for (std::size_t j = 0; j < 2; ++j) z[j] = hinge2(j, tau[0]);
      return z;
    case FamilyKind::CW3: {
      const CostMatrix c = family.cost ? *family.cost : CostMatrix::zero_one(m);
      for (std::size_t j = 0; j < m; ++j) z[j] = cw3(c, j, tau);
      return z;
    }
    case FamilyKind::ZO3:
      for (std::size_t j = 0; j < m; ++j) z[j] = zo3(j, tau);
      return z;
    case FamilyKind::LLW2:
      for (std::size_t j = 0; j < m; ++j) z[j] = llw2(j, tau);
      return z;
    case FamilyKind::ZO4:
      return zo4_all(tau);
    case FamilyKind::DKR2:
      for (std::size_t j = 0; j < m; ++j) z[j] = dkr2(j, tau);
      return z;
    default:
      throw InvalidInput("hinge_values: not a margin family with m-1 dimensional actions");
  }
}

Loss make_hinge_loss(const LossFamily& family) {
  Loss l;
  l.name = family_name(family.kind);
  l.m = family.m;
  if (family.kind == FamilyKind::CW2) {
    const CostMatrix c = family.cost ? *family.cost : CostMatrix::zero_one(family.m);
    l.action_dim = family.m;
    l.value = [c](std::size_t j, CSpan lambda) { return cw2(c, j, lambda); };
    return l;
  }
  l.action_dim = family.m - 1;
  switch (family.kind) {
    case FamilyKind::Hinge2:
      l.value = [](std::size_t j, CSpan t) { return hinge2(j, t[0]); };
      break;
    case FamilyKind::CW3: {
      const CostMatrix c = family.cost ? *family.cost : CostMatrix::zero_one(family.m);
      l.value = [c](std::size_t j, CSpan t) { return cw3(c, j, t); };
      break;
    }
    case FamilyKind::ZO3:
      l.value = [](std::size_t j, CSpan t) { return zo3(j, t); };
      break;
    case FamilyKind::LLW2:
      l.value = [](std::size_t j, CSpan t) { return llw2(j, t); };
      break;
    case FamilyKind::ZO4:
      l.value = [](std::size_t j, CSpan t) { return zo4(j, t); };
      break;
    case FamilyKind::DKR2:
      l.value = [](std::size_t j, CSpan t) { return dkr2(j, t); };
      break;
    default:
      throw InvalidInput("make_hinge_loss: not a margin family");
  }
  return l;
}

Loss make_zero_one_loss(std::size_t m) {
  Loss l;
  l.name = "zero_one";
  l.m = m;
  l.action_dim = m;
  l.value = [](std::size_t j, CSpan score) { return j == argmax_lowest(score) ? 0.0 : 1.0; };
  return l;
}

Loss make_cost_weighted_loss(const CostMatrix& c) {
  Loss l;
  l.name = "cost_weighted";
  l.m = c.size();
  l.action_dim = c.size();
  l.value = [c](std::size_t j, CSpan score) { return c(j, argmax_lowest(score)); };
  return l;
}

Vec hinge_subgradient(const LossFamily& family, std::size_t j, CSpan tau) {
  const std::size_t m = family.m;
  require_label(j, m);
  if (tau.size() + 1 != m) throw InvalidInput("hinge_subgradient: wrong margin dimension");
  const std::size_t last = m - 1;
  Vec g(m - 1, 0.0);
  auto pos_indicator = [&](std::size_t skip, double weight_scale, const CostMatrix* c) {
    for (std::size_t k = 0; k < last; ++k) {
      if (k != skip && tau[k] > 0.0) g[k] += c ? (*c)(j, k) * weight_scale : weight_scale;
    }
  };
  switch (family.kind) {
    case FamilyKind::Hinge2:
      g[0] = j == 0 ? (tau[0] < 1.0 ? -1.0 : 0.0) : (tau[0] > 0.0 ? 1.0 : 0.0);
      return g;
    case FamilyKind::CW3: {
      const CostMatrix c = family.cost ? *family.cost : CostMatrix::zero_one(m);
      pos_indicator(j, 1.0, &c);
      if (j < last && 1.0 - tau[j] - sum_pos_except(tau, j) > 0.0) {
        g[j] -= c(j, last);
        for (std::size_t k = 0; k < last; ++k) {
          if (k != j && tau[k] > 0.0) g[k] -= c(j, last);
        }
      }
      return g;
    }
    case FamilyKind::ZO3:
      if (j < last && 1.0 - tau[j] >= sum_pos_except(tau, j)) {
        g[j] = -1.0;
      } else {
        pos_indicator(j, 1.0, nullptr);
      }
      return g;
    case FamilyKind::LLW2: {
      pos_indicator(j, 1.0, nullptr);
      if (j < last) {
        double total = 0.0;
        for (double x : tau) total += x;
        if (total < 1.0) {
          for (double& x : g) x -= 1.0;
        }
      }
      return g;
    }
    case FamilyKind::ZO4: {
      const Vec tt = predict_tilde(tau);
      Vec gt(m, 0.0);
      gt[j] = -1.0;
      const Zo4Active a = zo4_active(j, tt);
      if (a.positive) {
        const double w = 1.0 / static_cast<double>(a.k + 1);
        gt[j] += w;
        for (std::size_t i = 0; i < a.k; ++i) gt[a.others[i]] += w;
      }
      return tilde_to_tau(gt);
    }
    case FamilyKind::DKR2: {
      const Vec tt = predict_tilde(tau);
      Vec gt(m, 0.0);
      gt[j] = -1.0;
      const DkrActive a = dkr_active(tt, m - 1, true);
      if (a.positive) {
        const double w = 1.0 / static_cast<double>(a.k);
        for (std::size_t i = 0; i < a.k; ++i) gt[a.order[i]] += w;
      }
      return tilde_to_tau(gt);
    }
    default:
      throw InvalidInput("hinge_subgradient: not a margin family");
  }
}

}  // namespace mcloss
