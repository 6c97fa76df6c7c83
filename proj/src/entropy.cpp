#include "mcloss/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mcloss {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

double t_bullet(CSpan t) {
  double s = 1.0;
  for (double x : t) s += x;
  return s;
}

Vec append_one(CSpan t) {
  Vec u(t.begin(), t.end());
  u.push_back(1.0);
  return u;
}

void require_dim(CSpan v, std::size_t n, const char* who) {
  if (v.size() != n) throw InvalidInput(std::string(who) + ": wrong dimension");
}

}  // namespace

UnivariateConvex f0_likelihood() {
  return {"likelihood",
          [](double t) { return xlogx(t) - xlogx(1.0 + t); },
          [](double t) { return std::log(t / (1.0 + t)); },
          [](double t) { return 1.0 / (t * (1.0 + t)); },
          0.0};
}

UnivariateConvex f0_exponential() {
  return {"exponential",
          [](double t) {
            const double r = std::sqrt(t) - 1.0;
            return r * r;
          },
          [](double t) { return 1.0 - 1.0 / std::sqrt(t); },
          [](double t) { return 0.5 * std::pow(t, -1.5); },
          1.0};
}

UnivariateConvex f0_calibration_asym() {
  return {"calibration_a",
          [](double t) { return -0.5 * std::log(t); },
          [](double t) { return -0.5 / t; },
          [](double t) { return 0.5 / (t * t); },
          0.0};
}

UnivariateConvex f0_calibration_sym() {
  return {"calibration_s",
          [](double t) { return 0.5 * (xlogx(t) - std::log(t)); },
          [](double t) { return 0.5 * (std::log(t) + 1.0 - 1.0 / t); },
          [](double t) { return 0.5 * (1.0 / t + 1.0 / (t * t)); },
          kInf};
}

UnivariateConvex f0_by_name(const std::string& name) {
  if (name == "likelihood") return f0_likelihood();
  if (name == "exponential") return f0_exponential();
  if (name == "calibration_a" || name == "calibration") return f0_calibration_asym();
  if (name == "calibration_s") return f0_calibration_sym();
  throw InvalidInput("unknown univariate generator: " + name);
}

double perspective(const UnivariateConvex& f0, double a, double b) {
  if (b > 0.0) return b * f0.f(a / b);
  if (a == 0.0) return 0.0;
  return a * f0.recession;
}

EntropySpec entropy_from_dissimilarity(const DissimilaritySpec& f) {
  const std::size_t m = f.dim + 1;
  EntropySpec h;
  h.label = "H[" + f.label + "]";
  h.m = m;
  h.smooth = f.smooth;
  h.eval = [f, m](CSpan eta) {
    require_dim(eta, m, "entropy_from_dissimilarity");
    const double em = eta[m - 1];
    if (em <= 0.0 && f.recession) {
      const double v = f.recession(eta.first(m - 1));
      return v == kInf ? -kInf : -v;
    }
    const double c = em > 0.0 ? em : kBoundaryScale;
    Vec u(eta.begin(), eta.end() - 1);
    for (double& x : u) x /= c;
    const double v = f.eval(u);
    if (v == kInf) return -kInf;
    return -c * v;
  };
  h.supergradient = [f, m](CSpan eta) {
    require_dim(eta, m, "entropy_from_dissimilarity");
    const double em = eta[m - 1];
    const double c = em > 0.0 ? em : kBoundaryScale;
    Vec u(eta.begin(), eta.end() - 1);
    for (double& x : u) x /= c;
    const Vec g = f.subgradient(u);
    Vec out(m);
    double last = -f.eval(u);
    for (std::size_t j = 0; j + 1 < m; ++j) {
      out[j] = -g[j];
      if (u[j] != 0.0) last += u[j] * g[j];
    }
    out[m - 1] = last;
    return out;
  };
  return h;
}

double canonical_loss(const EntropySpec& h, std::size_t j, CSpan q) {
  const Vec g = h.supergradient(q);
  double s = h.eval(q) + g[j];
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] != 0.0) s -= q[i] * g[i];
  }
  return s;
}

double bregman(const EntropySpec& h, CSpan eta, CSpan q) {
  const Vec g = h.supergradient(q);
  const double hq = h.eval(q);
  double qg = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] != 0.0) qg += q[i] * g[i];
  }
  double r = 0.0;
  for (std::size_t j = 0; j < eta.size(); ++j) {
    if (eta[j] != 0.0) r += eta[j] * (hq + g[j] - qg);
  }
  return r - h.eval(eta);
}

DissimilaritySpec dissimilarity_from_entropy(const EntropySpec& h) {
  DissimilaritySpec f;
  f.label = "f[" + h.label + "]";
  f.dim = h.m - 1;
  f.smooth = h.smooth;
  f.eval = [h](CSpan t) {
    require_dim(t, h.m - 1, "dissimilarity_from_entropy");
    const double tb = t_bullet(t);
    Vec eta = append_one(t);
    for (double& x : eta) x /= tb;
    return -tb * h.eval(eta);
  };
  f.recession = [h](CSpan t) {
    double tb = 0.0;
    for (double x : t) tb += x;
    if (tb <= 0.0) return 0.0;
    Vec eta(t.begin(), t.end());
    eta.push_back(0.0);
    for (double& x : eta) x /= tb;
    return -tb * h.eval(eta);
  };
  f.subgradient = [h](CSpan t) {
    require_dim(t, h.m - 1, "dissimilarity_from_entropy");
    const double tb = t_bullet(t);
    Vec eta = append_one(t);
    for (double& x : eta) x /= tb;
    Vec g(h.m - 1);
    for (std::size_t j = 0; j + 1 < h.m; ++j) g[j] = -canonical_loss(h, j, eta);
    return g;
  };
  return f;
}

EntropySpec shannon_entropy(std::size_t m) {
  EntropySpec h;
  h.label = "shannon";
  h.m = m;
  h.eval = [](CSpan eta) {
    double s = 0.0;
    for (double x : eta) s -= xlogx(x);
    return s;
  };
  h.supergradient = [](CSpan eta) {
    Vec g(eta.size());
    for (std::size_t i = 0; i < eta.size(); ++i) g[i] = eta[i] > 0.0 ? -std::log(eta[i]) - 1.0 : kInf;
    return g;
  };
  return h;
}

EntropySpec zero_one_entropy(std::size_t m) {
  EntropySpec h;
  h.label = "zero_one";
  h.m = m;
  h.smooth = false;
  h.eval = [](CSpan eta) { return 1.0 - eta[argmax_lowest(eta)]; };
  h.supergradient = [](CSpan eta) {
    Vec g(eta.size(), 0.0);
    g[argmax_lowest(eta)] = -1.0;
    return g;
  };
  return h;
}

EntropySpec cost_weighted_entropy(const CostMatrix& c) {
  EntropySpec h;
  h.label = "cost_weighted";
  h.m = c.size();
  h.smooth = false;
  h.eval = [c](CSpan eta) {
    const Vec r = c.apply_transpose(eta);
    return *std::min_element(r.begin(), r.end());
  };
  h.supergradient = [c](CSpan eta) {
    const Vec r = c.apply_transpose(eta);
    const std::size_t k = argmin_lowest(r);
    Vec g(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) g[j] = c(j, k);
    return g;
  };
  return h;
}

double lbeta_limit_point(double beta) {
  if (std::abs(beta) < 1e-8) return 0.0;
  if (std::abs(beta - 1.0) < 1e-8) return 1.0;
  if (std::isinf(beta) || beta >= 1e8) return kInf;
  return std::numeric_limits<double>::quiet_NaN();
}

double lbeta_rescale_denominator(std::size_t m, double beta) {
  return std::pow(static_cast<double>(m), 1.0 / beta - 1.0) - 1.0;
}

namespace {

void check_beta(double beta, bool rescaled) {
  if (std::isnan(beta) || beta < 0.0) throw InvalidInput("L_beta: beta must be nonnegative");
  if (!rescaled) {
    if (!std::isnan(lbeta_limit_point(beta))) {
      throw InvalidInput("L_beta: beta in {0, 1, inf} needs the rescaled family");
    }
  }
}

}  // namespace

double entropy_lbeta(CSpan eta, double beta, bool rescaled) {
  check_beta(beta, rescaled);
  const auto m = static_cast<double>(eta.size());
  if (!rescaled) {
    const double n = lp_norm(eta, beta);
    return beta < 1.0 ? n : -n;
  }
  const double lim = lbeta_limit_point(beta);
  if (lim == 0.0) {
    double s = 0.0;
    for (double x : eta) {
      if (x <= 0.0) return 0.0;
      s += std::log(x);
    }
    return m * std::exp(s / m);
  }
  if (lim == 1.0) {
    double s = 0.0;
    for (double x : eta) s -= xlogx(x);
    return s / std::log(m);
  }
  if (lim == kInf) return (1.0 - eta[argmax_lowest(eta)]) / (1.0 - 1.0 / m);
  return (lp_norm(eta, beta) - 1.0) / lbeta_rescale_denominator(eta.size(), beta);
}

EntropySpec lbeta_entropy(std::size_t m, double beta, bool rescaled) {
  check_beta(beta, rescaled);
  EntropySpec h;
  h.label = std::string(rescaled ? "lbeta_rescaled" : "lbeta") + "(" + std::to_string(beta) + ")";
  h.m = m;
  const double lim = rescaled ? lbeta_limit_point(beta) : std::numeric_limits<double>::quiet_NaN();
  h.smooth = !(lim == kInf);
  h.eval = [beta, rescaled](CSpan eta) { return entropy_lbeta(eta, beta, rescaled); };
  h.supergradient = [beta, rescaled, lim, m](CSpan eta) {
    const auto md = static_cast<double>(m);
    Vec g(m);
    if (lim == 0.0) {
      const double hv = entropy_lbeta(eta, beta, true);
      for (std::size_t i = 0; i < m; ++i) g[i] = eta[i] > 0.0 ? hv / (md * eta[i]) : kInf;
      return g;
    }
    if (lim == 1.0) {
      for (std::size_t i = 0; i < m; ++i) {
        g[i] = eta[i] > 0.0 ? (-std::log(eta[i]) - 1.0) / std::log(md) : kInf;
      }
      return g;
    }
    if (lim == kInf) {
      std::fill(g.begin(), g.end(), 0.0);
      g[argmax_lowest(eta)] = -1.0 / (1.0 - 1.0 / md);
      return g;
    }
    const double n = lp_norm(eta, beta);
    const double scale = rescaled ? 1.0 / lbeta_rescale_denominator(m, beta) : (beta < 1.0 ? 1.0 : -1.0);
    for (std::size_t i = 0; i < m; ++i) {
      const double d = eta[i] > 0.0 ? std::pow(eta[i] / n, beta - 1.0) : (beta < 1.0 ? kInf : 0.0);
      g[i] = scale * d;
    }
    return g;
  };
  return h;
}

DissimilaritySpec shannon_dissimilarity(std::size_t m) {
  DissimilaritySpec f;
  f.label = "shannon";
  f.dim = m - 1;
  f.eval = [](CSpan t) {
    const double tb = t_bullet(t);
    double s = -xlogx(tb);
    for (double x : t) s += xlogx(x);
    return s;
  };
  f.subgradient = [](CSpan t) {
    const double tb = t_bullet(t);
    Vec g(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) g[j] = t[j] > 0.0 ? std::log(t[j] / tb) : -kInf;
    return g;
  };
  f.recession = [](CSpan t) {
    double tot = 0.0, s = 0.0;
    for (double x : t) {
      tot += x;
      s += xlogx(x);
    }
    return s - xlogx(tot);
  };
  return f;
}

DissimilaritySpec zero_one_dissimilarity(std::size_t m) {
  DissimilaritySpec f;
  f.label = "zero_one";
  f.dim = m - 1;
  f.smooth = false;
  f.eval = [](CSpan t) {
    double mx = 1.0;
    for (double x : t) mx = std::max(mx, x);
    return mx - t_bullet(t);
  };
  f.subgradient = [](CSpan t) {
    Vec g(t.size(), -1.0);
    double mx = 1.0;
    std::size_t k = t.size();
    for (std::size_t j = 0; j < t.size(); ++j) {
      if (t[j] > mx) {
        mx = t[j];
        k = j;
      }
    }
    if (k < t.size()) g[k] = 0.0;
    return g;
  };
  f.recession = [](CSpan t) {
    double mx = 0.0, tot = 0.0;
    for (double x : t) {
      mx = std::max(mx, x);
      tot += x;
    }
    return mx - tot;
  };
  return f;
}

DissimilaritySpec cost_weighted_dissimilarity(const CostMatrix& c) {
  DissimilaritySpec f;
  f.label = "cost_weighted";
  f.dim = c.size() - 1;
  f.smooth = false;
  auto column_values = [c](CSpan t) { return c.apply_transpose(append_one(t)); };
  f.eval = [column_values](CSpan t) {
    const Vec r = column_values(t);
    return -*std::min_element(r.begin(), r.end());
  };
  f.subgradient = [c, column_values](CSpan t) {
    const std::size_t k = argmin_lowest(column_values(t));
    Vec g(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) g[j] = -c(j, k);
    return g;
  };
  f.recession = [c](CSpan t) {
    Vec u(t.begin(), t.end());
    u.push_back(0.0);
    const Vec r = c.apply_transpose(u);
    return -*std::min_element(r.begin(), r.end());
  };
  return f;
}

DissimilaritySpec lbeta_dissimilarity(std::size_t m, double beta, bool rescaled) {
  check_beta(beta, rescaled);
  if (rescaled && !std::isnan(lbeta_limit_point(beta))) {
    return dissimilarity_from_entropy(lbeta_entropy(m, beta, true));
  }
  DissimilaritySpec f;
  f.label = std::string(rescaled ? "lbeta_rescaled" : "lbeta") + "(" + std::to_string(beta) + ")";
  f.dim = m - 1;
  const double d = rescaled ? lbeta_rescale_denominator(m, beta) : 1.0;
  const double sign = beta < 1.0 ? -1.0 : 1.0;
  f.eval = [beta, rescaled, d, sign](CSpan t) {
    const double n = lp_norm(append_one(t), beta);
    return rescaled ? -(n - t_bullet(t)) / d : sign * n;
  };
  f.subgradient = [beta, rescaled, d, sign](CSpan t) {
    const double n = lp_norm(append_one(t), beta);
    Vec g(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) {
      const double r = t[j] > 0.0 ? std::pow(t[j] / n, beta - 1.0) : (beta < 1.0 ? kInf : 0.0);
      g[j] = rescaled ? -(r - 1.0) / d : sign * r;
    }
    return g;
  };
  f.recession = [beta, rescaled, d, sign](CSpan t) {
    double tot = 0.0;
    for (double x : t) tot += x;
    const double n = tot > 0.0 ? lp_norm(t, beta) : 0.0;
    return rescaled ? -(n - tot) / d : sign * n;
  };
  return f;
}

DissimilaritySpec separable_dissimilarity(const UnivariateConvex& f0, std::size_t m) {
  DissimilaritySpec f;
  f.label = "separable(" + f0.label + ")";
  f.dim = m - 1;
  f.eval = [f0](CSpan t) {
    double s = 0.0;
    for (double x : t) s += f0.f(x);
    return s;
  };
  f.subgradient = [f0](CSpan t) {
    Vec g(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) g[j] = f0.d1(t[j]);
    return g;
  };
  f.recession = [f0](CSpan t) {
    double s = 0.0;
    for (double x : t) s += perspective(f0, x, 0.0);
    return s;
  };
  return f;
}

DissimilaritySpec pairwise_symmetric_dissimilarity(const UnivariateConvex& f0, std::size_t m) {
  DissimilaritySpec f;
  f.label = "pairwise_symmetric(" + f0.label + ")";
  f.dim = m - 1;
  f.eval = [f0](CSpan t) {
    const Vec u = append_one(t);
    double s = 0.0;
    for (std::size_t l = 0; l < u.size(); ++l) {
      for (std::size_t k = 0; k < u.size(); ++k) {
        if (k != l) s += perspective(f0, u[k], u[l]);
      }
    }
    return s;
  };
  f.subgradient = [f0](CSpan t) {
    const Vec u = append_one(t);
    Vec g(t.size(), 0.0);
    for (std::size_t i = 0; i < t.size(); ++i) {
      for (std::size_t k = 0; k < u.size(); ++k) {
        if (k == i) continue;
        const double r = u[k] / u[i];
        g[i] += f0.f(r) - r * f0.d1(r) + f0.d1(u[i] / u[k]);
      }
    }
    return g;
  };
  f.recession = [f0](CSpan t) {
    Vec u(t.begin(), t.end());
    u.push_back(0.0);
    double s = 0.0;
    for (std::size_t l = 0; l < u.size(); ++l) {
      for (std::size_t k = 0; k < u.size(); ++k) {
        if (k != l) s += perspective(f0, u[k], u[l]);
      }
    }
    return s;
  };
  return f;
}

double loss_from_f(std::size_t j, CSpan s, double conjugate_value) {
  if (j < s.size()) return -s[j];
  if (j == s.size()) return conjugate_value;
  throw InvalidInput("loss_from_f: label out of range");
}

Loss make_loss_f(const DissimilaritySpec& f, std::function<double(CSpan)> conjugate) {
  Loss l;
  l.name = "L_f[" + f.label + "]";
  l.m = f.dim + 1;
  l.action_dim = f.dim;
  l.value = [conjugate = std::move(conjugate)](std::size_t j, CSpan s) {
    return j < s.size() ? -s[j] : conjugate(s);
  };
  return l;
}

double loss_from_f_ratio(const DissimilaritySpec& f, std::size_t j, CSpan u) {
  require_dim(u, f.dim, "loss_from_f_ratio");
  const Vec g = f.subgradient(u);
  if (j < f.dim) return -g[j];
  if (j != f.dim) throw InvalidInput("loss_from_f_ratio: label out of range");
  double s = -f.eval(u);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] != 0.0) s += u[i] * g[i];
  }
  return s;
}

Loss make_loss_f_ratio(const DissimilaritySpec& f) {
  Loss l;
  l.name = "L_f2[" + f.label + "]";
  l.m = f.dim + 1;
  l.action_dim = f.dim;
  l.value = [f](std::size_t j, CSpan u) { return loss_from_f_ratio(f, j, u); };
  return l;
}

double loss_from_f_simplex(const DissimilaritySpec& f, std::size_t j, CSpan q) {
  require_dim(q, f.dim + 1, "loss_from_f_simplex");
  const double qm = q[f.dim];
  const double c = qm > 0.0 ? qm : kBoundaryScale;
  Vec u(q.begin(), q.end() - 1);
  for (double& x : u) x /= c;
  return loss_from_f_ratio(f, j, u);
}

Loss make_loss_f_simplex(const DissimilaritySpec& f) {
  Loss l;
  l.name = "L_f3[" + f.label + "]";
  l.m = f.dim + 1;
  l.action_dim = f.dim + 1;
  l.value = [f](std::size_t j, CSpan q) { return loss_from_f_simplex(f, j, q); };
  return l;
}

double loss_from_entropy_duchi(const EntropySpec& h, std::size_t j, CSpan gamma,
                               const SimplexSearch& opts) {
  require_dim(gamma, h.m, "loss_from_entropy_duchi");
  const Optimum sup = maximize_on_simplex(
      [&](CSpan eta) { return dot(gamma, eta) + h.eval(eta); }, h.m, opts);
  return -gamma[j] + sup.value;
}

Loss make_loss_duchi(const EntropySpec& h, const SimplexSearch& opts) {
  Loss l;
  l.name = "L_duchi[" + h.label + "]";
  l.m = h.m;
  l.action_dim = h.m;
  l.value = [h, opts](std::size_t j, CSpan gamma) { return loss_from_entropy_duchi(h, j, gamma, opts); };
  return l;
}

}  // namespace mcloss
