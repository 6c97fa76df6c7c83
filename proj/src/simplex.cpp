#include "mcloss/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mcloss {

ProbVector ProbVector::uniform(std::size_t m) {
  if (m == 0) throw InvalidInput("uniform: empty simplex");
  return ProbVector(Vec(m, 1.0 / static_cast<double>(m)));
}

ProbVector ProbVector::vertex(std::size_t m, std::size_t j) {
  if (j >= m) throw InvalidInput("vertex: index out of range");
  Vec p(m, 0.0);
  p[j] = 1.0;
  return ProbVector(std::move(p));
}

ProbVector ProbVector::from_exact(Vec p) {
  if (!on_simplex(p)) throw InvalidInput("from_exact: not on the simplex: " + format_vec(p));
  return ProbVector(std::move(p));
}

bool on_simplex(CSpan v, double tolerance) {
  if (v.empty()) return false;
  double s = 0.0;
  for (double x : v) {
    if (!std::isfinite(x) || x < -tolerance) return false;
    s += x;
  }
  return std::abs(s - 1.0) <= tolerance * static_cast<double>(v.size());
}

ProbVector make_prob(CSpan v, double eps) {
  if (v.empty()) throw InvalidInput("make_prob: empty vector");
  if (!(eps >= 0.0 && eps < 1.0)) throw InvalidInput("make_prob: eps must lie in [0,1)");
  double s = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) throw InvalidInput("make_prob: non-finite entry");
    if (x < -tol::kProbSum) throw InvalidInput("make_prob: negative entry " + format_vec(v));
    s += x;
  }
  if (std::abs(s - 1.0) > tol::kProbSum) {
    throw InvalidInput("make_prob: entries sum to " + std::to_string(s) + ", not 1");
  }
  Vec p(v.begin(), v.end());
  double total = 0.0;
  for (double& x : p) {
    x = std::clamp(x, eps, 1.0);
    total += x;
  }
  for (double& x : p) x /= total;
  return ProbVector(std::move(p));
}

Margin::Margin(Vec v) : v_(std::move(v)) {
  for (double x : v_) {
    if (!std::isfinite(x)) throw InvalidInput("Margin: non-finite entry");
  }
}

CostMatrix::CostMatrix(std::size_t m, Vec row_major) : m_(m), c_(std::move(row_major)) {
  if (m < 2) throw InvalidInput("CostMatrix: need at least two classes");
  if (c_.size() != m * m) throw InvalidInput("CostMatrix: expected m*m entries");
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < m; ++k) {
      double c = (*this)(j, k);
      if (!std::isfinite(c)) throw InvalidInput("CostMatrix: non-finite entry");
      if (j == k && c != 0.0) throw InvalidInput("CostMatrix: diagonal must be zero");
      if (j != k && c < 0.0) throw InvalidInput("CostMatrix: negative cost");
    }
  }
}

CostMatrix CostMatrix::zero_one(std::size_t m) {
  Vec c(m * m, 1.0);
  for (std::size_t j = 0; j < m; ++j) c[j * m + j] = 0.0;
  return CostMatrix(m, std::move(c));
}

CostMatrix CostMatrix::class_weighted(CSpan c0) {
  const std::size_t m = c0.size();
  Vec c(m * m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < m; ++k) c[j * m + k] = j == k ? 0.0 : c0[j];
  }
  return CostMatrix(m, std::move(c));
}

double CostMatrix::row_max(std::size_t j) const {
  double r = 0.0;
  for (std::size_t k = 0; k < m_; ++k) r = std::max(r, (*this)(j, k));
  return r;
}

Vec CostMatrix::apply(CSpan lambda) const {
  Vec out(m_, 0.0);
  for (std::size_t j = 0; j < m_; ++j) {
    for (std::size_t k = 0; k < m_; ++k) out[j] += (*this)(j, k) * lambda[k];
  }
  return out;
}

Vec CostMatrix::apply_transpose(CSpan x) const {
  Vec out(m_, 0.0);
  for (std::size_t j = 0; j < m_; ++j) {
    for (std::size_t k = 0; k < m_; ++k) out[k] += (*this)(j, k) * x[j];
  }
  return out;
}

Vec CostMatrix::cbar_row_major() const {
  Vec out(m_ * m_);
  for (std::size_t j = 0; j < m_; ++j) {
    const double cm = row_max(j);
    for (std::size_t k = 0; k < m_; ++k) out[j * m_ + k] = cm - (*this)(j, k);
  }
  return out;
}

Vec CostMatrix::cbar_transpose_apply(CSpan x) const {
  Vec out(m_, 0.0);
  for (std::size_t j = 0; j < m_; ++j) {
    const double cm = row_max(j);
    for (std::size_t k = 0; k < m_; ++k) out[k] += (cm - (*this)(j, k)) * x[j];
  }
  return out;
}

double norm_inf2(CSpan v) {
  if (v.empty()) return 0.0;
  double a = 0.0, b = 0.0;
  for (double x : v) {
    double y = std::abs(x);
    if (y > a) {
      b = a;
      a = y;
    } else if (y > b) {
      b = y;
    }
  }
  return v.size() == 1 ? a : a + b;
}

double norm1(CSpan v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

double norm_inf(CSpan v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

double lp_norm(CSpan v, double beta) {
  if (std::isinf(beta)) return norm_inf(v);
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x), beta);
  return std::pow(s, 1.0 / beta);
}

std::size_t argmax_lowest(CSpan v) {
  if (v.empty()) throw InvalidInput("argmax_lowest: empty vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

std::size_t argmin_lowest(CSpan v) {
  if (v.empty()) throw InvalidInput("argmin_lowest: empty vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < v[best]) best = i;
  }
  return best;
}

double dot(CSpan a, CSpan b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double expect(CSpan eta, CSpan z) {
  double s = 0.0;
  for (std::size_t i = 0; i < eta.size(); ++i) {
    if (eta[i] == 0.0) continue;
    s += eta[i] * z[i];
  }
  return s;
}

std::string format_vec(CSpan v) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ')';
  return os.str();
}

}  // namespace mcloss
