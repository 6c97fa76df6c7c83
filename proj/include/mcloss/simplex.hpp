#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcloss {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class ConfigurationError : public Error {
 public:
  using Error::Error;
};

class TrainingFailure : public Error {
 public:
  using Error::Error;
};

namespace tol {
inline constexpr double kConstruction = 1e-12;
inline constexpr double kSlack = 1e-9;
inline constexpr double kInfimum = 1e-3;
inline constexpr double kProbSum = 1e-9;
inline constexpr double kClampEps = 1e-12;
}  // namespace tol

using Vec = std::vector<double>;
using CSpan = std::span<const double>;

// A point of the probability simplex. Entries are nonnegative and sum to 1
// within tol::kConstruction.
class ProbVector {
 public:
  ProbVector() = default;

  static ProbVector uniform(std::size_t m);
  static ProbVector vertex(std::size_t m, std::size_t j);
  // Accepts a vector already known to lie on the simplex; validates it.
  static ProbVector from_exact(Vec p);

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  const Vec& vec() const { return p_; }
  CSpan span() const { return {p_.data(), p_.size()}; }
  operator CSpan() const { return span(); }
  auto begin() const { return p_.begin(); }
  auto end() const { return p_.end(); }

 private:
  explicit ProbVector(Vec p) : p_(std::move(p)) {}
  friend ProbVector make_prob(CSpan v, double eps);
  Vec p_;
};

// Clamps entries to [eps, 1] and renormalizes. The input must already sum to
// one within tol::kProbSum and have no entry below -tol::kProbSum.
ProbVector make_prob(CSpan v, double eps = tol::kClampEps);

bool on_simplex(CSpan v, double tolerance = tol::kConstruction);

class Margin {
 public:
  Margin() = default;
  explicit Margin(Vec v);
  std::size_t size() const { return v_.size(); }
  double operator[](std::size_t i) const { return v_[i]; }
  const Vec& vec() const { return v_; }
  operator CSpan() const { return {v_.data(), v_.size()}; }

 private:
  Vec v_;
};

// Square cost matrix with zero diagonal and nonnegative off-diagonal entries.
// c(j, k) is the cost of predicting k when the label is j.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t m, Vec row_major);

  static CostMatrix zero_one(std::size_t m);
  static CostMatrix class_weighted(CSpan c0);

  std::size_t size() const { return m_; }
  double operator()(std::size_t j, std::size_t k) const { return c_[j * m_ + k]; }
  const Vec& row_major() const { return c_; }

  double row_max(std::size_t j) const;
  // (C lambda)_j = sum_k c(j,k) lambda_k
  Vec apply(CSpan lambda) const;
  // (C^T x)_k = sum_j c(j,k) x_j
  Vec apply_transpose(CSpan x) const;
  // Cbar = C_M 1^T - C, with C_M the vector of row maxima.
  Vec cbar_row_major() const;
  Vec cbar_transpose_apply(CSpan x) const;

 private:
  std::size_t m_ = 0;
  Vec c_;
};

// Sum of the two largest absolute entries.
double norm_inf2(CSpan v);
double norm1(CSpan v);
double norm_inf(CSpan v);
double lp_norm(CSpan v, double beta);

std::size_t argmax_lowest(CSpan v);
std::size_t argmin_lowest(CSpan v);

double dot(CSpan a, CSpan b);
// Weighted sum sum_j eta_j z_j with the convention 0 * inf = 0.
double expect(CSpan eta, CSpan z);

std::string format_vec(CSpan v);

}  // namespace mcloss
