#pragma once

#include <functional>
#include <string>

#include "mcloss/loss.hpp"
#include "mcloss/simplex.hpp"

namespace mcloss {

// Concave function on the simplex together with a supergradient oracle.
struct EntropySpec {
  std::string label;
  std::size_t m = 0;
  std::function<double(CSpan)> eval;
  std::function<Vec(CSpan)> supergradient;
  bool smooth = true;

  double operator()(CSpan eta) const {
    if (m != 0 && eta.size() != m) throw InvalidInput(label + ": expected " + std::to_string(m) + " entries");
    return eval(eta);
  }
};

// Convex function on the nonnegative orthant of R^{m-1} with a subgradient
// oracle. Its perspective generates an entropy on the simplex in R^m.
struct DissimilaritySpec {
  std::string label;
  std::size_t dim = 0;
  std::function<double(CSpan)> eval;
  std::function<Vec(CSpan)> subgradient;
  bool smooth = true;
  // lim_{c -> 0} c f(t / c) when known in closed form; the perspective falls
  // back to a small c on the face eta_m = 0 otherwise.
  std::function<double(CSpan)> recession;

  double operator()(CSpan t) const { return eval(t); }
  std::size_t classes() const { return dim + 1; }
};

// Convex generator on (0, inf). recession = lim f(t)/t as t grows.
struct UnivariateConvex {
  std::string label;
  std::function<double(double)> f;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
  double recession = 0.0;
};

UnivariateConvex f0_likelihood();
UnivariateConvex f0_exponential();
UnivariateConvex f0_calibration_asym();
UnivariateConvex f0_calibration_sym();
UnivariateConvex f0_by_name(const std::string& name);

// b * f0(a / b) extended to b = 0 through the recession slope.
double perspective(const UnivariateConvex& f0, double a, double b);

inline constexpr double kBoundaryScale = 1e-10;

EntropySpec entropy_from_dissimilarity(const DissimilaritySpec& f);
DissimilaritySpec dissimilarity_from_entropy(const EntropySpec& h);

// H(q) + (e_j - q)^T dH(q)
double canonical_loss(const EntropySpec& h, std::size_t j, CSpan q);
double bregman(const EntropySpec& h, CSpan eta, CSpan q);

EntropySpec shannon_entropy(std::size_t m);
EntropySpec zero_one_entropy(std::size_t m);
EntropySpec cost_weighted_entropy(const CostMatrix& c);
EntropySpec lbeta_entropy(std::size_t m, double beta, bool rescaled);
double entropy_lbeta(CSpan eta, double beta, bool rescaled);
// m^{1/beta - 1} - 1
double lbeta_rescale_denominator(std::size_t m, double beta);
// Which closed-form limit a rescaled beta dispatches to: 0, 1, +inf, or NaN
// for the generic formula.
double lbeta_limit_point(double beta);

DissimilaritySpec shannon_dissimilarity(std::size_t m);
DissimilaritySpec zero_one_dissimilarity(std::size_t m);
DissimilaritySpec cost_weighted_dissimilarity(const CostMatrix& c);
DissimilaritySpec lbeta_dissimilarity(std::size_t m, double beta, bool rescaled);
// f(t) = sum_k f0(t_k)
DissimilaritySpec separable_dissimilarity(const UnivariateConvex& f0, std::size_t m);
// f(u) = sum_{l != k} u_l f0(u_k / u_l) with u_m = 1
DissimilaritySpec pairwise_symmetric_dissimilarity(const UnivariateConvex& f0, std::size_t m);

struct ConjugateOptions {
  double box = 8.0;
  std::size_t points_per_axis = 33;
  std::size_t zoom_rounds = 2;
  double zoom_factor = 8.0;
  std::size_t max_doublings = 2;
  bool polish = true;
};

// sup_{t >= 0} s^T t - f(t), searched on a box that doubles while the
// maximizer sits on its upper face; +inf when it never leaves that face.
double conjugate_numeric(const DissimilaritySpec& f, CSpan s, const ConjugateOptions& opts = {});
// Conjugate of the cost-weighted dissimilarity as the linear program
// min (C lambda)_m over lambda in the simplex with (C lambda)_j <= -s_j.
double conjugate_cw(const CostMatrix& c, CSpan s);

// Loss built from an f and its conjugate: L(j, s) = -s_j for j < m and
// L(m, s) = f*(s).
double loss_from_f(std::size_t j, CSpan s, double conjugate_value);
Loss make_loss_f(const DissimilaritySpec& f, std::function<double(CSpan)> conjugate);
// Ratio parametrization: -df_j(u) for j < m, u^T df(u) - f(u) for j = m.
double loss_from_f_ratio(const DissimilaritySpec& f, std::size_t j, CSpan u);
Loss make_loss_f_ratio(const DissimilaritySpec& f);
// Simplex parametrization through u = q_{1:m-1} / q_m.
double loss_from_f_simplex(const DissimilaritySpec& f, std::size_t j, CSpan q);
Loss make_loss_f_simplex(const DissimilaritySpec& f);

// -gamma_j + sup_eta (gamma^T eta + H(eta))
double loss_from_entropy_duchi(const EntropySpec& h, std::size_t j, CSpan gamma,
                               const SimplexSearch& opts = {});
Loss make_loss_duchi(const EntropySpec& h, const SimplexSearch& opts = {});

}  // namespace mcloss
