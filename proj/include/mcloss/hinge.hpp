#pragma once

#include "mcloss/family.hpp"
#include "mcloss/loss.hpp"

namespace mcloss {

// (tau, 1 - sum_k (tau_k)_+)
Vec predict_dag(CSpan tau);
// (tau, 1 - sum_k tau_k)
Vec predict_tilde(CSpan tau);
// (-L(1, a), ..., -L(m, a))
Vec sigma_L(const Loss& loss, CSpan action);

double hinge2(std::size_t j, double tau);
double cw2(const CostMatrix& c, std::size_t j, CSpan lambda);
double cw3(const CostMatrix& c, std::size_t j, CSpan tau);
double zo3(std::size_t j, CSpan tau);
double llw2(std::size_t j, CSpan tau);
// Requires sum(gamma) = 0 within 1e-9.
double llw(std::size_t j, CSpan gamma);
double zo4(std::size_t j, CSpan tau);
double dkr2(std::size_t j, CSpan tau);
double dkr(std::size_t j, CSpan gamma);

// All m values of zo4 from one descending sort, prefix sums, a suffix
// maximum and an upper envelope of lines.
Vec zo4_all(CSpan tau);
// One sort per label; the serial reference for zo4_all.
Vec zo4_all_reference(CSpan tau);

Vec hinge_values(const LossFamily& family, CSpan tau);
Loss make_hinge_loss(const LossFamily& family);
Loss make_zero_one_loss(std::size_t m);
Loss make_cost_weighted_loss(const CostMatrix& c);

// A subgradient of the loss at tau with respect to tau.
Vec hinge_subgradient(const LossFamily& family, std::size_t j, CSpan tau);

}  // namespace mcloss
