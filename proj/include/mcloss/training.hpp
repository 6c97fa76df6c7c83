#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcloss/family.hpp"
#include "mcloss/regret.hpp"
#include "mcloss/scoring.hpp"

namespace mcloss {

struct Dataset {
  std::size_t m = 0;
  std::size_t d = 0;
  std::vector<Vec> x;
  std::vector<std::size_t> y;
  std::uint64_t seed = 0;
  std::vector<Vec> means;
  double noise = 1.0;
  double separation = 0.0;

  std::size_t size() const { return y.size(); }
};

// Equal-prior spherical Gaussian classes with unit noise. The class means
// are the vertices of a regular simplex whose pairwise distance equals
// separation, embedded in R^d (d >= m - 1; otherwise projected onto the
// first d coordinates).
Dataset synth_gaussians(std::size_t m, std::size_t d, std::size_t n, double separation, std::uint64_t seed);

// Class posterior of the generative model at x.
Vec gaussian_posterior(const Dataset& data, CSpan x);
// Error rate of the nearest-mean rule, which is Bayes optimal for the model.
double nearest_mean_risk(const Dataset& data);

// CSV with header x1,...,xd,y and labels written as 1..m.
void write_dataset_csv(const Dataset& data, const std::string& path);
// m is taken from the largest label unless given.
Dataset read_dataset_csv(const std::string& path, std::size_t m = 0);

struct LinearModel {
  LossFamily family;
  std::size_t d = 0;
  // action_dimension(family) rows of d + 1 entries; the last is the bias.
  std::vector<Vec> weights;

  static LinearModel zeros(const LossFamily& family, std::size_t d);
  Vec action(CSpan x) const;
  nlohmann::json to_json() const;
  static LinearModel from_json(const nlohmann::json& j);
};

// Prediction map native to the family: argmax of the logits for scoring
// rules, tau_dag for hinge2, cw3 and zo3, tau_tilde for zo4, llw2 and dkr2.
PredictionMap default_prediction(const LossFamily& family);
// The m-vector whose argmax is the prediction for one input.
Vec prediction_scores(const LinearModel& model, CSpan x, PredictionMap map);

struct FitOptions {
  std::size_t steps = 2000;
  // Step at iteration t is step_size / sqrt(t).
  double step_size = 0.5;
  double ridge = 0.0;
  // Weights start at init plus N(0, init_scale^2) noise drawn from seed.
  std::uint64_t seed = 1;
  double init_scale = 0.0;
  bool average = true;
  // Objective recorded every trace_every steps, at the averaged iterate.
  std::size_t trace_every = 100;
};

struct FitResult {
  LinearModel model;
  std::vector<double> objective_trace;
  double initial_objective = 0.0;
  double final_objective = 0.0;
};

double training_objective(const LinearModel& model, const Dataset& data, double ridge = 0.0);

// Full-batch subgradient descent on the empirical risk. Throws
// TrainingFailure when the objective leaves [0, 1e6] or turns non-finite.
FitResult fit(const LinearModel& init, const Dataset& data, const FitOptions& opts);

double evaluate_zero_one(const LinearModel& model, const Dataset& data, PredictionMap map);

// Fraction of inputs where two prediction maps disagree.
double prediction_disagreement(const LinearModel& model, const Dataset& data, PredictionMap a, PredictionMap b);

// Mean ||q_hat(x) - posterior(x)||_1 for a scoring-rule model.
double probability_gap(const LinearModel& model, const Dataset& data);

}  // namespace mcloss
