#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "mcloss/training.hpp"

using namespace mcloss;

namespace {

LossFamily fam(FamilyKind k, std::size_t m) { return LossFamily{k, m, 0.5, std::nullopt}; }

std::string temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "mcloss_test_training";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

}  // namespace

TEST_CASE("synthetic data is deterministic in the seed") {
  const Dataset a = synth_gaussians(3, 2, 200, 4.0, 9), b = synth_gaussians(3, 2, 200, 4.0, 9);
  const Dataset c = synth_gaussians(3, 2, 200, 4.0, 10);
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
  CHECK(a.x != c.x);
  CHECK(a.size() == 200);
  for (std::size_t y : a.y) CHECK(y < 3);
}

TEST_CASE("Bayes risk of the generative model") {
  const Dataset flat = synth_gaussians(3, 2, 4000, 0.0, 1);
  CHECK(nearest_mean_risk(flat) == doctest::Approx(2.0 / 3.0).epsilon(0.05));
  const Dataset far = synth_gaussians(4, 3, 4000, 12.0, 2);
  CHECK(nearest_mean_risk(far) < 0.01);
  const Vec p = gaussian_posterior(far, far.x[0]);
  double s = 0.0;
  for (double x : p) s += x;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fitting the likelihood rule reduces the objective") {
  const Dataset data = synth_gaussians(3, 2, 400, 5.0, 3);
  const LinearModel init = LinearModel::zeros(fam(FamilyKind::MultinomialLikelihood, 3), 2);
  FitOptions o;
  o.steps = 600;
  const FitResult r = fit(init, data, o);
  CHECK(r.final_objective <= 0.5 * r.initial_objective);
  CHECK(evaluate_zero_one(r.model, data, PredictionMap::Identity) <= nearest_mean_risk(data) + 0.05);
  CHECK(probability_gap(r.model, data) < 0.5);

  o.steps = 0;
  const FitResult none = fit(init, data, o);
  CHECK(none.model.weights == init.weights);
}

TEST_CASE("zo4 with the tilde map learns a separable problem") {
  const Dataset train = synth_gaussians(3, 2, 600, 8.0, 1), test = synth_gaussians(3, 2, 3000, 8.0, 2);
  const LinearModel init = LinearModel::zeros(fam(FamilyKind::ZO4, 3), 2);
  FitOptions o;
  o.steps = 1500;
  o.step_size = 1.0;
  const FitResult r = fit(init, train, o);
  CHECK(evaluate_zero_one(r.model, test, PredictionMap::Tilde) <= 0.05);
  CHECK(default_prediction(fam(FamilyKind::ZO4, 3)) == PredictionMap::Tilde);
  CHECK(default_prediction(fam(FamilyKind::ZO3, 3)) == PredictionMap::Dagger);
  CHECK(prediction_disagreement(r.model, test, PredictionMap::Tilde, PredictionMap::Tilde) == 0.0);
}

TEST_CASE("untrained random weights are near chance") {
  const Dataset data = synth_gaussians(3, 2, 3000, 8.0, 5);
  LinearModel model = LinearModel::zeros(fam(FamilyKind::MultinomialLikelihood, 3), 2);
  FitOptions o;
  o.steps = 0;
  o.init_scale = 1e-9;
  o.seed = 11;
  const FitResult r = fit(model, data, o);
  CHECK(evaluate_zero_one(r.model, data, PredictionMap::Identity) > 0.3);
}

TEST_CASE("divergent step sizes raise TrainingFailure") {
  const Dataset data = synth_gaussians(3, 2, 200, 8.0, 6);
  FitOptions o;
  o.steps = 200;
  o.step_size = 1e3;
  o.ridge = 1.0;
  CHECK_THROWS_AS(fit(LinearModel::zeros(fam(FamilyKind::DKR2, 3), 2), data, o), TrainingFailure);
  CHECK_THROWS_AS(fit(LinearModel::zeros(fam(FamilyKind::MultinomialLikelihood, 3), 2), data, o), TrainingFailure);
}

TEST_CASE("dataset CSV and model JSON round trips") {
  const Dataset data = synth_gaussians(4, 3, 50, 3.0, 7);
  const std::string path = temp_path("data.csv");
  write_dataset_csv(data, path);
  const Dataset back = read_dataset_csv(path);
  CHECK(back.m == 4);
  CHECK(back.y == data.y);
  REQUIRE(back.x.size() == data.x.size());
  for (std::size_t i = 0; i < data.x.size(); ++i) {
    for (std::size_t k = 0; k < 3; ++k) CHECK(back.x[i][k] == data.x[i][k]);
  }
  CHECK_THROWS_AS(read_dataset_csv(temp_path("missing.csv")), ConfigurationError);

  LinearModel model = LinearModel::zeros(fam(FamilyKind::ZO4, 4), 3);
  model.weights[1][2] = 0.125;
  const LinearModel copy = LinearModel::from_json(model.to_json());
  CHECK(copy.weights == model.weights);
  CHECK(copy.family.kind == FamilyKind::ZO4);
  CHECK(copy.action(data.x[0]) == model.action(data.x[0]));
}
