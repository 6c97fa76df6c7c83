#include "mcloss/training.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "mcloss/hinge.hpp"
#include "mcloss/mesh.hpp"

namespace mcloss {

namespace {

double sq_dist(CSpan a, CSpan b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

std::size_t nearest_mean(const Dataset& data, CSpan x) {
  std::size_t best = 0;
  double bd = sq_dist(x, data.means[0]);
  for (std::size_t j = 1; j < data.m; ++j) {
    const double dj = sq_dist(x, data.means[j]);
    if (dj < bd) {
      bd = dj;
      best = j;
    }
  }
  return best;
}

// Loss of label j at the action and its (sub)gradient in the action.
double loss_and_grad(const LossFamily& family, const ScoringRule* rule, std::size_t j, CSpan a, Vec& g) {
  if (rule) {
    g = composite_gradient(*rule, j, a);
    return composite_loss(*rule, j, a);
  }
  g = hinge_subgradient(family, j, a);
  return hinge_values(family, a)[j];
}

double loss_only(const LossFamily& family, const ScoringRule* rule, std::size_t j, CSpan a) {
  if (rule) return composite_loss(*rule, j, a);
  return hinge_values(family, a)[j];
}

double ridge_term(const LinearModel& model, double ridge) {
  if (ridge == 0.0) return 0.0;
  double s = 0.0;
  for (const Vec& row : model.weights) {
    for (std::size_t i = 0; i < model.d; ++i) s += row[i] * row[i];
  }
  return 0.5 * ridge * s;
}

}  // namespace

Dataset synth_gaussians(std::size_t m, std::size_t d, std::size_t n, double separation, std::uint64_t seed) {
  if (m < 2 || d < 1 || n < 1) throw InvalidInput("synth_gaussians: need m >= 2, d >= 1, n >= 1");
  if (!(separation >= 0.0)) throw InvalidInput("synth_gaussians: separation must be nonnegative");
  Dataset data;
  data.m = m;
  data.d = d;
  data.seed = seed;
  data.separation = separation;
  const double md = static_cast<double>(m);
  const double scale = separation / std::sqrt(2.0);
  for (std::size_t j = 0; j < m; ++j) {
    Vec centred(m);
    for (std::size_t i = 0; i < m; ++i) centred[i] = scale * ((i == j ? 1.0 : 0.0) - 1.0 / md);
    Vec mu(d, 0.0);
    for (std::size_t k = 1; k < m && k <= d; ++k) {
      const double kd = static_cast<double>(k);
      const double norm = std::sqrt(kd * (kd + 1.0));
      double c = 0.0;
      for (std::size_t i = 0; i < k; ++i) c += centred[i] / norm;
      c -= kd * centred[k] / norm;
      mu[k - 1] = c;
    }
    data.means.push_back(std::move(mu));
  }
  data.x.resize(n);
  data.y.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    Rng rng = stream_rng(seed, s);
    std::uniform_int_distribution<std::size_t> label(0, m - 1);
    std::normal_distribution<double> noise;
    const std::size_t y = label(rng);
    Vec x(data.means[y]);
    for (double& v : x) v += data.noise * noise(rng);
    data.x[s] = std::move(x);
    data.y[s] = y;
  }
  return data;
}

Vec gaussian_posterior(const Dataset& data, CSpan x) {
  Vec h(data.m);
  for (std::size_t j = 0; j < data.m; ++j) h[j] = -sq_dist(x, data.means[j]) / (2.0 * data.noise * data.noise);
  return softmax(h);
}

double nearest_mean_risk(const Dataset& data) {
  if (data.means.size() != data.m) throw InvalidInput("nearest_mean_risk: dataset has no generative means");
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < data.size(); ++i) wrong += nearest_mean(data, data.x[i]) != data.y[i];
  return static_cast<double>(wrong) / static_cast<double>(data.size());
}

void write_dataset_csv(const Dataset& data, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ConfigurationError("cannot write dataset to " + path);
  for (std::size_t i = 0; i < data.d; ++i) os << 'x' << i + 1 << ',';
  os << "y\n";
  for (std::size_t s = 0; s < data.size(); ++s) {
    for (double v : data.x[s]) os << format_double(v) << ',';
    os << data.y[s] + 1 << '\n';
  }
}

Dataset read_dataset_csv(const std::string& path, std::size_t m) {
  std::ifstream is(path);
  if (!is) throw ConfigurationError("cannot read dataset from " + path);
  std::string line;
  if (!std::getline(is, line)) throw ConfigurationError("dataset " + path + " is empty");
  std::size_t cols = 1;
  for (char ch : line) cols += ch == ',';
  if (cols < 2) throw ConfigurationError("dataset " + path + " needs at least one feature column");
  Dataset data;
  data.d = cols - 1;
  std::size_t max_label = 0;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    Vec x;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != cols) throw ConfigurationError("dataset row " + std::to_string(row) + " has wrong width");
    try {
      for (std::size_t i = 0; i + 1 < cols; ++i) x.push_back(std::stod(cells[i]));
      const long y = std::stol(cells.back());
      if (y < 1) throw ConfigurationError("dataset row " + std::to_string(row) + ": labels start at 1");
      data.y.push_back(static_cast<std::size_t>(y - 1));
      max_label = std::max(max_label, static_cast<std::size_t>(y));
    } catch (const std::logic_error&) {
      throw ConfigurationError("dataset row " + std::to_string(row) + " is not numeric");
    }
    data.x.push_back(std::move(x));
  }
  data.m = m ? m : max_label;
  if (max_label > data.m) throw ConfigurationError("dataset labels exceed m");
  if (data.size() < data.m) throw ConfigurationError("dataset needs at least m rows");
  return data;
}

LinearModel LinearModel::zeros(const LossFamily& family, std::size_t d) {
  LinearModel model;
  model.family = family;
  model.d = d;
  model.weights.assign(action_dimension(family), Vec(d + 1, 0.0));
  return model;
}

Vec LinearModel::action(CSpan x) const {
  if (x.size() != d) throw InvalidInput("LinearModel: input has wrong dimension");
  Vec a(weights.size());
  for (std::size_t r = 0; r < weights.size(); ++r) {
    double s = weights[r][d];
    for (std::size_t i = 0; i < d; ++i) s += weights[r][i] * x[i];
    a[r] = s;
  }
  return a;
}

nlohmann::json LinearModel::to_json() const {
  return {{"family", family_to_json(family)}, {"d", d}, {"weights", weights}};
}

LinearModel LinearModel::from_json(const nlohmann::json& j) {
  LinearModel model;
  try {
    model.family = family_from_json(j.at("family"));
    model.d = j.at("d").get<std::size_t>();
    model.weights = j.at("weights").get<std::vector<Vec>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigurationError(std::string("model json: ") + e.what());
  }
  if (model.weights.size() != action_dimension(model.family)) throw ConfigurationError("model json: wrong row count");
  for (const Vec& row : model.weights) {
    if (row.size() != model.d + 1) throw ConfigurationError("model json: wrong row width");
    for (double w : row) {
      if (!std::isfinite(w)) throw ConfigurationError("model json: non-finite weight");
    }
  }
  return model;
}

PredictionMap default_prediction(const LossFamily& family) {
  if (is_scoring_family(family.kind)) return PredictionMap::Identity;
  switch (family.kind) {
    case FamilyKind::ZO4:
    case FamilyKind::LLW2:
    case FamilyKind::DKR2:
      return PredictionMap::Tilde;
    default:
      return PredictionMap::Dagger;
  }
}

Vec prediction_scores(const LinearModel& model, CSpan x, PredictionMap map) {
  const Vec a = model.action(x);
  if (map == PredictionMap::SigmaL) {
    if (is_scoring_family(model.family.kind)) {
      const ScoringRule rule = make_scoring_rule(model.family);
      Vec z(model.family.m);
      for (std::size_t j = 0; j < z.size(); ++j) z[j] = -composite_loss(rule, j, a);
      return z;
    }
    return sigma_L(make_hinge_loss(model.family), a);
  }
  if (is_scoring_family(model.family.kind) && map != PredictionMap::Identity) {
    throw InvalidInput("prediction_scores: scoring rules predict by argmax or sigma_L");
  }
  return apply_prediction(map, a);
}

double training_objective(const LinearModel& model, const Dataset& data, double ridge) {
  std::optional<ScoringRule> rule;
  if (is_scoring_family(model.family.kind)) rule = make_scoring_rule(model.family);
  double s = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    s += loss_only(model.family, rule ? &*rule : nullptr, data.y[i], model.action(data.x[i]));
  }
  return s / static_cast<double>(data.size()) + ridge_term(model, ridge);
}

FitResult fit(const LinearModel& init, const Dataset& data, const FitOptions& opts) {
  if (data.size() == 0) throw InvalidInput("fit: empty dataset");
  if (init.d != data.d) throw InvalidInput("fit: model and data dimensions differ");
  if (init.family.m != data.m) throw InvalidInput("fit: model and data disagree on m");
  std::optional<ScoringRule> rule;
  if (is_scoring_family(init.family.kind)) rule = make_scoring_rule(init.family);
  const ScoringRule* rp = rule ? &*rule : nullptr;

  LinearModel cur = init;
  if (opts.init_scale > 0.0) {
    Rng rng = stream_rng(opts.seed, 0);
    std::normal_distribution<double> n01;
    for (Vec& row : cur.weights) {
      for (double& w : row) w += opts.init_scale * n01(rng);
    }
  }
  LinearModel avg = cur;
  FitResult out;
  out.initial_objective = training_objective(cur, data, opts.ridge);
  out.objective_trace.push_back(out.initial_objective);

  const std::size_t rows = cur.weights.size();
  const std::size_t width = data.d + 1;
  const double inv_n = 1.0 / static_cast<double>(data.size());
  Vec g;
  for (std::size_t t = 1; t <= opts.steps; ++t) {
    std::vector<Vec> grad(rows, Vec(width, 0.0));
    double obj = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const Vec a = cur.action(data.x[i]);
      obj += loss_and_grad(cur.family, rp, data.y[i], a, g);
      for (std::size_t r = 0; r < rows; ++r) {
        if (g[r] == 0.0) continue;
        for (std::size_t k = 0; k < data.d; ++k) grad[r][k] += g[r] * data.x[i][k];
        grad[r][data.d] += g[r];
      }
    }
    obj = obj * inv_n + ridge_term(cur, opts.ridge);
    if (!std::isfinite(obj) || obj > 1e6) {
      throw TrainingFailure("fit: objective " + format_double(obj) + " at step " + std::to_string(t) +
                            " with step size " + format_double(opts.step_size) + " for " +
                            family_name(cur.family.kind));
    }
    const double eta = opts.step_size / std::sqrt(static_cast<double>(t));
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t k = 0; k < width; ++k) {
        double gk = grad[r][k] * inv_n;
        if (k < data.d) gk += opts.ridge * cur.weights[r][k];
        cur.weights[r][k] -= eta * gk;
      }
    }
    const double w = 1.0 / static_cast<double>(t + 1);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t k = 0; k < width; ++k) avg.weights[r][k] += w * (cur.weights[r][k] - avg.weights[r][k]);
    }
    if (opts.trace_every && t % opts.trace_every == 0) {
      out.objective_trace.push_back(training_objective(opts.average ? avg : cur, data, opts.ridge));
    }
  }
  out.model = opts.average ? avg : cur;
  out.final_objective = training_objective(out.model, data, opts.ridge);
  return out;
}

double evaluate_zero_one(const LinearModel& model, const Dataset& data, PredictionMap map) {
  if (data.size() == 0) throw InvalidInput("evaluate_zero_one: empty dataset");
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    wrong += argmax_lowest(prediction_scores(model, data.x[i], map)) != data.y[i];
  }
  return static_cast<double>(wrong) / static_cast<double>(data.size());
}

double prediction_disagreement(const LinearModel& model, const Dataset& data, PredictionMap a, PredictionMap b) {
  if (data.size() == 0) return 0.0;
  std::size_t diff = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    diff += argmax_lowest(prediction_scores(model, data.x[i], a)) !=
            argmax_lowest(prediction_scores(model, data.x[i], b));
  }
  return static_cast<double>(diff) / static_cast<double>(data.size());
}

double probability_gap(const LinearModel& model, const Dataset& data) {
  if (!is_scoring_family(model.family.kind)) throw InvalidInput("probability_gap: needs a scoring-rule model");
  if (data.means.size() != data.m) throw InvalidInput("probability_gap: dataset has no generative means");
  double s = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Vec q = softmax(model.action(data.x[i]));
    const Vec p = gaussian_posterior(data, data.x[i]);
    Vec d(q.size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = q[k] - p[k];
    s += norm1(d);
  }
  return s / static_cast<double>(data.size());
}

}  // namespace mcloss
