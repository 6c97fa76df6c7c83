#include "mcloss/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mcloss/hinge.hpp"
#include "mcloss/mesh.hpp"
#include "mcloss/psi.hpp"
#include "mcloss/regret.hpp"
#include "mcloss/report.hpp"
#include "mcloss/suites.hpp"
#include "mcloss/training.hpp"

namespace mcloss {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kCommands{"verify", "sweep", "train", "eval"};
const std::vector<std::string> kSweepKinds{"psi_underline", "psi_underline_C", "psi_underline_C0", "psi_q",
                                           "psi_q_C",       "psi_BJM",         "psi_BJM_convex",   "psi_RW",
                                           "slack_zo4"};

template <class T>
void take(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigurationError("cannot write " + path.string());
  os << text;
  if (!os) throw ConfigurationError("write failed: " + path.string());
}

void ensure_dir(const std::string& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw ConfigurationError("cannot create output directory " + out + ": " + ec.message());
}

LossFamily resolve_family(const RunConfig& cfg, const std::string& fallback) {
  nlohmann::json j;
  if (cfg.family.is_null()) {
    j = {{"family", fallback}};
  } else if (cfg.family.is_string()) {
    j = {{"family", cfg.family.get<std::string>()}};
  } else {
    j = cfg.family;
  }
  if (!j.contains("m")) j["m"] = cfg.m;
  if (!j.contains("beta")) {
    if (std::isinf(cfg.beta)) {
      j["beta"] = "inf";
    } else {
      j["beta"] = cfg.beta;
    }
  }
  return family_from_json(j);
}

std::string line_for(const BoundReport& r) {
  std::ostringstream os;
  os << (r.passed() ? "ok   " : "FAIL ") << r.bound_id << " samples=" << r.samples
     << " worst_slack=" << format_double(r.worst_slack) << " violations=" << r.violations;
  return os.str();
}

int cmd_verify(const RunConfig& cfg) {
  if (!is_suite(cfg.suite)) {
    std::cerr << "unknown suite '" << cfg.suite << "'; known suites:";
    for (const auto& s : suite_names()) std::cerr << ' ' << s;
    std::cerr << '\n';
    return 2;
  }
  SuiteConfig sc;
  sc.suite = cfg.suite;
  sc.m = cfg.m;
  sc.beta = cfg.beta;
  sc.seed = cfg.seed;
  sc.samples = cfg.samples;
  sc.density = cfg.density.value_or(0);
  sc.exec = cfg.exec;
  const std::vector<BoundReport> reports = run_suite(sc);

  ensure_dir(cfg.out);
  write_file(fs::path(cfg.out) / (cfg.suite + ".csv"), reports_csv(reports));
  nlohmann::json w;
  w["suite"] = cfg.suite;
  w["config"] = config_to_json(cfg);
  w["reports"] = nlohmann::json::array();
  for (const auto& r : reports) w["reports"].push_back(report_to_json(r));
  write_file(fs::path(cfg.out) / (cfg.suite + "_witness.json"), w.dump(2) + "\n");

  bool ok = true;
  for (const auto& r : reports) {
    std::cout << line_for(r) << '\n';
    ok = ok && r.passed();
  }
  std::cout << (ok ? "PASS " : "FAIL ") << cfg.suite << " (" << reports.size() << " checks)\n";
  return ok ? 0 : 1;
}

std::vector<CurvePoint> profile_points(const PsiProfile& p, std::optional<double> kappa) {
  std::vector<CurvePoint> pts;
  for (std::size_t i = 0; i < p.t.size(); ++i) {
    const double t = p.t[i];
    pts.push_back({p.label, t, kappa ? 0.5 * *kappa * t * t : 0.0, p.value[i]});
  }
  return pts;
}

std::optional<double> kappa_for(const LossFamily& f) {
  try {
    return kappa_constant(f);
  } catch (const InvalidInput&) {
    return std::nullopt;
  }
}

int cmd_sweep(const RunConfig& cfg) {
  if (std::find(kSweepKinds.begin(), kSweepKinds.end(), cfg.kind) == kSweepKinds.end()) {
    std::cerr << "unknown sweep kind '" << cfg.kind << "'; known kinds:";
    for (const auto& s : kSweepKinds) std::cerr << ' ' << s;
    std::cerr << '\n';
    return 2;
  }
  if (cfg.density && *cfg.density == 0) {
    std::cerr << "sweep: density 0 requests an empty mesh\n";
    return 2;
  }
  if (!(cfg.t_step > 0.0 && cfg.t_step <= 1.0)) {
    std::cerr << "sweep: t_step must lie in (0, 1]\n";
    return 2;
  }
  const std::size_t m = cfg.m;
  std::vector<CurvePoint> pts;
  bool ok = true;

  if (cfg.kind == "slack_zo4") {
    const std::size_t div = cfg.density.value_or(m <= 3 ? 10 : (m == 4 ? 6 : 4));
    const auto etas = simplex_mesh(m, div);
    const auto taus = box_grid(m - 1, -1.5, 1.5, div + 1);
    const std::size_t n = etas.size() * taus.size();
    std::vector<CurvePoint> out(n);
    for_each_index(n, cfg.exec, [&](std::size_t i) {
      const Vec& eta = etas[i / taus.size()];
      const Vec& tau = taus[i % taus.size()];
      const Vec values = zo4_all(tau);
      const double b = expect(eta, values) - (1.0 - *std::max_element(eta.begin(), eta.end()));
      const double lhs = bzo(eta, predict_tilde(tau)) / static_cast<double>(m);
      out[i] = {"slack_zo4_m" + std::to_string(m), static_cast<double>(i), lhs, b};
    });
    for (const auto& p : out) ok = ok && !(p.rhs - p.lhs < -tol::kSlack) && !std::isnan(p.rhs - p.lhs);
    pts = std::move(out);
  } else {
    if (m > 4) {
      std::cerr << "sweep: psi kinds need m <= 4\n";
      return 2;
    }
    const PsiKind kind = psi_kind_from_name(cfg.kind);
    const LossFamily family = resolve_family(cfg, m == 2 ? "two_class_exponential" : "likelihood");
    if (!is_scoring_family(family.kind)) throw ConfigurationError("sweep: psi kinds need a scoring family");
    const ScoringRule rule = make_scoring_rule(family);
    const std::optional<double> kappa = kappa_for(family);
    PsiMesh mesh;
    mesh.divisions = cfg.density.value_or(0);
    mesh.t_step = cfg.t_step;
    const CostMatrix cost = family.cost ? *family.cost : ordinal_cost(m);
    Vec c0(m);
    for (std::size_t k = 0; k < m; ++k) c0[k] = static_cast<double>(k + 1);
    switch (kind) {
      case PsiKind::Underline: {
        const PsiProfile p = psi_underline(rule, std::nullopt, mesh);
        pts = profile_points(p, kappa);
        if (family.kind == FamilyKind::TwoClassExponential) {
          for (std::size_t i = 0; i < p.t.size(); ++i) {
            const double t = p.t[i];
            pts.push_back({"closed_form_" + p.label, t, 1.0 - std::sqrt(std::max(0.0, 1.0 - t * t)), p.value[i]});
          }
        }
        break;
      }
      case PsiKind::UnderlineC:
        pts = profile_points(psi_underline(rule, cost, mesh), std::nullopt);
        break;
      case PsiKind::UnderlineC0:
        pts = profile_points(psi_underline_c0(rule, c0, mesh), std::nullopt);
        break;
      case PsiKind::AtQ:
        pts = profile_points(psi_at_q_profile(rule, ProbVector::uniform(m), std::nullopt, mesh), kappa);
        break;
      case PsiKind::AtQC:
        pts = profile_points(psi_at_q_profile(rule, ProbVector::uniform(m), cost, mesh), std::nullopt);
        break;
      case PsiKind::BJM:
      case PsiKind::BJMConvex: {
        if (m != 2) throw InvalidInput("sweep: two-class psi needs m = 2");
        PsiProfile p = psi_bjm(rule, cfg.density.value_or(401), cfg.t_step);
        if (kind == PsiKind::BJMConvex) p = convexify(p);
        pts = profile_points(p, kappa);
        break;
      }
      case PsiKind::RW: {
        if (m != 2) throw InvalidInput("sweep: psi_RW needs m = 2");
        const std::size_t n = cfg.density.value_or(200);
        for (std::size_t i = 0; i <= 2 * n; ++i) {
          const double delta = -1.0 + static_cast<double>(i) / static_cast<double>(n);
          pts.push_back({"psi_RW_" + rule.label, delta, 0.0, psi_rw(rule, c0[0], c0[1], delta)});
        }
        break;
      }
    }
  }

  ensure_dir(cfg.out);
  write_file(fs::path(cfg.out) / ("sweep_" + cfg.kind + ".csv"), curve_csv(pts));
  std::cout << (ok ? "PASS " : "FAIL ") << "sweep " << cfg.kind << " rows=" << pts.size() << '\n';
  return ok ? 0 : 1;
}

struct Splits {
  Dataset train;
  Dataset test;
};

Dataset test_set(const RunConfig& cfg, std::size_t m) {
  if (!cfg.test_data.empty()) return read_dataset_csv(cfg.test_data, m);
  if (!cfg.data.empty()) return read_dataset_csv(cfg.data, m);
  return synth_gaussians(m, cfg.dim, cfg.n_test, cfg.separation, splitmix64(cfg.seed + 1));
}

std::vector<PredictionMap> maps_for(const LossFamily& f) {
  if (is_scoring_family(f.kind)) return {PredictionMap::Identity};
  return {PredictionMap::Dagger, PredictionMap::Tilde, PredictionMap::SigmaL};
}

PredictionMap chosen_map(const RunConfig& cfg, const LossFamily& f) {
  return cfg.map.empty() ? default_prediction(f) : prediction_map_from_name(cfg.map);
}

using Metrics = std::vector<std::pair<std::string, double>>;

void evaluation_metrics(const LinearModel& model, const Dataset& test, PredictionMap primary, Metrics& out) {
  const auto maps = maps_for(model.family);
  out.push_back({"test_risk", evaluate_zero_one(model, test, primary)});
  for (PredictionMap p : maps) {
    const double r = evaluate_zero_one(model, test, p);
    out.push_back({"test_risk_" + prediction_map_name(p), r});
    std::cout << "test risk with " << prediction_map_name(p) << ": " << format_double(r) << '\n';
  }
  if (!is_scoring_family(model.family.kind)) {
    out.push_back({"disagreement_dagger_tilde",
                   prediction_disagreement(model, test, PredictionMap::Dagger, PredictionMap::Tilde)});
  } else if (!test.means.empty()) {
    out.push_back({"probability_gap_l1", probability_gap(model, test)});
  }
  if (!test.means.empty()) out.push_back({"bayes_risk", nearest_mean_risk(test)});
}

std::string metrics_csv(const Metrics& metrics) {
  std::string s = "metric,value\n";
  for (const auto& [k, v] : metrics) s += k + "," + format_double(v) + "\n";
  return s;
}

int cmd_train(const RunConfig& cfg) {
  const LossFamily family = resolve_family(cfg, "zo4");
  const std::size_t m = family.m;
  const Dataset train = cfg.data.empty()
                            ? synth_gaussians(m, cfg.dim, cfg.n_train, cfg.separation, cfg.seed)
                            : read_dataset_csv(cfg.data, m);
  const Dataset test = test_set(cfg, m);
  if (test.d != train.d) throw ConfigurationError("train: test data dimension differs from training data");
  const PredictionMap primary = chosen_map(cfg, family);

  FitOptions fo;
  fo.steps = cfg.steps;
  fo.step_size = cfg.step_size;
  fo.ridge = cfg.ridge;
  fo.seed = cfg.seed;
  fo.init_scale = cfg.init_scale;
  const FitResult fr = fit(LinearModel::zeros(family, train.d), train, fo);

  Metrics metrics{{"train_objective_initial", fr.initial_objective},
                  {"train_objective_final", fr.final_objective},
                  {"train_risk", evaluate_zero_one(fr.model, train, primary)}};
  evaluation_metrics(fr.model, test, primary, metrics);

  ensure_dir(cfg.out);
  nlohmann::json mj = fr.model.to_json();
  mj["prediction"] = prediction_map_name(primary);
  write_file(fs::path(cfg.out) / "model.json", mj.dump(2) + "\n");
  write_file(fs::path(cfg.out) / "metrics.csv", metrics_csv(metrics));
  std::string trace = "step,objective\n";
  for (std::size_t i = 0; i < fr.objective_trace.size(); ++i) {
    trace += std::to_string(i * fo.trace_every) + "," + format_double(fr.objective_trace[i]) + "\n";
  }
  write_file(fs::path(cfg.out) / "trace.csv", trace);
  std::cout << "objective " << format_double(fr.initial_objective) << " -> " << format_double(fr.final_objective)
            << '\n';
  return 0;
}

int cmd_eval(const RunConfig& cfg) {
  const std::string path = cfg.model.empty() ? (fs::path(cfg.out) / "model.json").string() : cfg.model;
  std::ifstream is(path);
  if (!is) throw ConfigurationError("eval: cannot open model " + path);
  nlohmann::json mj;
  try {
    mj = nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigurationError("eval: bad model file " + path + ": " + e.what());
  }
  const LinearModel model = LinearModel::from_json(mj);
  RunConfig local = cfg;
  if (local.map.empty() && mj.contains("prediction")) local.map = mj.at("prediction").get<std::string>();
  const Dataset test = test_set(local, model.family.m);
  if (test.d != model.d) throw ConfigurationError("eval: data dimension differs from the model");
  Metrics metrics;
  evaluation_metrics(model, test, chosen_map(local, model.family), metrics);
  ensure_dir(cfg.out);
  write_file(fs::path(cfg.out) / "eval.csv", metrics_csv(metrics));
  return 0;
}

}  // namespace

void apply_config_json(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigurationError("config must be a JSON object");
  static const std::vector<std::string> known{
      "command", "suite", "m",     "beta",     "seed",  "samples", "density", "t_step",    "out",
      "kind",    "family", "data", "test_data", "model", "map",     "n_train", "n_test",    "dim",
      "separation", "steps", "step_size", "ridge", "init_scale", "serial"};
  for (const auto& [k, v] : j.items()) {
    if (std::find(known.begin(), known.end(), k) == known.end()) throw ConfigurationError("unknown config key: " + k);
  }
  try {
    take(j, "command", cfg.command);
    take(j, "suite", cfg.suite);
    take(j, "m", cfg.m);
    if (j.contains("beta")) {
      const auto& b = j.at("beta");
      cfg.beta = b.is_string() && b.get<std::string>() == "inf" ? INFINITY : b.get<double>();
    }
    take(j, "seed", cfg.seed);
    take(j, "samples", cfg.samples);
    if (j.contains("density")) cfg.density = j.at("density").get<std::size_t>();
    take(j, "t_step", cfg.t_step);
    take(j, "out", cfg.out);
    take(j, "kind", cfg.kind);
    if (j.contains("family")) cfg.family = j.at("family");
    take(j, "data", cfg.data);
    take(j, "test_data", cfg.test_data);
    take(j, "model", cfg.model);
    take(j, "map", cfg.map);
    take(j, "n_train", cfg.n_train);
    take(j, "n_test", cfg.n_test);
    take(j, "dim", cfg.dim);
    take(j, "separation", cfg.separation);
    take(j, "steps", cfg.steps);
    take(j, "step_size", cfg.step_size);
    take(j, "ridge", cfg.ridge);
    take(j, "init_scale", cfg.init_scale);
    if (j.contains("serial")) cfg.exec = j.at("serial").get<bool>() ? Execution::Serial : Execution::Parallel;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigurationError(std::string("config: ") + e.what());
  }
}

nlohmann::json config_to_json(const RunConfig& cfg) {
  nlohmann::json j{{"command", cfg.command}, {"m", cfg.m},     {"seed", cfg.seed},
                   {"samples", cfg.samples}, {"out", cfg.out}, {"serial", cfg.exec == Execution::Serial}};
  if (std::isinf(cfg.beta)) {
    j["beta"] = "inf";
  } else {
    j["beta"] = cfg.beta;
  }
  if (!cfg.suite.empty()) j["suite"] = cfg.suite;
  if (!cfg.kind.empty()) j["kind"] = cfg.kind;
  if (cfg.density) j["density"] = *cfg.density;
  if (!cfg.family.is_null()) j["family"] = cfg.family;
  return j;
}

int run_command(const RunConfig& cfg) {
  try {
    if (cfg.m < 2) throw ConfigurationError("m must be at least 2");
    if (cfg.command == "verify") return cmd_verify(cfg);
    if (cfg.command == "sweep") return cmd_sweep(cfg);
    if (cfg.command == "train") return cmd_train(cfg);
    if (cfg.command == "eval") return cmd_eval(cfg);
    std::cerr << "unknown command '" << cfg.command << "'\n";
    return 2;
  } catch (const TrainingFailure& e) {
    std::cerr << "training failure: " << e.what() << '\n';
    return 1;
  } catch (const ConfigurationError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Loss, entropy and regret-bound toolkit for multiclass classification", "mcloss"};
  std::string command;
  std::string config_path;
  std::optional<std::string> suite, beta, out, kind, family, data, test_data, model, map;
  std::optional<std::size_t> m, samples, density, n_train, n_test, dim, steps;
  std::optional<std::uint64_t> seed;
  std::optional<double> t_step, separation, step_size, ridge, init_scale;
  bool serial = false;

  app.add_option("command", command, "verify | sweep | train | eval")->required()->check(CLI::IsMember(kCommands));
  app.add_option("--config", config_path, "JSON config file; flags override its values");
  app.add_option("--suite", suite, "verification suite");
  app.add_option("--m", m, "number of classes");
  app.add_option("--beta", beta, "beta for the L_beta families (a number or inf)");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--samples", samples, "samples per randomized check");
  app.add_option("--out", out, "output directory");
  app.add_option("--kind", kind, "sweep kind");
  app.add_option("--density", density, "mesh density");
  app.add_option("--t-step", t_step, "grid step for psi profiles");
  app.add_option("--family", family, "loss family name");
  app.add_option("--data", data, "dataset CSV (x1..xd,y with labels 1..m)");
  app.add_option("--test-data", test_data, "held-out dataset CSV");
  app.add_option("--model", model, "model JSON for eval");
  app.add_option("--map", map, "prediction map: argmax, dagger, tilde, sigma_l");
  app.add_option("--n-train", n_train, "synthetic training size");
  app.add_option("--n-test", n_test, "synthetic test size");
  app.add_option("--dim", dim, "synthetic input dimension");
  app.add_option("--separation", separation, "distance between synthetic class means");
  app.add_option("--steps", steps, "subgradient steps");
  app.add_option("--step-size", step_size, "base step size");
  app.add_option("--ridge", ridge, "ridge penalty");
  app.add_option("--init-scale", init_scale, "scale of random initial weights");
  app.add_flag("--serial", serial, "run sweeps on one thread");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) throw ConfigurationError("cannot open config " + config_path);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(is);
      } catch (const nlohmann::json::exception& e) {
        throw ConfigurationError("bad config " + config_path + ": " + e.what());
      }
      apply_config_json(cfg, j);
    }
    cfg.command = command;
    if (suite) cfg.suite = *suite;
    if (m) cfg.m = *m;
    if (beta) {
      if (*beta == "inf") {
        cfg.beta = INFINITY;
      } else {
        try {
          cfg.beta = std::stod(*beta);
        } catch (const std::exception&) {
          throw ConfigurationError("--beta: not a number: " + *beta);
        }
      }
    }
    if (seed) cfg.seed = *seed;
    if (samples) cfg.samples = *samples;
    if (out) cfg.out = *out;
    if (kind) cfg.kind = *kind;
    if (density) cfg.density = *density;
    if (t_step) cfg.t_step = *t_step;
    if (family) cfg.family = *family;
    if (data) cfg.data = *data;
    if (test_data) cfg.test_data = *test_data;
    if (model) cfg.model = *model;
    if (map) cfg.map = *map;
    if (n_train) cfg.n_train = *n_train;
    if (n_test) cfg.n_test = *n_test;
    if (dim) cfg.dim = *dim;
    if (separation) cfg.separation = *separation;
    if (steps) cfg.steps = *steps;
    if (step_size) cfg.step_size = *step_size;
    if (ridge) cfg.ridge = *ridge;
    if (init_scale) cfg.init_scale = *init_scale;
    if (serial) cfg.exec = Execution::Serial;
  } catch (const ConfigurationError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  }
  return run_command(cfg);
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("mcloss");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace mcloss
