#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mcloss/cli.hpp"
#include "mcloss/simplex.hpp"

namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / "mcloss_test_cli" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int run(const std::string& args) {
  const std::string cmd = std::string(MCLOSS_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("verify pinsker succeeds and writes its outputs") {
  const fs::path d = fresh_dir("pinsker");
  CHECK(run("verify --suite pinsker --m 4 --samples 100000 --seed 7 --out " + d.string()) == 0);
  CHECK(fs::exists(d / "pinsker.csv"));
  const auto w = nlohmann::json::parse(slurp(d / "pinsker_witness.json"));
  CHECK(w.at("suite") == "pinsker");
  CHECK(w.at("config").at("m") == 4);
  CHECK(!w.at("reports").empty());
}

TEST_CASE("verify hinge-order lists both orderings") {
  const fs::path d = fresh_dir("order");
  CHECK(run("verify --suite hinge-order --m 3 --samples 20000 --out " + d.string()) == 0);
  const std::string csv = slurp(d / "hinge-order.csv");
  CHECK(csv.find("zo4") != std::string::npos);
  CHECK(csv.find("dkr2") != std::string::npos);
}

TEST_CASE("usage errors exit with 2 and write nothing") {
  const fs::path d = fresh_dir("usage");
  CHECK(run("verify --suite no-such-suite --out " + (d / "x").string()) == 2);
  CHECK(!fs::exists(d / "x"));
  CHECK(run("sweep --kind psi_underline --density 0 --out " + d.string()) == 2);
  CHECK(run("sweep --kind psi_underline --m 5 --out " + d.string()) == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("train --data " + (d / "missing.csv").string() + " --out " + d.string()) == 2);
  CHECK(run("eval --model " + (d / "missing.json").string() + " --out " + d.string()) == 2);
  CHECK(run("--help") == 0);
}

TEST_CASE("serial and parallel runs give byte-identical tables") {
  const fs::path a = fresh_dir("serial"), b = fresh_dir("parallel");
  CHECK(run("verify --suite properness --m 3 --samples 20000 --seed 4 --serial --out " + a.string()) == 0);
  CHECK(run("verify --suite properness --m 3 --samples 20000 --seed 4 --out " + b.string()) == 0);
  CHECK(slurp(a / "properness.csv") == slurp(b / "properness.csv"));
}

TEST_CASE("sweep writes a curve table") {
  const fs::path d = fresh_dir("sweep");
  CHECK(run("sweep --kind psi_underline --m 2 --t-step 0.1 --out " + d.string()) == 0);
  const std::string csv = slurp(d / "sweep_psi_underline.csv");
  CHECK(csv.rfind("bound_id,x,lhs,rhs,slack", 0) == 0);
  CHECK(csv.find("closed_form") != std::string::npos);
}

TEST_CASE("train then eval") {
  const fs::path d = fresh_dir("train");
  CHECK(run("train --m 3 --steps 800 --out " + d.string()) == 0);
  CHECK(fs::exists(d / "model.json"));
  CHECK(fs::exists(d / "trace.csv"));
  const std::string metrics = slurp(d / "metrics.csv");
  CHECK(metrics.find("test_risk_tilde") != std::string::npos);
  CHECK(run("eval --out " + d.string()) == 0);
  CHECK(fs::exists(d / "eval.csv"));
}

TEST_CASE("config files are applied and flags override them") {
  const fs::path d = fresh_dir("config");
  {
    std::ofstream os(d / "cfg.json");
    os << R"({"suite": "pinsker", "m": 2, "samples": 5000, "seed": 3})";
  }
  CHECK(run("verify --config " + (d / "cfg.json").string() + " --m 3 --out " + d.string()) == 0);
  const auto w = nlohmann::json::parse(slurp(d / "pinsker_witness.json"));
  CHECK(w.at("config").at("m") == 3);
  CHECK(w.at("config").at("samples") == 5000);
  {
    std::ofstream os(d / "bad.json");
    os << R"({"sample": 5})";
  }
  CHECK(run("verify --suite pinsker --config " + (d / "bad.json").string() + " --out " + d.string()) == 2);

  mcloss::RunConfig cfg;
  CHECK_THROWS_AS(mcloss::apply_config_json(cfg, nlohmann::json::array()), mcloss::ConfigurationError);
  CHECK(mcloss::run_cli(std::vector<std::string>{"verify", "--suite", "nope"}) == 2);
}
