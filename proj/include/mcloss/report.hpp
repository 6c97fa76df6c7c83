#pragma once

#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcloss/parallel.hpp"
#include "mcloss/simplex.hpp"

namespace mcloss {

// Outcome of checking lhs <= rhs over a batch of samples. slack = rhs - lhs;
// a sample violates the bound when slack < -tol::kSlack or is NaN.
struct BoundReport {
  std::string bound_id;
  std::size_t m = 0;
  std::size_t samples = 0;
  double worst_slack = std::numeric_limits<double>::infinity();
  double worst_lhs = 0.0;
  double worst_rhs = 0.0;
  std::size_t violations = 0;
  Vec witness;
  std::string witness_layout;
  double wall_time_s = 0.0;

  bool passed() const { return violations == 0; }
};

struct SampleCheck {
  double lhs = 0.0;
  double rhs = 0.0;
};

// Runs check(make(i)) for every index. make must be a pure function of the
// index, which keeps the reduction independent of the execution policy.
template <class Make, class Check, class Flatten>
BoundReport sweep_bound(std::string id, std::size_t m, std::size_t n, Execution exec, Make&& make,
                        Check&& check, Flatten&& flatten, std::string layout) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<SampleCheck> out(n);
  for_each_index(n, exec, [&](std::size_t i) { out[i] = check(make(i)); });
  BoundReport r;
  r.bound_id = std::move(id);
  r.m = m;
  r.samples = n;
  r.witness_layout = std::move(layout);
  std::size_t worst = n;
  for (std::size_t i = 0; i < n; ++i) {
    double slack = out[i].rhs - out[i].lhs;
    if (std::isnan(slack)) slack = -std::numeric_limits<double>::infinity();
    if (slack < -tol::kSlack) ++r.violations;
    if (worst == n || slack < r.worst_slack) {
      r.worst_slack = slack;
      worst = i;
    }
  }
  if (worst < n) {
    r.worst_lhs = out[worst].lhs;
    r.worst_rhs = out[worst].rhs;
    r.witness = flatten(make(worst));
  }
  r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

// Shortest round-trip decimal form with 17 significant digits and no locale.
std::string format_double(double x);

// Wall time is left out so that identical runs give identical bytes.
std::string reports_csv(const std::vector<BoundReport>& reports);
nlohmann::json report_to_json(const BoundReport& r);

struct CurvePoint {
  std::string bound_id;
  double x = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
};

// Long-format table: bound_id,x,lhs,rhs,slack.
std::string curve_csv(const std::vector<CurvePoint>& points);

}  // namespace mcloss
