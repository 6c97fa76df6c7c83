#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mcloss/parallel.hpp"
#include "mcloss/simplex.hpp"

namespace mcloss {

// A multiclass loss: value(j, action) for labels j in [0, m).
struct Loss {
  std::string name;
  std::size_t m = 0;
  std::size_t action_dim = 0;
  std::function<double(std::size_t, CSpan)> value;

  double operator()(std::size_t j, CSpan action) const { return value(j, action); }
  Vec vector(CSpan action) const;
};

double risk(const Loss& loss, CSpan eta, CSpan action);

enum class ActionGeometry { Free, Simplex, Orthant };

struct ActionSet {
  std::vector<Vec> points;
  ActionGeometry geometry = ActionGeometry::Free;
  double refine_step = 0.0;
};

ActionSet margin_actions(std::size_t dim, double lo, double hi, std::size_t per_axis);
// Full mesh of the simplex for m <= 3, otherwise a seeded Dirichlet sample
// plus the vertices and barycentre.
ActionSet simplex_actions(std::size_t m, std::size_t divisions, double floor = 0.0);
ActionSet orthant_actions(std::size_t dim, double hi, std::size_t per_axis);

struct LossTable {
  std::size_t m = 0;
  std::vector<Vec> actions;
  Vec values;
  ActionGeometry geometry = ActionGeometry::Free;
  double refine_step = 0.0;
};

LossTable tabulate(const Loss& loss, const ActionSet& actions, Execution exec = Execution::Parallel);

struct Optimum {
  double value = 0.0;
  Vec point;
};

// Infimum of the conditional risk over the tabulated actions, optionally
// polished by a compass search that stays inside the action geometry.
Optimum entropy_of_loss(const Loss& loss, const LossTable& table, CSpan eta, bool refine = true);
Optimum entropy_of_loss(const Loss& loss, const ActionSet& actions, CSpan eta, bool refine = true);

struct SimplexSearch {
  std::size_t divisions = 0;
  std::size_t samples = 4000;
  double min_step = 1e-12;
  std::uint64_t seed = 1;
};

// Maximizer of g over the simplex in R^m: mesh or random start followed by a
// pattern search along the edge directions e_a - e_b.
Optimum maximize_on_simplex(const std::function<double(CSpan)>& g, std::size_t m,
                            const SimplexSearch& opts = {});

// Pattern search polish shared by the numeric searches. Minimizes f starting
// from x with the given initial step.
Optimum compass_minimize(const std::function<double(CSpan)>& f, Vec x, double step,
                         ActionGeometry geometry, double min_step = 1e-10,
                         std::size_t max_evals = 20000);

}  // namespace mcloss
