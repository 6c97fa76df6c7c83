#include "mcloss/loss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mcloss/mesh.hpp"

namespace mcloss {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sanitize_min(double v) { return std::isnan(v) ? kInf : v; }

}  // namespace

Vec Loss::vector(CSpan action) const {
  Vec z(m);
  for (std::size_t j = 0; j < m; ++j) z[j] = value(j, action);
  return z;
}

double risk(const Loss& loss, CSpan eta, CSpan action) {
  if (eta.size() != loss.m) throw InvalidInput("risk: eta has wrong dimension");
  double s = 0.0;
  for (std::size_t j = 0; j < loss.m; ++j) {
    if (eta[j] == 0.0) continue;
    s += eta[j] * loss.value(j, action);
  }
  return s;
}

ActionSet margin_actions(std::size_t dim, double lo, double hi, std::size_t per_axis) {
  ActionSet a;
  a.points = box_grid(dim, lo, hi, per_axis);
  a.geometry = ActionGeometry::Free;
  a.refine_step = (hi - lo) / static_cast<double>(per_axis - 1);
  return a;
}

ActionSet simplex_actions(std::size_t m, std::size_t divisions, double floor) {
  ActionSet a;
  a.geometry = ActionGeometry::Simplex;
  if (m <= 3) {
    a.points = floor > 0.0 ? simplex_mesh_min(m, divisions, floor) : simplex_mesh(m, divisions);
  } else {
    Rng rng = stream_rng(0x5EED, m);
    const std::size_t n = divisions * divisions * 4;
    for (std::size_t i = 0; i < n; ++i) {
      a.points.push_back(floor > 0.0 ? sample_simplex_interior(m, floor, rng)
                                     : sample_dirichlet(m, 1.0, rng));
    }
    if (floor == 0.0) {
      for (std::size_t j = 0; j < m; ++j) a.points.push_back(ProbVector::vertex(m, j).vec());
    }
    a.points.push_back(ProbVector::uniform(m).vec());
  }
  a.refine_step = 1.0 / static_cast<double>(divisions);
  return a;
}

ActionSet orthant_actions(std::size_t dim, double hi, std::size_t per_axis) {
  ActionSet a;
  a.points = box_grid(dim, 0.0, hi, per_axis);
  a.geometry = ActionGeometry::Orthant;
  a.refine_step = hi / static_cast<double>(per_axis - 1);
  return a;
}

LossTable tabulate(const Loss& loss, const ActionSet& actions, Execution exec) {
  if (actions.points.empty()) throw InvalidInput("tabulate: empty action set");
  LossTable t;
  t.m = loss.m;
  t.actions = actions.points;
  t.geometry = actions.geometry;
  t.refine_step = actions.refine_step;
  t.values.assign(actions.points.size() * loss.m, 0.0);
  for_each_index(actions.points.size(), exec, [&](std::size_t i) {
    for (std::size_t j = 0; j < loss.m; ++j) t.values[i * loss.m + j] = loss.value(j, t.actions[i]);
  });
  return t;
}

Optimum compass_minimize(const std::function<double(CSpan)>& f, Vec x, double step,
                         ActionGeometry geometry, double min_step, std::size_t max_evals) {
  const std::size_t d = x.size();
  double fx = sanitize_min(f(x));
  std::size_t evals = 1;
  Vec y(d);
  while (step >= min_step && evals < max_evals) {
    bool improved = false;
    if (geometry == ActionGeometry::Simplex) {
      for (std::size_t a = 0; a < d && !improved; ++a) {
        for (std::size_t b = 0; b < d && !improved; ++b) {
          if (a == b || x[b] <= 0.0) continue;
          const double s = std::min(step, x[b]);
          y = x;
          y[a] += s;
          y[b] -= s;
          if (s == x[b]) y[b] = 0.0;
          const double fy = sanitize_min(f(y));
          ++evals;
          if (fy < fx) {
            x.swap(y);
            fx = fy;
            improved = true;
          }
        }
      }
    } else {
      for (std::size_t i = 0; i < d && !improved; ++i) {
        for (int sgn : {1, -1}) {
          y = x;
          y[i] += sgn * step;
          if (geometry == ActionGeometry::Orthant && y[i] < 0.0) {
            if (x[i] == 0.0) continue;
            y[i] = 0.0;
          }
          const double fy = sanitize_min(f(y));
          ++evals;
          if (fy < fx) {
            x.swap(y);
            fx = fy;
            improved = true;
            break;
          }
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return {fx, std::move(x)};
}

Optimum entropy_of_loss(const Loss& loss, const LossTable& table, CSpan eta, bool refine) {
  if (table.actions.empty()) throw InvalidInput("entropy_of_loss: empty action set");
  if (eta.size() != table.m) throw InvalidInput("entropy_of_loss: eta has wrong dimension");
  const std::size_t m = table.m;
  double best = kInf;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < table.actions.size(); ++i) {
    double r = 0.0;
    const double* z = &table.values[i * m];
    for (std::size_t j = 0; j < m; ++j) {
      if (eta[j] != 0.0) r += eta[j] * z[j];
    }
    r = sanitize_min(r);
    if (r < best) {
      best = r;
      arg = i;
    }
  }
  Optimum out{best, table.actions[arg]};
  if (refine && table.refine_step > 0.0 && std::isfinite(best)) {
    auto f = [&](CSpan a) { return risk(loss, eta, a); };
    Optimum polished = compass_minimize(f, out.point, table.refine_step, table.geometry);
    if (polished.value < out.value) out = std::move(polished);
  }
  return out;
}

Optimum entropy_of_loss(const Loss& loss, const ActionSet& actions, CSpan eta, bool refine) {
  return entropy_of_loss(loss, tabulate(loss, actions, Execution::Serial), eta, refine);
}

Optimum maximize_on_simplex(const std::function<double(CSpan)>& g, std::size_t m,
                            const SimplexSearch& opts) {
  if (m == 0) throw InvalidInput("maximize_on_simplex: empty simplex");
  auto neg = [&](CSpan p) {
    const double v = g(p);
    return std::isnan(v) ? kInf : -v;
  };
  std::vector<Vec> starts;
  std::size_t divisions = opts.divisions;
  if (divisions == 0) divisions = m == 2 ? 200 : m == 3 ? 60 : m == 4 ? 24 : 0;
  if (divisions > 0 && m <= 4) {
    starts = simplex_mesh(m, divisions);
  } else {
    Rng rng = stream_rng(opts.seed, m);
    for (std::size_t i = 0; i < opts.samples; ++i) starts.push_back(sample_dirichlet(m, 1.0, rng));
    for (std::size_t j = 0; j < m; ++j) starts.push_back(ProbVector::vertex(m, j).vec());
    starts.push_back(ProbVector::uniform(m).vec());
    divisions = 20;
  }
  double best = kInf;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const double v = neg(starts[i]);
    if (v < best) {
      best = v;
      arg = i;
    }
  }
  Optimum o = compass_minimize(neg, starts[arg], 1.0 / static_cast<double>(divisions),
                               ActionGeometry::Simplex, opts.min_step, 200000);
  return {-o.value, std::move(o.point)};
}

}  // namespace mcloss
