#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mcloss/simplex.hpp"

namespace mcloss {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);
// Independent stream for sample `index` of a sweep seeded with `seed`.
Rng stream_rng(std::uint64_t seed, std::uint64_t index);

// All points of the simplex with coordinates in {0, 1/d, ..., 1}.
std::vector<Vec> simplex_mesh(std::size_t m, std::size_t divisions);
// Mesh points whose entries are all at least min_entry.
std::vector<Vec> simplex_mesh_min(std::size_t m, std::size_t divisions, double min_entry);
// Tensor grid on [lo, hi]^dim with per_axis points per coordinate.
std::vector<Vec> box_grid(std::size_t dim, double lo, double hi, std::size_t per_axis);

Vec sample_dirichlet(std::size_t m, double alpha, Rng& rng);
// Mixture of Dirichlet(1), Dirichlet(0.1) and random faces.
Vec sample_simplex_mixed(std::size_t m, Rng& rng);
// Interior point with every entry at least floor.
Vec sample_simplex_interior(std::size_t m, double floor, Rng& rng);
// Margin vector mixing a box [-scale, scale]^dim with points near the
// embedded simplex and its vertices.
Vec sample_margin(std::size_t dim, double scale, Rng& rng);

}  // namespace mcloss
