#pragma once

#include "common.hpp"
#include "market.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace jumpwave {

struct Box2 {
    double x_lo, x_hi;
    double y_lo, y_hi;
};

// First n points (after `skip`) of the 2-D Sobol sequence in Gray-code
// order with the standard direction numbers (second dimension generated
// by m_k = 2 m_{k-1} xor m_{k-1}, i.e. m = 1, 3, 5, 15, 17, ...),
// affinely mapped onto the box.
std::vector<std::pair<double, double>> sobol_points(std::size_t n, const Box2& box,
                                                    std::size_t skip = 0);

struct TrainingSizes {
    std::size_t n_collocation = 8192;
    std::size_t n_terminal = 1024;
    std::size_t n_boundary = 512; // total over both edges
};

struct TrainingSets {
    std::vector<double> x_c, t_c;   // interior collocation points
    std::vector<double> x_ic, t_ic; // terminal points, t = T
    std::vector<double> x_bc, t_bc; // boundary points, x in {x_min, x_max}
};

// Collocation from the Sobol sequence over [x_min, x_max] x [0, T];
// terminal abscissae and boundary times pseudo-random from `seed`,
// boundary points split evenly between the two edges.
TrainingSets sample_training_sets(const MarketParams& params, const TrainingSizes& sizes,
                                  std::uint64_t seed, std::size_t sobol_skip = 0);

} // namespace jumpwave
