#pragma once

#include "common.hpp"

#include <cstdint>
#include <vector>

namespace jumpwave {

// Risk-neutral model tuple for the jump-diffusion dynamics plus the spatial
// working domain. All rates are per year, jump moments act on log price.
struct MarketParams {
    double r = 0.05;       // risk-free rate
    double sigma = 0.2;    // diffusion volatility
    double strike = 100.0;
    double maturity = 1.0; // T, years
    double lambda = 0.0;   // jump intensity, jumps/year
    double mu_j = 0.0;     // mean of log jump size
    double sigma_j = 0.1;  // std of log jump size
    double s_min = 20.0;   // spatial domain lower bound (price)
    double s_max = 300.0;  // spatial domain upper bound (price)

    void validate() const;

    double x_min() const { return std::log(s_min); }
    double x_max() const { return std::log(s_max); }

    // Jump compensator kappa = E[e^Y] - 1. The simulator subtracts
    // lambda*kappa from the drift so the discounted price is a martingale.
    double jump_compensator() const {
        return std::expm1(mu_j + 0.5 * sigma_j * sigma_j);
    }
};

struct PathSample {
    double terminal_price = 0.0;
    int jump_count = 0;
};

// Normal density of the log jump size, N(mu_j, sigma_j^2).
double log_jump_density(double y, const MarketParams& params);

// Call payoff in log-price coordinates: max(e^x - K, 0).
double payoff_call(double x, double strike);

// Exact sampling of the terminal price over `horizon` years starting from
// s0, under the martingale measure. Deterministic in (seed).
std::vector<PathSample> simulate_terminal(const MarketParams& params, double s0,
                                          double horizon, std::int64_t n_paths,
                                          std::uint64_t seed);

} // namespace jumpwave
