#pragma once

#include "common.hpp"
#include "market.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace jumpwave {

// Standard closed form; tau = 0 returns the payoff.
double black_scholes_call(double spot, double strike, double r, double sigma, double tau);

// Poisson-weighted mixture of Black-Scholes prices conditioned on jump
// count, martingale-consistent with simulate_terminal. n_terms = 0 picks
// the smallest truncation whose Poisson tail is below 1e-12.
double merton_series_call(const MarketParams& params, double spot, double tau,
                          int n_terms = 0);

// E[exp(i nu ln S_tau)] under the risk-neutral dynamics.
std::complex<double> characteristic_function(const MarketParams& params, double spot,
                                             std::complex<double> nu, double tau);

struct CarrMadanResult {
    double price = 0.0;
    std::vector<double> log_strikes;
    std::vector<double> calls;
    double refinement_delta = 0.0; // |price(n) - price(2n)|
    bool converged = false;
};

// Damped-call-transform FFT over a log-strike grid with Simpson weights;
// the price at `strike` is interpolated off the grid. The result carries
// the grid-doubling check used to flag non-convergence.
CarrMadanResult carr_madan_call(const MarketParams& params, double spot, double tau,
                                double alpha = 1.5, std::size_t n_fft = 4096,
                                double eta = 0.25);

// Discounted mean payoff over simulated terminal prices; the standard
// error comes along for 3-sigma agreement checks.
struct McPrice {
    double price = 0.0;
    double std_error = 0.0;
};

McPrice monte_carlo_call(const MarketParams& params, double spot, double tau,
                         std::int64_t n_paths, std::uint64_t seed);

} // namespace jumpwave
