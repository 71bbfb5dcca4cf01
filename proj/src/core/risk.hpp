#pragma once

#include "common.hpp"
#include "market.hpp"
#include "solution.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace jumpwave {

struct GreeksAt {
    double spot = 0.0;
    double time = 0.0;
    double delta = 0.0; // dV/dS = u_x / S
    double gamma = 0.0; // d2V/dS2 = (u_xx - u_x) / S^2
    double theta = 0.0; // dV/dt (calendar time)
};

GreeksAt greeks(const Solution& solution, double spot, double time);

// Price functor V(spot, t); either the trained surrogate or a reference
// pricer wrapped by the caller.
using PriceFn = std::function<double(double, double)>;

// Long-one-call P&L losses over `horizon`:
//   L_i = V(spot0, 0) - e^{-r h} V(S_h^(i), h)
std::vector<double> pnl_losses(const MarketParams& params, const PriceFn& price,
                               double spot0, double horizon, std::int64_t n_paths,
                               std::uint64_t seed);

struct VarCvar {
    double var = 0.0;
    double cvar = 0.0;
};

// Empirical quantile with the "higher" order-statistic rule
// (index ceil(level*(n-1)), zero-based); CVaR averages the samples at or
// beyond it.
VarCvar var_cvar(const std::vector<double>& losses, double level);

// 100 * mean(|model - reference| / reference).
double mean_relative_error(const std::vector<double>& model,
                           const std::vector<double>& reference);

struct RiskConfig {
    double spot0 = 0.0;        // 0 = use the strike
    double horizon = 10.0 / 252.0;
    std::int64_t n_paths = 100000;
    double level = 0.99;
};

struct RiskReport {
    std::string scenario_id;
    double mean_rel_error_pct = 0.0;
    double var = 0.0;
    double cvar = 0.0;
    double level = 0.99;
    std::int64_t n_paths = 0;
    std::uint64_t seed = 0;
    double loss_q05 = 0.0, loss_q50 = 0.0, loss_q95 = 0.0; // sample summary
};

RiskReport risk_report(const MarketParams& params, const PriceFn& price,
                       const std::string& scenario_id, double mean_rel_error_pct,
                       const RiskConfig& cfg, std::uint64_t seed);

} // namespace jumpwave
