#include "risk.hpp"

#include <algorithm>
#include <cmath>

namespace jumpwave {

GreeksAt greeks(const Solution& solution, double spot, double time) {
    require(spot > 0.0, "spot must be positive");
    Solution::PointEval e = solution.eval(std::log(spot), time);

    GreeksAt g;
    g.spot = spot;
    g.time = time;
    g.delta = e.u_x / spot;
    g.gamma = (e.u_xx - e.u_x) / (spot * spot);
    g.theta = e.u_t;
    return g;
}

std::vector<double> pnl_losses(const MarketParams& params, const PriceFn& price,
                               double spot0, double horizon, std::int64_t n_paths,
                               std::uint64_t seed) {
    require(horizon > 0.0 && horizon < params.maturity, "horizon must lie in (0, maturity)");
    const double v0 = price(spot0, 0.0);
    const double discount = std::exp(-params.r * horizon);

    auto paths = simulate_terminal(params, spot0, horizon, n_paths, seed);
    std::vector<double> losses;
    losses.reserve(paths.size());
    for (const PathSample& p : paths) {
        losses.push_back(v0 - discount * price(p.terminal_price, horizon));
    }
    return losses;
}

VarCvar var_cvar(const std::vector<double>& losses, double level) {
    require(!losses.empty(), "loss sample set must be nonempty");
    require(level > 0.0 && level < 1.0, "level must lie in (0, 1)");

    std::vector<double> sorted = losses;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double pos = level * static_cast<double>(n - 1);
    std::size_t idx = static_cast<std::size_t>(std::ceil(pos));
    if (idx >= n) idx = n - 1;

    VarCvar out;
    out.var = sorted[idx];
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = idx; i < n; ++i) {
        sum += sorted[i];
        ++count;
    }
    out.cvar = sum / static_cast<double>(count);
    return out;
}

double mean_relative_error(const std::vector<double>& model,
                           const std::vector<double>& reference) {
    require(!model.empty() && model.size() == reference.size(),
            "vectors must be nonempty and of equal length");
    double acc = 0.0;
    for (std::size_t i = 0; i < model.size(); ++i) {
        require(reference[i] > 0.0, "reference prices must be positive");
        acc += std::abs(model[i] - reference[i]) / reference[i];
    }
    return 100.0 * acc / static_cast<double>(model.size());
}

RiskReport risk_report(const MarketParams& params, const PriceFn& price,
                       const std::string& scenario_id, double mean_rel_error_pct,
                       const RiskConfig& cfg, std::uint64_t seed) {
    RiskReport rep;
    rep.scenario_id = scenario_id;
    rep.mean_rel_error_pct = mean_rel_error_pct;
    rep.level = cfg.level;
    rep.n_paths = cfg.n_paths;
    rep.seed = seed;

    const double spot0 = cfg.spot0 > 0.0 ? cfg.spot0 : params.strike;
    std::vector<double> losses = pnl_losses(params, price, spot0, cfg.horizon, cfg.n_paths, seed);

    VarCvar vc = var_cvar(losses, cfg.level);
    rep.var = vc.var;
    rep.cvar = vc.cvar;

    std::vector<double> sorted = losses;
    std::sort(sorted.begin(), sorted.end());
    auto quantile = [&sorted](double q) {
        const double pos = q * static_cast<double>(sorted.size() - 1);
        return sorted[static_cast<std::size_t>(std::llround(pos))];
    };
    rep.loss_q05 = quantile(0.05);
    rep.loss_q50 = quantile(0.50);
    rep.loss_q95 = quantile(0.95);
    return rep;
}

} // namespace jumpwave
