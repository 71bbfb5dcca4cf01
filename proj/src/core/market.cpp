#include "market.hpp"

#include "rng.hpp"

#include <cmath>

namespace jumpwave {

void MarketParams::validate() const {
    require(std::isfinite(r), "r must be finite");
    require(sigma > 0.0 && std::isfinite(sigma), "sigma must be > 0");
    require(sigma_j > 0.0 && std::isfinite(sigma_j), "sigma_j must be > 0");
    require(lambda >= 0.0 && std::isfinite(lambda), "lambda must be >= 0");
    require(strike > 0.0, "strike must be > 0");
    require(maturity > 0.0, "maturity must be > 0");
    require(std::isfinite(mu_j), "mu_j must be finite");
    require(s_min > 0.0 && s_min < strike && strike < s_max,
            "domain must satisfy 0 < s_min < strike < s_max");
}

double log_jump_density(double y, const MarketParams& params) {
    double z = (y - params.mu_j) / params.sigma_j;
    return std::exp(-0.5 * z * z) / (params.sigma_j * std::sqrt(2.0 * M_PI));
}

double payoff_call(double x, double strike) {
    return std::max(std::exp(x) - strike, 0.0);
}

std::vector<PathSample> simulate_terminal(const MarketParams& params, double s0,
                                          double horizon, std::int64_t n_paths,
                                          std::uint64_t seed) {
    params.validate();
    require(n_paths >= 1, "n_paths must be >= 1");
    require(horizon > 0.0 && horizon <= params.maturity,
            "horizon must lie in (0, maturity]");
    require(s0 > 0.0, "s0 must be > 0");

    const double kappa = params.jump_compensator();
    const double drift =
        (params.r - params.lambda * kappa - 0.5 * params.sigma * params.sigma) * horizon;
    const double vol = params.sigma * std::sqrt(horizon);
    const double jump_mean = params.lambda * horizon;

    Rng rng(seed);
    std::vector<PathSample> out;
    out.reserve(static_cast<std::size_t>(n_paths));
    for (std::int64_t i = 0; i < n_paths; ++i) {
        double z = rng.next_normal();
        int n_jumps = rng.next_poisson(jump_mean);
        double jump_sum = 0.0;
        for (int k = 0; k < n_jumps; ++k) {
            jump_sum += params.mu_j + params.sigma_j * rng.next_normal();
        }
        out.push_back({s0 * std::exp(drift + vol * z + jump_sum), n_jumps});
    }
    return out;
}

} // namespace jumpwave
