#include "pricers.hpp"

#include "fft.hpp"

#include <cmath>

namespace jumpwave {

namespace {

double norm_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

} // namespace

double black_scholes_call(double spot, double strike, double r, double sigma, double tau) {
    require(spot > 0.0 && strike > 0.0, "spot and strike must be positive");
    require(tau >= 0.0 && sigma >= 0.0, "tau and sigma must be nonnegative");
    if (tau == 0.0) return std::max(spot - strike, 0.0);

    const double sd = sigma * std::sqrt(tau);
    if (sd < 1e-12) return std::max(spot - strike * std::exp(-r * tau), 0.0);

    const double d1 = (std::log(spot / strike) + (r + 0.5 * sigma * sigma) * tau) / sd;
    const double d2 = d1 - sd;
    return spot * norm_cdf(d1) - strike * std::exp(-r * tau) * norm_cdf(d2);
}

double merton_series_call(const MarketParams& params, double spot, double tau, int n_terms) {
    params.validate();
    require(spot > 0.0, "spot must be positive");
    require(tau > 0.0, "tau must be positive");

    const double kappa = params.jump_compensator();
    const double lambda_p = params.lambda * (1.0 + kappa);
    const double mean = lambda_p * tau;

    if (params.lambda == 0.0) {
        return black_scholes_call(spot, params.strike, params.r, params.sigma, tau);
    }

    // Auto truncation: extend until the remaining Poisson tail < 1e-12.
    int max_n = n_terms;
    if (max_n <= 0) {
        double term = std::exp(-mean);
        double cdf = term;
        max_n = 0;
        while (1.0 - cdf > 1e-12 && max_n < 500) {
            ++max_n;
            term *= mean / max_n;
            cdf += term;
        }
        require(max_n < 500, "Poisson truncation failed to converge");
    } else {
        double term = std::exp(-mean);
        double cdf = term;
        for (int n = 1; n <= max_n; ++n) {
            term *= mean / n;
            cdf += term;
        }
        if (1.0 - cdf > 1e-12) {
            throw numeric_error("merton series truncated with Poisson tail above 1e-12");
        }
    }

    const double jump_drift = params.mu_j + 0.5 * params.sigma_j * params.sigma_j;
    double price = 0.0;
    double weight = std::exp(-mean);
    for (int n = 0; n <= max_n; ++n) {
        if (n > 0) weight *= mean / n;
        const double sigma_n =
            std::sqrt(params.sigma * params.sigma + n * params.sigma_j * params.sigma_j / tau);
        const double r_n = params.r - params.lambda * kappa + n * jump_drift / tau;
        price += weight * black_scholes_call(spot, params.strike, r_n, sigma_n, tau);
    }
    return price;
}

std::complex<double> characteristic_function(const MarketParams& params, double spot,
                                             std::complex<double> nu, double tau) {
    params.validate();
    require(spot > 0.0, "spot must be positive");
    require(tau >= 0.0, "tau must be nonnegative");

    const std::complex<double> i(0.0, 1.0);
    const double kappa = params.jump_compensator();
    const double sig2 = params.sigma * params.sigma;
    std::complex<double> drift =
        i * nu * (std::log(spot) + (params.r - 0.5 * sig2 - params.lambda * kappa) * tau);
    std::complex<double> diffusion = -0.5 * sig2 * nu * nu * tau;
    std::complex<double> jump =
        params.lambda * tau *
        (std::exp(i * nu * params.mu_j - 0.5 * params.sigma_j * params.sigma_j * nu * nu) - 1.0);
    return std::exp(drift + diffusion + jump);
}

namespace {

double carr_madan_grid_price(const MarketParams& params, double spot, double tau,
                             double alpha, std::size_t n_fft, double eta,
                             std::vector<double>* log_strikes, std::vector<double>* calls) {
    const std::complex<double> i(0.0, 1.0);
    const double lambda_k = 2.0 * M_PI / (static_cast<double>(n_fft) * eta);
    const double b = 0.5 * static_cast<double>(n_fft) * lambda_k;
    const double discount = std::exp(-params.r * tau);

    std::vector<cplx> input(n_fft);
    for (std::size_t j = 0; j < n_fft; ++j) {
        const double v = static_cast<double>(j) * eta;
        std::complex<double> arg(v, -(alpha + 1.0));
        std::complex<double> denom(alpha * alpha + alpha - v * v, (2.0 * alpha + 1.0) * v);
        std::complex<double> psi =
            discount * characteristic_function(params, spot, arg, tau) / denom;
        const double simpson = (j == 0) ? 1.0 : ((j % 2 == 1) ? 4.0 : 2.0);
        input[j] = std::exp(i * (b * v)) * psi * (eta * simpson / 3.0);
    }
    fft_inplace(input, false);

    std::vector<double> ks(n_fft), cs(n_fft);
    for (std::size_t m = 0; m < n_fft; ++m) {
        const double k = -b + static_cast<double>(m) * lambda_k;
        ks[m] = k;
        cs[m] = std::exp(-alpha * k) * input[m].real() / M_PI;
    }

    // Cubic interpolation at ln(strike).
    const double kq = std::log(params.strike);
    require(kq > ks.front() + lambda_k && kq < ks.back() - 2.0 * lambda_k,
            "strike outside Carr-Madan log-strike grid");
    double s = (kq - ks.front()) / lambda_k;
    long base = static_cast<long>(std::floor(s)) - 1;
    base = std::clamp(base, 0L, static_cast<long>(n_fft) - 4);
    const double u = s - static_cast<double>(base);
    const double w0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
    const double w1 = u * (u - 2.0) * (u - 3.0) / 2.0;
    const double w2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
    const double w3 = u * (u - 1.0) * (u - 2.0) / 6.0;
    const std::size_t bb = static_cast<std::size_t>(base);
    double price = w0 * cs[bb] + w1 * cs[bb + 1] + w2 * cs[bb + 2] + w3 * cs[bb + 3];

    if (log_strikes) *log_strikes = std::move(ks);
    if (calls) *calls = std::move(cs);
    return price;
}

} // namespace

CarrMadanResult carr_madan_call(const MarketParams& params, double spot, double tau,
                                double alpha, std::size_t n_fft, double eta) {
    params.validate();
    require(spot > 0.0 && tau > 0.0, "spot and tau must be positive");
    require(alpha > 0.0, "damping alpha must be positive");
    require(is_power_of_two(n_fft) && n_fft >= 64, "n_fft must be a power of two >= 64");
    require(eta > 0.0, "eta must be positive");

    CarrMadanResult res;
    res.price = carr_madan_grid_price(params, spot, tau, alpha, n_fft, eta,
                                      &res.log_strikes, &res.calls);
    const double refined =
        carr_madan_grid_price(params, spot, tau, alpha, 2 * n_fft, eta, nullptr, nullptr);
    res.refinement_delta = std::abs(refined - res.price);
    res.converged = res.refinement_delta <= 1e-6;
    res.price = refined;
    if (!res.converged) {
        throw numeric_error("Carr-Madan grid refinement moved the price by more than 1e-6");
    }
    return res;
}

McPrice monte_carlo_call(const MarketParams& params, double spot, double tau,
                         std::int64_t n_paths, std::uint64_t seed) {
    auto paths = simulate_terminal(params, spot, tau, n_paths, seed);
    const double discount = std::exp(-params.r * tau);
    double sum = 0.0, sum_sq = 0.0;
    for (const PathSample& p : paths) {
        double v = discount * std::max(p.terminal_price - params.strike, 0.0);
        sum += v;
        sum_sq += v * v;
    }
    const double n = static_cast<double>(n_paths);
    McPrice out;
    out.price = sum / n;
    const double var = std::max(sum_sq / n - out.price * out.price, 0.0);
    out.std_error = std::sqrt(var / n);
    return out;
}

} // namespace jumpwave
