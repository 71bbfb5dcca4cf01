#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/market.hpp"

#include <cmath>

using namespace jumpwave;

namespace {

MarketParams canonical() {
    MarketParams p;
    p.r = 0.05;
    p.sigma = 0.2;
    p.strike = 100.0;
    p.maturity = 1.0;
    p.lambda = 0.1;
    p.mu_j = -0.005;
    p.sigma_j = 0.1;
    p.s_min = 20.0;
    p.s_max = 300.0;
    return p;
}

} // namespace

TEST_CASE("log_jump_density point values") {
    MarketParams p = canonical();
    p.mu_j = 0.0;
    p.sigma_j = 1.0;
    CHECK(log_jump_density(0.0, p) == doctest::Approx(0.3989422804014327).epsilon(1e-12));

    p.mu_j = -0.31;
    p.sigma_j = 0.17;
    CHECK(log_jump_density(p.mu_j, p) ==
          doctest::Approx(1.0 / (p.sigma_j * std::sqrt(2.0 * M_PI))).epsilon(1e-12));
}

TEST_CASE("log_jump_density integrates to one (trapezoid, 4096 nodes)") {
    MarketParams p = canonical();
    p.mu_j = -0.12;
    p.sigma_j = 0.23;
    const double lo = p.mu_j - 8.0 * p.sigma_j;
    const double hi = p.mu_j + 8.0 * p.sigma_j;
    const int n = 4096;
    const double h = (hi - lo) / (n - 1);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        sum += w * log_jump_density(lo + i * h, p);
    }
    CHECK(std::abs(sum * h - 1.0) <= 1e-9);
}

TEST_CASE("log_jump_density is symmetric about its mean") {
    MarketParams p = canonical();
    p.mu_j = 0.07;
    p.sigma_j = 0.4;
    for (double d : {0.01, 0.3, 1.0, 2.5}) {
        CHECK(log_jump_density(p.mu_j + d, p) ==
              doctest::Approx(log_jump_density(p.mu_j - d, p)).epsilon(1e-14));
    }
}

TEST_CASE("payoff_call") {
    CHECK(payoff_call(std::log(120.0), 100.0) == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(payoff_call(std::log(80.0), 100.0) == 0.0);
    CHECK(payoff_call(std::log(100.0), 100.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("payoff_call convex and nondecreasing in the price") {
    double prev = payoff_call(std::log(10.0), 100.0);
    double prev_slope = -1.0;
    for (double s = 20.0; s <= 250.0; s += 10.0) {
        double v = payoff_call(std::log(s), 100.0);
        CHECK(v >= prev - 1e-12);
        double slope = (v - prev) / 10.0;
        CHECK(slope >= prev_slope - 1e-12);
        prev = v;
        prev_slope = slope;
    }
}

TEST_CASE("simulate_terminal degenerates to pure drift") {
    MarketParams p = canonical();
    p.lambda = 0.0;
    p.sigma = 1e-8;
    auto paths = simulate_terminal(p, 100.0, 0.5, 100, 42);
    const double expected = 100.0 * std::exp(p.r * 0.5);
    for (const PathSample& s : paths) {
        CHECK(std::abs(s.terminal_price - expected) <= 1e-5);
        CHECK(s.jump_count == 0);
    }
}

TEST_CASE("discounted terminal price is a martingale") {
    MarketParams p = canonical();
    const double s0 = 100.0;
    const double h = 1.0;
    const int n = 1000000;
    auto paths = simulate_terminal(p, s0, h, n, 7);

    const double disc = std::exp(-p.r * h);
    double sum = 0.0, sum_sq = 0.0;
    for (const PathSample& s : paths) {
        double v = disc * s.terminal_price;
        sum += v;
        sum_sq += v * v;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sum_sq / n - mean * mean);
    CHECK(std::abs(mean - s0) <= 3.0 * sd / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("martingale property holds across parameter sets") {
    for (double lambda : {0.0, 0.5, 1.5}) {
        for (double mu_j : {-0.3, 0.0, 0.1}) {
            MarketParams p = canonical();
            p.lambda = lambda;
            p.mu_j = mu_j;
            p.sigma_j = 0.2;
            const int n = 200000;
            auto paths = simulate_terminal(p, 100.0, 0.75, n, 11);
            const double disc = std::exp(-p.r * 0.75);
            double sum = 0.0, sum_sq = 0.0;
            for (const PathSample& s : paths) {
                double v = disc * s.terminal_price;
                sum += v;
                sum_sq += v * v;
            }
            const double mean = sum / n;
            const double sd = std::sqrt(sum_sq / n - mean * mean);
            CHECK(std::abs(mean - 100.0) <= 3.0 * sd / std::sqrt(static_cast<double>(n)));
        }
    }
}

TEST_CASE("jump counts match the Poisson mean") {
    MarketParams p = canonical();
    p.lambda = 0.8;
    const double h = 0.5;
    const int n = 1000000;
    auto paths = simulate_terminal(p, 100.0, h, n, 3);
    double mean = 0.0;
    for (const PathSample& s : paths) mean += s.jump_count;
    mean /= n;
    const double expected = p.lambda * h;
    CHECK(std::abs(mean - expected) <= 3.0 * std::sqrt(expected / n));
}

TEST_CASE("simulate_terminal is deterministic in the seed") {
    MarketParams p = canonical();
    auto a = simulate_terminal(p, 100.0, 0.5, 1000, 123);
    auto b = simulate_terminal(p, 100.0, 0.5, 1000, 123);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].terminal_price == b[i].terminal_price);
        CHECK(a[i].jump_count == b[i].jump_count);
    }
    auto c = simulate_terminal(p, 100.0, 0.5, 1000, 124);
    CHECK(a[0].terminal_price != c[0].terminal_price);
}

TEST_CASE("simulate_terminal rejects bad arguments") {
    MarketParams p = canonical();
    CHECK_THROWS_AS(simulate_terminal(p, 100.0, 0.5, 0, 1), invalid_input);
    CHECK_THROWS_AS(simulate_terminal(p, 100.0, 0.0, 10, 1), invalid_input);
    CHECK_THROWS_AS(simulate_terminal(p, 100.0, -0.1, 10, 1), invalid_input);
    CHECK_THROWS_AS(simulate_terminal(p, 100.0, p.maturity + 0.1, 10, 1), invalid_input);
}

TEST_CASE("MarketParams validation") {
    MarketParams p = canonical();
    CHECK_NOTHROW(p.validate());
    p.sigma = 0.0;
    CHECK_THROWS_AS(p.validate(), invalid_input);
    p = canonical();
    p.s_min = 150.0; // violates s_min < strike
    CHECK_THROWS_AS(p.validate(), invalid_input);
    p = canonical();
    p.lambda = -0.1;
    CHECK_THROWS_AS(p.validate(), invalid_input);
}
