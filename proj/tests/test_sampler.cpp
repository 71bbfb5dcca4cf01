#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/rng.hpp"
#include "core/sobol.hpp"

#include <algorithm>
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

// Star-discrepancy estimator over anchored boxes on a fixed evaluation
// grid; enough resolution to separate Sobol from pseudo-random at n = 1024.
double star_discrepancy_estimate(const std::vector<std::pair<double, double>>& pts) {
    const int grid = 64;
    const double n = static_cast<double>(pts.size());
    double worst = 0.0;
    std::vector<std::pair<double, double>> sorted = pts;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 1; i <= grid; ++i) {
        const double bx = static_cast<double>(i) / grid;
        for (int j = 1; j <= grid; ++j) {
            const double by = static_cast<double>(j) / grid;
            std::size_t count = 0;
            for (const auto& [x, y] : sorted) {
                if (x > bx) break;
                if (y <= by) ++count;
            }
            worst = std::max(worst, std::abs(static_cast<double>(count) / n - bx * by));
        }
    }
    return worst;
}

} // namespace

TEST_CASE("Sobol origin and first point") {
    Box2 unit{0.0, 1.0, 0.0, 1.0};
    auto pts = sobol_points(4, unit, 0);
    CHECK(pts[0].first == 0.0);
    CHECK(pts[0].second == 0.0);
    CHECK(pts[1].first == 0.5);
    CHECK(pts[1].second == 0.5);
    // Gray-code order continues (0.75, 0.25), (0.25, 0.75).
    CHECK(pts[2].first == 0.75);
    CHECK(pts[2].second == 0.25);
    CHECK(pts[3].first == 0.25);
    CHECK(pts[3].second == 0.75);
}

TEST_CASE("skip shifts the sequence") {
    Box2 unit{0.0, 1.0, 0.0, 1.0};
    auto all = sobol_points(16, unit, 0);
    auto tail = sobol_points(8, unit, 8);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(tail[i].first == all[i + 8].first);
        CHECK(tail[i].second == all[i + 8].second);
    }
}

TEST_CASE("Sobol beats pseudo-random on star discrepancy") {
    Box2 unit{0.0, 1.0, 0.0, 1.0};
    const std::size_t n = 1024;
    const double sobol_disc = star_discrepancy_estimate(sobol_points(n, unit, 0));

    std::vector<double> prng_discs;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Rng rng(seed);
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < n; ++i) {
            pts.emplace_back(rng.next_uniform(), rng.next_uniform());
        }
        prng_discs.push_back(star_discrepancy_estimate(pts));
    }
    std::sort(prng_discs.begin(), prng_discs.end());
    const double median = 0.5 * (prng_discs[4] + prng_discs[5]);
    CHECK(sobol_disc < median);
}

TEST_CASE("training sets honour the published default sizes") {
    TrainingSizes sizes;
    CHECK(sizes.n_collocation == 8192);
    CHECK(sizes.n_terminal == 1024);
    CHECK(sizes.n_boundary == 512);

    MarketParams p = canonical();
    TrainingSets sets = sample_training_sets(p, sizes, 1);
    CHECK(sets.x_c.size() == 8192);
    CHECK(sets.x_ic.size() == 1024);
    CHECK(sets.x_bc.size() == 512);
}

TEST_CASE("boundary points sit on the edges, split evenly") {
    MarketParams p = canonical();
    TrainingSets sets = sample_training_sets(p, TrainingSizes{}, 5);
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 0; i < sets.x_bc.size(); ++i) {
        if (sets.x_bc[i] == p.x_min()) ++lo;
        else if (sets.x_bc[i] == p.x_max()) ++hi;
        CHECK(sets.t_bc[i] >= 0.0);
        CHECK(sets.t_bc[i] <= p.maturity);
    }
    CHECK(lo == 256);
    CHECK(hi == 256);
}

TEST_CASE("terminal points live at t = T inside the x-range") {
    MarketParams p = canonical();
    TrainingSets sets = sample_training_sets(p, TrainingSizes{}, 5);
    for (std::size_t i = 0; i < sets.x_ic.size(); ++i) {
        CHECK(sets.t_ic[i] == p.maturity);
        CHECK(sets.x_ic[i] >= p.x_min());
        CHECK(sets.x_ic[i] <= p.x_max());
    }
}

TEST_CASE("same seed reproduces identical sets") {
    MarketParams p = canonical();
    TrainingSets a = sample_training_sets(p, TrainingSizes{}, 17);
    TrainingSets b = sample_training_sets(p, TrainingSizes{}, 17);
    CHECK(a.x_c == b.x_c);
    CHECK(a.t_c == b.t_c);
    CHECK(a.x_ic == b.x_ic);
    CHECK(a.t_bc == b.t_bc);

    TrainingSets c = sample_training_sets(p, TrainingSizes{}, 18);
    CHECK(a.x_ic != c.x_ic);
}

TEST_CASE("collocation points fill every cell of an 8x8 partition") {
    MarketParams p = canonical();
    TrainingSets sets = sample_training_sets(p, TrainingSizes{}, 1);
    bool hit[8][8] = {};
    for (std::size_t i = 0; i < sets.x_c.size(); ++i) {
        int cx = static_cast<int>(8.0 * (sets.x_c[i] - p.x_min()) / (p.x_max() - p.x_min()));
        int ct = static_cast<int>(8.0 * sets.t_c[i] / p.maturity);
        cx = std::min(cx, 7);
        ct = std::min(ct, 7);
        hit[cx][ct] = true;
    }
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) CHECK(hit[i][j]);
    }
}

TEST_CASE("positive sizes are required") {
    MarketParams p = canonical();
    TrainingSizes sizes;
    sizes.n_collocation = 0;
    CHECK_THROWS_AS(sample_training_sets(p, sizes, 1), invalid_input);
}
