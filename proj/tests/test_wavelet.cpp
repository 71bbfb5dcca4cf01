#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/rng.hpp"
#include "core/wavelet.hpp"

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

// Central finite differences of atom value, the independent oracle for the
// analytic derivatives.
struct FdDerivs {
    double d_t, d_x, d_xx;
};

FdDerivs fd_derivs(const WaveletAtom& a, double x, double t, double h) {
    FdDerivs fd;
    fd.d_x = (atom_eval(a, x + h, t).value - atom_eval(a, x - h, t).value) / (2.0 * h);
    fd.d_t = (atom_eval(a, x, t + h).value - atom_eval(a, x, t - h).value) / (2.0 * h);
    fd.d_xx = (atom_eval(a, x + h, t).value - 2.0 * atom_eval(a, x, t).value +
               atom_eval(a, x - h, t).value) /
              (h * h);
    return fd;
}

} // namespace

TEST_CASE("atom value vanishes on the X = 0 line") {
    WaveletAtom a{2.0, 3.0, 1.5, 0.5, -1};
    const double x_center = a.k_x / a.j_x;
    for (double t : {0.0, 0.3, 1.0}) {
        CHECK(atom_eval(a, x_center, t).value == doctest::Approx(0.0).epsilon(1e-15));
    }
}

TEST_CASE("unit atom at (1,1)") {
    WaveletAtom a{1.0, 0.0, 1.0, 0.0, -1};
    CHECK(atom_eval(a, 1.0, 1.0).value == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("d_x at the spatial center") {
    WaveletAtom a{2.5, 1.0, 3.0, 0.7, -1};
    const double x_center = a.k_x / a.j_x;
    for (double t : {0.1, 0.6}) {
        const double T = a.j_t * t - a.k_t;
        const double expected = a.j_x * T * std::exp(-0.5 * T * T);
        CHECK(atom_eval(a, x_center, t).d_x == doctest::Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("analytic derivatives match central finite differences") {
    Rng rng(2024);
    const double h = 1e-5;
    for (int trial = 0; trial < 100; ++trial) {
        WaveletAtom a;
        a.j_x = rng.next_uniform(0.5, 12.0);
        a.k_x = rng.next_uniform(-10.0, 10.0);
        a.j_t = rng.next_uniform(0.5, 12.0);
        a.k_t = rng.next_uniform(-10.0, 10.0);
        const double x = rng.next_uniform(-3.0, 3.0);
        const double t = rng.next_uniform(-1.0, 2.0);

        AtomEval e = atom_eval(a, x, t);
        FdDerivs fd = fd_derivs(a, x, t, h);
        CHECK(std::abs(e.d_x - fd.d_x) / (1.0 + std::abs(e.d_x)) <= 1e-6);
        CHECK(std::abs(e.d_t - fd.d_t) / (1.0 + std::abs(e.d_t)) <= 1e-6);
        CHECK(std::abs(e.d_xx - fd.d_xx) / (1.0 + std::abs(e.d_xx)) <= 1e-6);
    }
}

TEST_CASE("atoms decay below 1e-12 of the peak beyond |X| > 9") {
    WaveletAtom a{1.0, 0.0, 1.0, 0.0, -1};
    const double peak = std::exp(-1.0); // at |X| = |T| = 1
    // scan |X| slightly above 9 at the most adverse T
    for (double X : {9.0, 9.5, 12.0}) {
        double worst = std::abs(X * 1.0 * std::exp(-0.5 * (X * X + 1.0)));
        CHECK(worst <= 1e-12 * peak);
    }
}

TEST_CASE("minimal family covers the domain") {
    MarketParams p = canonical();
    FamilyConfig cfg;
    cfg.j_x_min = 1.0 / (p.x_max() - p.x_min());
    cfg.j_x_levels = 1;
    cfg.j_t_min = 1.0;
    cfg.j_t_levels = 1;
    WaveletFamily fam = build_family(p, cfg);
    bool inside = false;
    for (const WaveletAtom& a : fam.atoms) {
        const double xc = a.k_x / a.j_x;
        const double tc = a.k_t / a.j_t;
        if (xc >= fam.x_lo && xc <= fam.x_hi && tc >= fam.t_lo && tc <= fam.t_hi) inside = true;
    }
    CHECK(inside);
}

TEST_CASE("published-scale configuration yields at least 2500 atoms") {
    MarketParams p = canonical();
    FamilyConfig cfg;
    cfg.j_x_min = 1.25;
    cfg.j_x_levels = 5;
    cfg.j_t_min = 1.5;
    cfg.j_t_levels = 4;
    WaveletFamily fam = build_family(p, cfg);
    CHECK(fam.size() >= 2500);
}

TEST_CASE("family construction is deterministic") {
    MarketParams p = canonical();
    FamilyConfig cfg;
    WaveletFamily a = build_family(p, cfg);
    WaveletFamily b = build_family(p, cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.atoms[i].j_x == b.atoms[i].j_x);
        CHECK(a.atoms[i].k_x == b.atoms[i].k_x);
        CHECK(a.atoms[i].j_t == b.atoms[i].j_t);
        CHECK(a.atoms[i].k_t == b.atoms[i].k_t);
    }
}

TEST_CASE("every x-profile appears exactly once") {
    MarketParams p = canonical();
    WaveletFamily fam = build_family(p, FamilyConfig{});
    for (std::size_t i = 0; i < fam.x_profiles.size(); ++i) {
        for (std::size_t j = i + 1; j < fam.x_profiles.size(); ++j) {
            bool same = fam.x_profiles[i].j_x == fam.x_profiles[j].j_x &&
                        fam.x_profiles[i].k_x == fam.x_profiles[j].k_x;
            CHECK_FALSE(same);
        }
    }
    for (const WaveletAtom& a : fam.atoms) {
        REQUIRE(a.x_profile >= 0);
        REQUIRE(a.x_profile < static_cast<int>(fam.x_profiles.size()));
        CHECK(fam.x_profiles[static_cast<std::size_t>(a.x_profile)].j_x == a.j_x);
        CHECK(fam.x_profiles[static_cast<std::size_t>(a.x_profile)].k_x == a.k_x);
    }
}

TEST_CASE("family construction rejects bad configurations") {
    MarketParams p = canonical();
    FamilyConfig cfg;
    cfg.j_x_levels = 0;
    CHECK_THROWS_AS(build_family(p, cfg), invalid_input);
    cfg = FamilyConfig{};
    cfg.j_x_min = -1.0;
    CHECK_THROWS_AS(build_family(p, cfg), invalid_input);
    cfg = FamilyConfig{};
    cfg.max_atoms = 10;
    CHECK_THROWS_AS(build_family(p, cfg), invalid_input);
}

TEST_CASE("design matrix entries equal atom_eval") {
    MarketParams p = canonical();
    FamilyConfig cfg;
    cfg.j_x_levels = 2;
    cfg.j_t_levels = 2;
    WaveletFamily fam = build_family(p, cfg);

    Rng rng(5);
    std::vector<double> xs, ts;
    for (int i = 0; i < 40; ++i) {
        xs.push_back(rng.next_uniform(fam.x_lo, fam.x_hi));
        ts.push_back(rng.next_uniform(0.0, p.maturity));
    }
    DesignMatrices m = design_matrices(fam, xs, ts);

    for (int trial = 0; trial < 20; ++trial) {
        auto pi = static_cast<Eigen::Index>(rng.next_u64() % xs.size());
        auto ai = static_cast<Eigen::Index>(rng.next_u64() % fam.size());
        AtomEval e = atom_eval(fam.atoms[static_cast<std::size_t>(ai)],
                               xs[static_cast<std::size_t>(pi)],
                               ts[static_cast<std::size_t>(pi)]);
        CHECK(m.W(pi, ai) == e.value);
        CHECK(m.DtW(pi, ai) == e.d_t);
        CHECK(m.DxW(pi, ai) == e.d_x);
        CHECK(m.DxxW(pi, ai) == e.d_xx);
    }
    CHECK(m.W.allFinite());
    CHECK(m.DtW.allFinite());
    CHECK(m.DxW.allFinite());
    CHECK(m.DxxW.allFinite());
}

TEST_CASE("one atom, one point at its center gives a zero W entry") {
    WaveletFamily fam;
    fam.atoms.push_back({2.0, 1.0, 1.0, 0.0, 0});
    fam.x_profiles.push_back({2.0, 1.0});
    fam.x_lo = -5.0;
    fam.x_hi = 5.0;
    fam.t_hi = 1.0;
    std::vector<double> xs{0.5}, ts{0.4}; // x = k_x / j_x
    DesignMatrices m = design_matrices(fam, xs, ts);
    CHECK(m.W(0, 0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("expansion equals the atom sum plus bias") {
    MarketParams p = canonical();
    FamilyConfig cfg;
    cfg.j_x_levels = 2;
    cfg.j_t_levels = 1;
    WaveletFamily fam = build_family(p, cfg);

    Rng rng(6);
    std::vector<double> xs, ts;
    for (int i = 0; i < 25; ++i) {
        xs.push_back(rng.next_uniform(fam.x_lo, fam.x_hi));
        ts.push_back(rng.next_uniform(0.0, p.maturity));
    }
    DesignMatrices m = design_matrices(fam, xs, ts);

    Vec c(static_cast<Eigen::Index>(fam.size()));
    for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = rng.next_uniform(-2.0, 2.0);
    const double b = 0.37;
    SolutionField f = evaluate_solution(c, b, m);

    for (std::size_t pi = 0; pi < xs.size(); ++pi) {
        double direct = b;
        for (std::size_t ai = 0; ai < fam.size(); ++ai) {
            direct += c[static_cast<Eigen::Index>(ai)] * atom_eval(fam.atoms[ai], xs[pi], ts[pi]).value;
        }
        double got = f.u[static_cast<Eigen::Index>(pi)];
        CHECK(std::abs(got - direct) / std::max(1.0, std::abs(direct)) <= 1e-12);
    }
}

TEST_CASE("bias-only solution is flat") {
    MarketParams p = canonical();
    FamilyConfig cfg;
    cfg.j_x_levels = 1;
    cfg.j_t_levels = 1;
    WaveletFamily fam = build_family(p, cfg);
    std::vector<double> xs{4.0, 4.5, 5.0}, ts{0.1, 0.5, 0.9};
    DesignMatrices m = design_matrices(fam, xs, ts);

    Vec c = Vec::Zero(static_cast<Eigen::Index>(fam.size()));
    SolutionField f = evaluate_solution(c, 0.5, m);
    for (Eigen::Index i = 0; i < f.u.size(); ++i) {
        CHECK(f.u[i] == 0.5);
        CHECK(f.u_t[i] == 0.0);
        CHECK(f.u_x[i] == 0.0);
        CHECK(f.u_xx[i] == 0.0);
    }
}

TEST_CASE("unit coefficient recovers a W column") {
    MarketParams p = canonical();
    FamilyConfig cfg;
    cfg.j_x_levels = 1;
    cfg.j_t_levels = 1;
    WaveletFamily fam = build_family(p, cfg);
    std::vector<double> xs{3.2, 4.1, 5.3, 4.8}, ts{0.2, 0.4, 0.6, 0.8};
    DesignMatrices m = design_matrices(fam, xs, ts);

    const Eigen::Index pick = static_cast<Eigen::Index>(fam.size() / 2);
    Vec c = Vec::Zero(static_cast<Eigen::Index>(fam.size()));
    c[pick] = 1.0;
    SolutionField f = evaluate_solution(c, 0.25, m);
    for (Eigen::Index i = 0; i < f.u.size(); ++i) {
        CHECK(f.u[i] - 0.25 == doctest::Approx(m.W(i, pick)).epsilon(1e-14));
    }
}

TEST_CASE("u_x agrees with finite differences of u along x") {
    MarketParams p = canonical();
    FamilyConfig cfg;
    cfg.j_x_levels = 2;
    cfg.j_t_levels = 2;
    WaveletFamily fam = build_family(p, cfg);

    Rng rng(7);
    Vec c(static_cast<Eigen::Index>(fam.size()));
    for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = rng.next_uniform(-1.0, 1.0);
    const double b = 0.5;

    const double h = 1e-6;
    const double t = 0.42;
    for (double x : {3.2, 4.0, 4.6, 5.4}) {
        std::vector<double> xs{x, x - h, x + h};
        std::vector<double> ts{t, t, t};
        DesignMatrices m = design_matrices(fam, xs, ts);
        SolutionField f = evaluate_solution(c, b, m);
        const double fd = (f.u[2] - f.u[1]) / (2.0 * h);
        CHECK(std::abs(f.u_x[0] - fd) / (1.0 + std::abs(f.u_x[0])) <= 1e-5);
    }
}

TEST_CASE("evaluate_solution rejects mismatched dimensions") {
    MarketParams p = canonical();
    FamilyConfig cfg;
    cfg.j_x_levels = 1;
    cfg.j_t_levels = 1;
    WaveletFamily fam = build_family(p, cfg);
    std::vector<double> xs{4.0}, ts{0.5};
    DesignMatrices m = design_matrices(fam, xs, ts);
    Vec c = Vec::Zero(static_cast<Eigen::Index>(fam.size() + 1));
    CHECK_THROWS_AS(evaluate_solution(c, 0.0, m), invalid_input);
}
