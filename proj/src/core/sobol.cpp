#include "sobol.hpp"

#include "rng.hpp"

#include <array>

namespace jumpwave {

namespace {

constexpr int kBits = 52;

// Direction integers V_k scaled to kBits-bit fixed point.
struct Directions {
    std::array<std::uint64_t, kBits> dim1; // van der Corput, m_k = 1
    std::array<std::uint64_t, kBits> dim2;

    Directions() {
        std::uint64_t m_prev = 1;
        for (int k = 1; k <= kBits; ++k) {
            dim1[static_cast<std::size_t>(k - 1)] = 1ULL << (kBits - k);
            std::uint64_t m = (k == 1) ? 1 : ((m_prev << 1) ^ m_prev);
            dim2[static_cast<std::size_t>(k - 1)] = m << (kBits - k);
            m_prev = m;
        }
    }
};

const Directions& directions() {
    static const Directions d;
    return d;
}

} // namespace

std::vector<std::pair<double, double>> sobol_points(std::size_t n, const Box2& box,
                                                    std::size_t skip) {
    require(n >= 1, "need at least one point");
    const Directions& dir = directions();
    const double scale = 1.0 / static_cast<double>(1ULL << kBits);

    std::vector<std::pair<double, double>> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t idx = i + skip;
        std::uint64_t gray = idx ^ (idx >> 1);
        std::uint64_t a = 0, b = 0;
        for (int k = 0; gray != 0; ++k, gray >>= 1) {
            if (gray & 1ULL) {
                a ^= dir.dim1[static_cast<std::size_t>(k)];
                b ^= dir.dim2[static_cast<std::size_t>(k)];
            }
        }
        double u = static_cast<double>(a) * scale;
        double v = static_cast<double>(b) * scale;
        pts.emplace_back(box.x_lo + (box.x_hi - box.x_lo) * u,
                         box.y_lo + (box.y_hi - box.y_lo) * v);
    }
    return pts;
}

TrainingSets sample_training_sets(const MarketParams& params, const TrainingSizes& sizes,
                                  std::uint64_t seed, std::size_t sobol_skip) {
    params.validate();
    require(sizes.n_collocation >= 1 && sizes.n_terminal >= 1 && sizes.n_boundary >= 1,
            "training set sizes must be positive");

    const double x_lo = params.x_min();
    const double x_hi = params.x_max();
    const double T = params.maturity;

    TrainingSets sets;
    auto colloc = sobol_points(sizes.n_collocation, {x_lo, x_hi, 0.0, T}, sobol_skip);
    sets.x_c.reserve(colloc.size());
    sets.t_c.reserve(colloc.size());
    for (auto [x, t] : colloc) {
        sets.x_c.push_back(x);
        sets.t_c.push_back(t);
    }

    Rng term_rng(seed, 1);
    for (std::size_t i = 0; i < sizes.n_terminal; ++i) {
        sets.x_ic.push_back(term_rng.next_uniform(x_lo, x_hi));
        sets.t_ic.push_back(T);
    }

    // Lower edge first; the lower edge takes the extra point on odd counts.
    Rng bc_rng(seed, 2);
    const std::size_t n_lo = (sizes.n_boundary + 1) / 2;
    for (std::size_t i = 0; i < sizes.n_boundary; ++i) {
        sets.x_bc.push_back(i < n_lo ? x_lo : x_hi);
        sets.t_bc.push_back(bc_rng.next_uniform(0.0, T));
    }
    return sets;
}

} // namespace jumpwave
