#pragma once

#include "common.hpp"
#include "market.hpp"
#include "wavelet.hpp"

namespace jumpwave {

// Trained option-price surrogate: the coefficient vector, the bias and the
// family they index, together with the market it was fitted for.
struct Solution {
    MarketParams params;
    WaveletFamily family;
    Vec c;
    double b = 0.0;

    struct PointEval {
        double u, u_t, u_x, u_xx;
    };

    // Single-point evaluation of u and its derivatives; throws when the
    // query leaves the trained domain.
    PointEval eval(double x, double t) const;

    // Same evaluation without the domain guard, continued with the call
    // asymptotics (0 on the left, e^x - K e^{-r(T-t)} on the right) outside
    // the trained x-range. Used by the risk simulation where jump paths can
    // step past the domain edges.
    double value_extended(double x, double t) const;

    double price(double spot, double t) const;
    bool in_domain(double x, double t) const;
};

} // namespace jumpwave
