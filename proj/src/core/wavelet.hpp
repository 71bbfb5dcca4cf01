#pragma once

#include "common.hpp"
#include "market.hpp"

#include <cstddef>
#include <vector>

namespace jumpwave {

// One scaled-shifted atom of the 2-D Gaussian wavelet family:
//   phi(x,t) = X * T * exp(-(X^2 + T^2)/2),  X = j_x*x - k_x,  T = j_t*t - k_t.
struct WaveletAtom {
    double j_x = 1.0;
    double k_x = 0.0;
    double j_t = 1.0;
    double k_t = 0.0;

    // Index of this atom's (j_x, k_x) profile in WaveletFamily::x_profiles.
    int x_profile = -1;
};

struct AtomEval {
    double value;
    double d_t;
    double d_x;
    double d_xx;
};

AtomEval atom_eval(const WaveletAtom& atom, double x, double t);

// Spatial factor X*exp(-X^2/2) of an atom, used by the jump convolution.
double atom_x_factor(double j_x, double k_x, double x);
// Temporal factor T*exp(-T^2/2).
double atom_t_factor(double j_t, double k_t, double t);

struct FamilyConfig {
    double j_x_min = 1.25;
    int j_x_levels = 4;       // dyadic ladder j_x_min * 2^m, m = 0..levels-1
    double j_t_min = 1.5;
    int j_t_levels = 3;
    double spacing = 1.0;     // shift step in scaled coordinates (centers at spacing/j)
    int margin = 1;           // extra atoms beyond each domain edge
    std::size_t max_atoms = 50000;
};

struct XProfile {
    double j_x;
    double k_x;
};

// Ordered atom collection; coefficient index i corresponds to atoms[i]
// for the life of the family. x_profiles deduplicates (j_x, k_x) pairs so
// the jump convolution runs once per distinct spatial factor.
struct WaveletFamily {
    std::vector<WaveletAtom> atoms;
    std::vector<XProfile> x_profiles;
    double x_lo = 0.0, x_hi = 0.0; // domain the family was built over
    double t_lo = 0.0, t_hi = 0.0;

    std::size_t size() const { return atoms.size(); }
};

WaveletFamily build_family(const MarketParams& params, const FamilyConfig& cfg);

// Dense basis/derivative evaluations at a fixed point list; column i of
// every matrix belongs to atoms[i].
struct DesignMatrices {
    Mat W;
    Mat DtW;
    Mat DxW;
    Mat DxxW;
    std::vector<double> x;
    std::vector<double> t;
};

DesignMatrices design_matrices(const WaveletFamily& family,
                               const std::vector<double>& x,
                               const std::vector<double>& t);

struct SolutionField {
    Vec u;
    Vec u_t;
    Vec u_x;
    Vec u_xx;
};

// u = W c + b and its derivatives (the bias has zero derivatives).
SolutionField evaluate_solution(const Vec& c, double b, const DesignMatrices& m);

// Closed-form overlap of two 1-D factors (j1 s - k1) e^{-(j1 s - k1)^2/2}
// and (j2 s - k2) e^{-(j2 s - k2)^2/2} over the whole line.
double profile_overlap(double j1, double k1, double j2, double k2);

// L2 Gram matrix of the family over R^2; separability makes every entry a
// product of two 1-D overlaps. Pure basis geometry, no sample points.
Mat mass_matrix(const WaveletFamily& family);

} // namespace jumpwave
