#pragma once

#include "common.hpp"
#include "fft.hpp"
#include "market.hpp"
#include "wavelet.hpp"

#include <vector>

namespace jumpwave {

// Uniform log-price grid padded beyond the working domain so the jump
// density never reaches past the edges. n is a power of two and
// dx = (x_hi - x_lo)/(n - 1).
struct LogGrid {
    double x_lo = 0.0;
    double x_hi = 0.0;
    std::size_t n = 0;
    double dx = 0.0;

    // pad < 0 selects the default max(1.0, |mu_j| + 6*sigma_j).
    static LogGrid make(const MarketParams& params, std::size_t n, double pad = -1.0);

    double node(std::size_t i) const { return x_lo + dx * static_cast<double>(i); }
    bool contains(double x) const { return x >= x_lo && x <= x_hi; }
};

// Forward transform of the reflected, index-shifted, dx-weighted jump
// density. Multiplying a field's spectrum by this and inverting yields
// the correlation integral (u * f_Y)(x) = int u(x+y) f_Y(y) dy.
struct KernelSpectrum {
    LogGrid grid;
    std::vector<double> sampled;  // what the spectrum transforms, bin 0 = offset 0
    std::vector<cplx> spectrum;
    double mass = 0.0;            // sum of samples (already dx-weighted)
};

KernelSpectrum precompute_kernel(const LogGrid& grid, const MarketParams& params);

// FFT route: one forward transform, an element-wise product, one inverse.
std::vector<double> convolve_fft(const std::vector<double>& u_grid,
                                 const KernelSpectrum& kernel);

// Direct O(N*M) trapezoid oracle for the same integral: u interpolated
// linearly between nodes, constant extension beyond the padded edges.
std::vector<double> convolve_quadrature(const std::vector<double>& u_grid,
                                        const LogGrid& grid,
                                        const MarketParams& params);

// Cubic 4-point Lagrange interpolation of grid values at x.
double interpolate_grid(const std::vector<double>& values, const LogGrid& grid, double x);

// WJ[p,i] = (phi_i * f_Y)(x_p, t_p). Atom separability means one grid
// convolution per distinct (j_x, k_x) x-profile, reused by every atom
// sharing it.
Mat convolved_design_matrix(const WaveletFamily& family, const LogGrid& grid,
                            const KernelSpectrum& kernel,
                            const std::vector<double>& x,
                            const std::vector<double>& t);

} // namespace jumpwave
