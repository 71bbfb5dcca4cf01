#include "jump.hpp"

#include <algorithm>
#include <cmath>

namespace jumpwave {

LogGrid LogGrid::make(const MarketParams& params, std::size_t n, double pad) {
    params.validate();
    require(is_power_of_two(n) && n >= 16, "grid size must be a power of two >= 16");
    if (pad < 0.0) pad = std::max(1.0, std::abs(params.mu_j) + 6.0 * params.sigma_j);
    require(pad >= std::abs(params.mu_j) + 6.0 * params.sigma_j,
            "grid pad must cover |mu_j| + 6*sigma_j");

    LogGrid g;
    g.x_lo = params.x_min() - pad;
    g.x_hi = params.x_max() + pad;
    g.n = n;
    g.dx = (g.x_hi - g.x_lo) / static_cast<double>(n - 1);
    return g;
}

KernelSpectrum precompute_kernel(const LogGrid& grid, const MarketParams& params) {
    require(grid.n > 0, "grid not initialised");

    KernelSpectrum k;
    k.grid = grid;
    k.sampled.resize(grid.n);

    // Signed offset of bin m in ifftshift layout: 0, dx, ..., then negative
    // offsets in the upper half. The density is reflected (y -> -y) so that
    // a plain circular convolution realises int u(x+y) f_Y(y) dy.
    const std::size_t half = grid.n / 2;
    double mass = 0.0;
    for (std::size_t m = 0; m < grid.n; ++m) {
        double offset = (m <= half ? static_cast<double>(m)
                                   : static_cast<double>(m) - static_cast<double>(grid.n)) *
                        grid.dx;
        double val = log_jump_density(-offset, params) * grid.dx;
        k.sampled[m] = val;
        mass += val;
    }
    k.mass = mass;
    if (mass < 1.0 - 1e-6) {
        throw numeric_error("jump density mass on grid below 1 - 1e-6; pad too small");
    }

    std::vector<cplx> buf(grid.n);
    for (std::size_t m = 0; m < grid.n; ++m) buf[m] = k.sampled[m];
    fft_inplace(buf, false);
    k.spectrum = std::move(buf);
    return k;
}

std::vector<double> convolve_fft(const std::vector<double>& u_grid,
                                 const KernelSpectrum& kernel) {
    const std::size_t n = kernel.grid.n;
    require(u_grid.size() == n, "field length must match grid size");

    std::vector<cplx> buf(n);
    for (std::size_t i = 0; i < n; ++i) buf[i] = u_grid[i];
    fft_inplace(buf, false);
    for (std::size_t i = 0; i < n; ++i) buf[i] *= kernel.spectrum[i];
    fft_inplace(buf, true);

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = buf[i].real();
    return out;
}

namespace {

double lerp_grid(const std::vector<double>& u, const LogGrid& grid, double x) {
    if (x <= grid.x_lo) return u.front();
    if (x >= grid.x_hi) return u.back();
    double s = (x - grid.x_lo) / grid.dx;
    std::size_t i = static_cast<std::size_t>(s);
    if (i >= grid.n - 1) i = grid.n - 2;
    double w = s - static_cast<double>(i);
    return (1.0 - w) * u[i] + w * u[i + 1];
}

} // namespace

std::vector<double> convolve_quadrature(const std::vector<double>& u_grid,
                                        const LogGrid& grid,
                                        const MarketParams& params) {
    const std::size_t n = grid.n;
    require(u_grid.size() == n, "field length must match grid size");

    // Trapezoid nodes at multiples of dx spanning mu_j +/- 8 sigma_j.
    const double reach = std::abs(params.mu_j) + 8.0 * params.sigma_j;
    const long half_span = static_cast<long>(std::ceil(reach / grid.dx));
    std::vector<double> weighted_density(static_cast<std::size_t>(2 * half_span + 1));
    for (long j = -half_span; j <= half_span; ++j) {
        double w = (j == -half_span || j == half_span) ? 0.5 : 1.0;
        weighted_density[static_cast<std::size_t>(j + half_span)] =
            w * log_jump_density(static_cast<double>(j) * grid.dx, params) * grid.dx;
    }

    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double x_i = grid.node(i);
        double acc = 0.0;
        for (long j = -half_span; j <= half_span; ++j) {
            acc += lerp_grid(u_grid, grid, x_i + static_cast<double>(j) * grid.dx) *
                   weighted_density[static_cast<std::size_t>(j + half_span)];
        }
        out[i] = acc;
    }
    return out;
}

double interpolate_grid(const std::vector<double>& values, const LogGrid& grid, double x) {
    require(values.size() == grid.n, "value length must match grid size");
    require(grid.contains(x), "interpolation point outside padded grid");
    require(grid.n >= 4, "grid too small for cubic interpolation");

    double s = (x - grid.x_lo) / grid.dx;
    long base = static_cast<long>(std::floor(s)) - 1;
    base = std::clamp(base, 0L, static_cast<long>(grid.n) - 4);
    const double u = s - static_cast<double>(base);

    // 4-point Lagrange weights for local coordinate u in [1, 2].
    const double w0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
    const double w1 = u * (u - 2.0) * (u - 3.0) / 2.0;
    const double w2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
    const double w3 = u * (u - 1.0) * (u - 2.0) / 6.0;

    const std::size_t b = static_cast<std::size_t>(base);
    return w0 * values[b] + w1 * values[b + 1] + w2 * values[b + 2] + w3 * values[b + 3];
}

Mat convolved_design_matrix(const WaveletFamily& family, const LogGrid& grid,
                            const KernelSpectrum& kernel,
                            const std::vector<double>& x,
                            const std::vector<double>& t) {
    require(!x.empty() && x.size() == t.size(), "point list must be nonempty and aligned");
    require(kernel.grid.n == grid.n, "kernel built on a different grid");
    for (double xp : x) {
        require(grid.contains(xp), "collocation point outside padded grid");
    }

    // One convolution per distinct x-profile.
    std::vector<std::vector<double>> convolved(family.x_profiles.size());
    std::vector<double> profile_samples(grid.n);
    for (std::size_t p = 0; p < family.x_profiles.size(); ++p) {
        const XProfile& prof = family.x_profiles[p];
        for (std::size_t i = 0; i < grid.n; ++i) {
            profile_samples[i] = atom_x_factor(prof.j_x, prof.k_x, grid.node(i));
        }
        convolved[p] = convolve_fft(profile_samples, kernel);
    }

    const Eigen::Index n_pts = static_cast<Eigen::Index>(x.size());
    const Eigen::Index n_atoms = static_cast<Eigen::Index>(family.size());
    Mat wj(n_pts, n_atoms);
    for (Eigen::Index i = 0; i < n_atoms; ++i) {
        const WaveletAtom& atom = family.atoms[static_cast<std::size_t>(i)];
        const std::vector<double>& conv = convolved[static_cast<std::size_t>(atom.x_profile)];
        for (Eigen::Index p = 0; p < n_pts; ++p) {
            double psi = atom_t_factor(atom.j_t, atom.k_t, t[static_cast<std::size_t>(p)]);
            wj(p, i) = psi * interpolate_grid(conv, grid, x[static_cast<std::size_t>(p)]);
        }
    }
    return wj;
}

} // namespace jumpwave
