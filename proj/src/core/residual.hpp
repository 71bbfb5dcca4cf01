#pragma once

#include "common.hpp"
#include "jump.hpp"
#include "market.hpp"
#include "sobol.hpp"
#include "wavelet.hpp"

namespace jumpwave {

struct LossWeights {
    double w_pde = 1.0;
    double w_ic = 5000.0;
    double w_bc = 10.0;
};

// Which algebraic route assembles the PDE rows. Both encode the same
// operator; the S-space route multiplies the chain-rule factors back in
// literally and is the production path.
enum class ResidualForm { SSpace, LogSpace };

// The composite residual as an explicit affine map of (c, b):
//   pde rows:  A_pde c + pde_bias_coeff * b          (target 0)
//   ic rows:   A_ic c + b - target_ic
//   bc rows:   A_bc c + b - target_bc
// Loss is the weighted mean of squared rows, an exact quadratic in (c, b).
struct ResidualSystem {
    Mat A_pde;
    double pde_bias_coeff = 0.0; // -r: the bias feeds -(r+lambda)b + lambda*b
    Mat A_ic;
    Vec target_ic;
    Mat A_bc;
    Vec target_bc;
    LossWeights weights;
    WaveletFamily family; // the basis behind the columns

    Eigen::Index n_atoms() const { return A_pde.cols(); }
};

// Spectral whitening of the basis via its L2 mass matrix: c = V (phi ./ s)
// with M = V diag(lambda) V' and s = sqrt(max(lambda, floorermost)).
// The family's odd Gaussian atoms are severely collinear (smooth fields
// need huge cancelling coefficients), so both the direct solve and the
// iterative trainer work in this parametrization; the loss itself is
// untouched.
struct MassTransform {
    Mat basis;      // eigenvectors V
    Vec sqrt_eigs;  // s

    Vec to_coeff(const Vec& phi) const { return basis * phi.cwiseQuotient(sqrt_eigs); }
    Vec from_coeff(const Vec& c) const {
        return sqrt_eigs.cwiseProduct(basis.transpose() * c);
    }
    Vec grad_to_phi(const Vec& grad_c) const {
        return (basis.transpose() * grad_c).cwiseQuotient(sqrt_eigs);
    }
};

MassTransform make_mass_transform(const WaveletFamily& family, double floor_rel = 1e-12);

ResidualSystem assemble(const MarketParams& params, const WaveletFamily& family,
                        const TrainingSets& sets, const LogGrid& grid,
                        const KernelSpectrum& kernel, const LossWeights& weights,
                        ResidualForm form = ResidualForm::SSpace);

struct LossGrad {
    double loss = 0.0;
    Vec grad_c;
    double grad_b = 0.0;
};

LossGrad loss_and_gradient(const ResidualSystem& system, const Vec& c, double b);

// Residual vectors by block, for diagnostics and the assembly identity tests.
Vec pde_residual(const ResidualSystem& system, const Vec& c, double b);

struct LeastSquaresResult {
    Vec c;
    double b = 0.0;
    double loss = 0.0;        // composite loss at the solution
    double grad_norm = 0.0;   // gradient of composite + ridge penalty
    bool certified = false;   // grad_norm <= 1e-8 * (1 + loss)
};

// Exact minimiser of the composite loss plus a ridge penalty through the
// normal equations, solved in the mass-whitened parametrization when the
// system carries its family (the penalty is then ridge * ||u||_L2^2, which
// is invariant under reparametrization; for hand-built systems it is the
// plain ridge * ||c||^2). Iterative refinement keeps the returned gradient
// at the round-off floor. ridge < 0 selects the default 1e-10 * trace
// scale; ridge = 0 insists on full rank and throws on a singular system.
LeastSquaresResult solve_least_squares(const ResidualSystem& system, double ridge = -1.0);

} // namespace jumpwave
