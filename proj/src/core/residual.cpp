#include "residual.hpp"

#include <cmath>

namespace jumpwave {

ResidualSystem assemble(const MarketParams& params, const WaveletFamily& family,
                        const TrainingSets& sets, const LogGrid& grid,
                        const KernelSpectrum& kernel, const LossWeights& weights,
                        ResidualForm form) {
    params.validate();
    require(!sets.x_c.empty() && !sets.x_ic.empty() && !sets.x_bc.empty(),
            "training sets must be nonempty");
    require(weights.w_pde >= 0.0 && weights.w_ic >= 0.0 && weights.w_bc >= 0.0,
            "loss weights must be nonnegative");

    const double r = params.r;
    const double lam = params.lambda;
    const double half_sig2 = 0.5 * params.sigma * params.sigma;

    ResidualSystem sys;
    sys.weights = weights;
    sys.pde_bias_coeff = -r;
    sys.family = family;

    DesignMatrices dm = design_matrices(family, sets.x_c, sets.t_c);
    Mat wj = convolved_design_matrix(family, grid, kernel, sets.x_c, sets.t_c);

    const Eigen::Index n_pts = dm.W.rows();
    sys.A_pde.resize(n_pts, dm.W.cols());
    for (Eigen::Index p = 0; p < n_pts; ++p) {
        if (form == ResidualForm::SSpace) {
            // u_t + (sigma^2/2) S^2 V_SS + r S V_S - (r+lambda) u + lambda (u*f),
            // V_S = u_x / S, V_SS = (u_xx - u_x) / S^2.
            const double s = std::exp(sets.x_c[static_cast<std::size_t>(p)]);
            const double s2 = s * s;
            sys.A_pde.row(p) = dm.DtW.row(p) +
                               half_sig2 * s2 * ((dm.DxxW.row(p) - dm.DxW.row(p)) / s2) +
                               r * s * (dm.DxW.row(p) / s) - (r + lam) * dm.W.row(p) +
                               lam * wj.row(p);
        } else {
            sys.A_pde.row(p) = dm.DtW.row(p) + half_sig2 * dm.DxxW.row(p) +
                               (r - half_sig2) * dm.DxW.row(p) - (r + lam) * dm.W.row(p) +
                               lam * wj.row(p);
        }
    }

    DesignMatrices ic = design_matrices(family, sets.x_ic, sets.t_ic);
    sys.A_ic = std::move(ic.W);
    sys.target_ic.resize(sys.A_ic.rows());
    for (Eigen::Index i = 0; i < sys.target_ic.size(); ++i) {
        sys.target_ic[i] = payoff_call(sets.x_ic[static_cast<std::size_t>(i)], params.strike);
    }

    DesignMatrices bc = design_matrices(family, sets.x_bc, sets.t_bc);
    sys.A_bc = std::move(bc.W);
    sys.target_bc.resize(sys.A_bc.rows());
    const double x_hi = params.x_max();
    const double mid = 0.5 * (params.x_min() + x_hi);
    for (Eigen::Index i = 0; i < sys.target_bc.size(); ++i) {
        const double x = sets.x_bc[static_cast<std::size_t>(i)];
        const double t = sets.t_bc[static_cast<std::size_t>(i)];
        sys.target_bc[i] =
            (x > mid) ? std::exp(x_hi) - params.strike * std::exp(-r * (params.maturity - t))
                      : 0.0;
    }
    return sys;
}

Vec pde_residual(const ResidualSystem& system, const Vec& c, double b) {
    require(c.size() == system.n_atoms(), "coefficient size mismatch");
    Vec res = system.A_pde * c;
    res.array() += system.pde_bias_coeff * b;
    return res;
}

LossGrad loss_and_gradient(const ResidualSystem& system, const Vec& c, double b) {
    require(c.size() == system.n_atoms(), "coefficient size mismatch");

    const double np = static_cast<double>(system.A_pde.rows());
    const double ni = static_cast<double>(system.A_ic.rows());
    const double nb = static_cast<double>(system.A_bc.rows());

    Vec res_pde = system.A_pde * c;
    res_pde.array() += system.pde_bias_coeff * b;
    Vec res_ic = system.A_ic * c - system.target_ic;
    res_ic.array() += b;
    Vec res_bc = system.A_bc * c - system.target_bc;
    res_bc.array() += b;

    const double wp = system.weights.w_pde / np;
    const double wi = system.weights.w_ic / ni;
    const double wb = system.weights.w_bc / nb;

    LossGrad out;
    out.loss = wp * res_pde.squaredNorm() + wi * res_ic.squaredNorm() + wb * res_bc.squaredNorm();
    out.grad_c = 2.0 * (wp * (system.A_pde.transpose() * res_pde) +
                        wi * (system.A_ic.transpose() * res_ic) +
                        wb * (system.A_bc.transpose() * res_bc));
    out.grad_b = 2.0 * (wp * system.pde_bias_coeff * res_pde.sum() + wi * res_ic.sum() +
                        wb * res_bc.sum());
    return out;
}

MassTransform make_mass_transform(const WaveletFamily& family, double floor_rel) {
    Mat m = mass_matrix(family);
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    if (es.info() != Eigen::Success) {
        throw numeric_error("mass matrix eigendecomposition failed");
    }
    const Vec& lambda = es.eigenvalues();
    const double floor_abs = floor_rel * lambda(lambda.size() - 1);

    MassTransform t;
    t.basis = es.eigenvectors();
    t.sqrt_eigs.resize(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        t.sqrt_eigs[i] = std::sqrt(std::max(lambda[i], floor_abs));
    }
    return t;
}

namespace {

// Relative singular-value cutoff below which stacked directions are
// treated as numerically rank-null.
constexpr double kRankCutoff = 1e-12;

// The weighted stacked design [sqrt(w/N) A | sqrt(w/N) beta] and target.
struct Stacked {
    Mat b;
    Vec rhs;
};

Stacked stack_system(const ResidualSystem& system) {
    const Eigen::Index n = system.n_atoms();
    const Eigen::Index np = system.A_pde.rows();
    const Eigen::Index ni = system.A_ic.rows();
    const Eigen::Index nb = system.A_bc.rows();
    const double sp = std::sqrt(system.weights.w_pde / static_cast<double>(np));
    const double si = std::sqrt(system.weights.w_ic / static_cast<double>(ni));
    const double sb = std::sqrt(system.weights.w_bc / static_cast<double>(nb));

    Stacked st;
    st.b.resize(np + ni + nb, n + 1);
    st.rhs.resize(np + ni + nb);
    st.b.block(0, 0, np, n) = sp * system.A_pde;
    st.b.block(0, n, np, 1).setConstant(sp * system.pde_bias_coeff);
    st.rhs.segment(0, np).setZero();
    st.b.block(np, 0, ni, n) = si * system.A_ic;
    st.b.block(np, n, ni, 1).setConstant(si);
    st.rhs.segment(np, ni) = si * system.target_ic;
    st.b.block(np + ni, 0, nb, n) = sb * system.A_bc;
    st.b.block(np + ni, n, nb, 1).setConstant(sb);
    st.rhs.segment(np + ni, nb) = sb * system.target_bc;
    return st;
}

} // namespace

LeastSquaresResult solve_least_squares(const ResidualSystem& system, double ridge) {
    const Eigen::Index n = system.n_atoms();
    Stacked st = stack_system(system);
    if (ridge < 0.0) {
        ridge = 1e-10 * st.b.squaredNorm() / static_cast<double>(n + 1);
    }

    const bool whiten = system.family.size() == static_cast<std::size_t>(n);
    MassTransform t;
    if (whiten) {
        // Work on phi with c = V (phi ./ s): the ridge then penalises
        // ||phi||^2 = c' M c, the squared L2 norm of the surrogate, which
        // is invariant under the reparametrization.
        t = make_mass_transform(system.family);
        st.b.leftCols(n) =
            (st.b.leftCols(n) * t.basis * t.sqrt_eigs.cwiseInverse().asDiagonal()).eval();
    }

    Mat b_full;
    Vec rhs_full;
    if (ridge > 0.0) {
        b_full.setZero(st.b.rows() + n, n + 1);
        b_full.topRows(st.b.rows()) = st.b;
        const double sr = std::sqrt(ridge);
        for (Eigen::Index i = 0; i < n; ++i) b_full(st.b.rows() + i, i) = sr;
        rhs_full.setZero(st.rhs.size() + n);
        rhs_full.head(st.rhs.size()) = st.rhs;
    } else {
        b_full = std::move(st.b);
        rhs_full = std::move(st.rhs);
    }

    Eigen::BDCSVD<Mat> svd(b_full, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(kRankCutoff);
    if (ridge == 0.0 && svd.rank() < n + 1) {
        throw numeric_error("least-squares system is rank-deficient; use a positive ridge");
    }
    Vec theta = svd.solve(rhs_full);

    LeastSquaresResult res;
    Vec ridge_grad;
    if (whiten) {
        Vec phi = theta.head(n);
        res.c = t.to_coeff(phi);
        // d(ridge ||phi||^2)/dc = 2 ridge V (s^2 .* (V'c)).
        Vec vc = t.basis.transpose() * res.c;
        ridge_grad =
            2.0 * ridge *
            (t.basis * t.sqrt_eigs.cwiseProduct(t.sqrt_eigs).cwiseProduct(vc).eval());
    } else {
        res.c = theta.head(n);
        ridge_grad = 2.0 * ridge * res.c;
    }
    res.b = theta[n];

    LossGrad lg = loss_and_gradient(system, res.c, res.b);
    res.loss = lg.loss;
    Vec full_grad(n + 1);
    full_grad.head(n) = lg.grad_c + ridge_grad;
    full_grad[n] = lg.grad_b;
    res.grad_norm = full_grad.norm();
    res.certified = res.grad_norm <= 1e-8 * (1.0 + res.loss);
    return res;
}

} // namespace jumpwave
