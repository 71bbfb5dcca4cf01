#include "trainer.hpp"

#include "rng.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>

namespace jumpwave {

void TrainConfig::validate() const {
    require(stage1.lr > 0.0 && stage2.lr > 0.0, "learning rates must be positive");
    require(stage2.lr < stage1.lr, "stage-2 lr must be below stage-1 lr");
    require(stage2.clip_norm > 0.0, "stage-2 clip norm must be positive");
    require(stage1.epochs >= 0 && stage2.epochs >= 0, "epoch counts must be nonnegative");
    require(stage3.c1 > 0.0 && stage3.c1 < stage3.c2 && stage3.c2 < 1.0,
            "Wolfe constants must satisfy 0 < c1 < c2 < 1");
    require(stage3.memory >= 1, "L-BFGS memory must be >= 1");
}

double TrainReport::best_loss() const {
    double best = initial_loss;
    for (const StageReport& s : stages) best = std::min(best, s.best_loss);
    return best;
}

std::pair<Vec, double> init_parameters(std::size_t n_atoms, std::uint64_t seed) {
    require(n_atoms >= 1, "need at least one atom");
    // Xavier uniform with (fan_in, fan_out) = (n_atoms, 1).
    const double bound = std::sqrt(6.0 / (static_cast<double>(n_atoms) + 1.0));
    Rng rng(seed, 3);
    Vec c(static_cast<Eigen::Index>(n_atoms));
    for (Eigen::Index i = 0; i < c.size(); ++i) {
        c[i] = rng.next_uniform(-bound, bound);
    }
    return {c, 0.5};
}

namespace {

void check_finite(double loss) {
    if (!std::isfinite(loss)) {
        throw numeric_error("training diverged: non-finite loss");
    }
}

} // namespace

StageResult adam_stage(const LossFn& loss_fn, const Vec& start, const AdamStageConfig& cfg,
                       const std::string& name) {
    const auto t0 = std::chrono::steady_clock::now();
    const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

    Vec theta = start;
    Vec grad(theta.size());
    Vec m = Vec::Zero(theta.size());
    Vec v = Vec::Zero(theta.size());

    StageResult res;
    res.report.name = name;

    double loss = loss_fn(theta, grad);
    check_finite(loss);
    res.theta = theta;
    res.report.best_loss = loss;

    double lr = cfg.lr;
    double plateau_best = loss;
    int bad_epochs = 0;

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        // Plateau scheduler: relative improvement below 1e-8 counts as stale.
        if (loss < plateau_best * (1.0 - 1e-8)) {
            plateau_best = loss;
            bad_epochs = 0;
        } else if (++bad_epochs >= cfg.plateau_patience) {
            lr = std::max(lr * cfg.lr_factor, cfg.min_lr);
            bad_epochs = 0;
        }

        if (cfg.clip_norm > 0.0) {
            const double gn = grad.norm();
            if (gn > cfg.clip_norm) grad *= cfg.clip_norm / gn;
        }

        m = beta1 * m + (1.0 - beta1) * grad;
        v = beta2 * v + (1.0 - beta2) * grad.cwiseAbs2();
        const double bc1 = 1.0 - std::pow(beta1, epoch);
        const double bc2 = 1.0 - std::pow(beta2, epoch);
        theta.array() -=
            lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + eps);

        loss = loss_fn(theta, grad);
        check_finite(loss);
        res.report.loss_history.push_back(loss);
        res.report.lr_trace.push_back(lr);
        if (loss < res.report.best_loss) {
            res.report.best_loss = loss;
            res.theta = theta;
        }
    }

    res.report.termination = "max_epochs";
    res.report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

namespace {

struct LinePoint {
    double alpha;
    double f;
    double slope;
};

double cubic_min(const LinePoint& a, const LinePoint& b) {
    // Minimiser of the cubic interpolating both values and slopes.
    const double d1 = a.slope + b.slope - 3.0 * (a.f - b.f) / (a.alpha - b.alpha);
    const double disc = d1 * d1 - a.slope * b.slope;
    if (disc < 0.0) return 0.5 * (a.alpha + b.alpha);
    const double d2 = std::copysign(std::sqrt(disc), b.alpha - a.alpha);
    double step = b.alpha - (b.alpha - a.alpha) * (b.slope + d2 - d1) / (b.slope - a.slope + 2.0 * d2);
    if (!std::isfinite(step)) return 0.5 * (a.alpha + b.alpha);
    return step;
}

} // namespace

StageResult lbfgs_stage(const LossFn& loss_fn, const Vec& start, const LbfgsConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();

    StageResult res;
    res.report.name = "lbfgs";

    Vec x = start;
    Vec g(x.size());
    double f = loss_fn(x, g);
    check_finite(f);
    res.theta = x;
    res.report.best_loss = f;

    std::deque<Vec> s_hist, y_hist;
    std::deque<double> rho_hist;

    std::string termination = "max_iterations";
    bool just_restarted = false;

    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        if (g.norm() <= cfg.tolerance) {
            termination = "gradient_tolerance";
            break;
        }

        // Two-loop recursion.
        Vec q = g;
        std::vector<double> alphas(s_hist.size());
        for (std::size_t i = s_hist.size(); i-- > 0;) {
            alphas[i] = rho_hist[i] * s_hist[i].dot(q);
            q -= alphas[i] * y_hist[i];
        }
        if (!s_hist.empty()) {
            const Vec& s = s_hist.back();
            const Vec& y = y_hist.back();
            q *= s.dot(y) / y.dot(y);
        }
        for (std::size_t i = 0; i < s_hist.size(); ++i) {
            double beta = rho_hist[i] * y_hist[i].dot(q);
            q += (alphas[i] - beta) * s_hist[i];
        }
        Vec d = -q;

        double slope0 = g.dot(d);
        if (slope0 >= 0.0) { // fall back to steepest descent
            d = -g;
            slope0 = g.dot(d);
        }

        // Strong-Wolfe line search (bracket then zoom).
        const double f0 = f;
        Vec g_new(x.size());
        double alpha = s_hist.empty() ? std::min(1.0, 1.0 / std::max(g.norm(), 1e-12)) : 1.0;
        double alpha_prev = 0.0, f_prev = f0, slope_prev = slope0;
        const double alpha_max = 1e8;

        bool accepted = false;
        double f_acc = f0, slope_acc = 0.0, alpha_acc = 0.0;
        Vec x_acc;

        LinePoint lo{0.0, f0, slope0}, hi{0.0, f0, slope0};
        bool need_zoom = false;

        for (int ls = 0; ls < 30 && !accepted && !need_zoom; ++ls) {
            Vec x_try = x + alpha * d;
            double f_try = loss_fn(x_try, g_new);
            check_finite(f_try);
            double slope_try = g_new.dot(d);

            if (f_try > f0 + cfg.c1 * alpha * slope0 || (ls > 0 && f_try >= f_prev)) {
                lo = {alpha_prev, f_prev, slope_prev};
                hi = {alpha, f_try, slope_try};
                need_zoom = true;
                break;
            }
            if (std::abs(slope_try) <= -cfg.c2 * slope0) {
                accepted = true;
                alpha_acc = alpha;
                f_acc = f_try;
                slope_acc = slope_try;
                x_acc = std::move(x_try);
                break;
            }
            if (slope_try >= 0.0) {
                lo = {alpha, f_try, slope_try};
                hi = {alpha_prev, f_prev, slope_prev};
                need_zoom = true;
                break;
            }
            // Still descending: extrapolate with a secant on the slope
            // (exact for quadratic losses), keeping a geometric fallback.
            double alpha_next = 2.0 * alpha;
            const double denom = slope_try - slope_prev;
            if (denom > 0.0) {
                double secant = alpha - slope_try * (alpha - alpha_prev) / denom;
                if (std::isfinite(secant)) {
                    alpha_next = std::clamp(secant, 1.1 * alpha, 10.0 * alpha);
                }
            }
            alpha_prev = alpha;
            f_prev = f_try;
            slope_prev = slope_try;
            alpha = std::min(alpha_next, alpha_max);
        }

        if (need_zoom) {
            for (int z = 0; z < 50 && !accepted; ++z) {
                double alpha_j = cubic_min(lo, hi);
                const double a_lo = std::min(lo.alpha, hi.alpha);
                const double a_hi = std::max(lo.alpha, hi.alpha);
                const double span = a_hi - a_lo;
                if (!(alpha_j > a_lo + 1e-3 * span && alpha_j < a_hi - 1e-3 * span)) {
                    alpha_j = 0.5 * (a_lo + a_hi);
                }
                if (span < 1e-16 * std::max(1.0, a_hi)) break;

                Vec x_try = x + alpha_j * d;
                double f_try = loss_fn(x_try, g_new);
                check_finite(f_try);
                double slope_try = g_new.dot(d);

                if (f_try > f0 + cfg.c1 * alpha_j * slope0 || f_try >= lo.f) {
                    hi = {alpha_j, f_try, slope_try};
                } else {
                    if (std::abs(slope_try) <= -cfg.c2 * slope0) {
                        accepted = true;
                        alpha_acc = alpha_j;
                        f_acc = f_try;
                        slope_acc = slope_try;
                        x_acc = std::move(x_try);
                        break;
                    }
                    if (slope_try * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
                    lo = {alpha_j, f_try, slope_try};
                }
            }
        }

        if (!accepted) {
            // Discard the curvature history and retry along steepest
            // descent; give up only when that also fails.
            if (!just_restarted && !s_hist.empty()) {
                s_hist.clear();
                y_hist.clear();
                rho_hist.clear();
                just_restarted = true;
                continue;
            }
            termination = "line_search_failure";
            break;
        }
        just_restarted = false;

        Vec s_vec = alpha_acc * d;
        // Recompute the gradient at the accepted point for the curvature pair.
        Vec y_vec = g_new - g;

        res.report.wolfe.push_back({alpha_acc, f0, f_acc, slope0, slope_acc});
        res.report.loss_history.push_back(f_acc);

        x = std::move(x_acc);
        f = f_acc;
        g = g_new;

        if (f < res.report.best_loss) {
            res.report.best_loss = f;
            res.theta = x;
        }

        const double sy = s_vec.dot(y_vec);
        if (sy > 1e-16 * s_vec.norm() * y_vec.norm()) {
            s_hist.push_back(std::move(s_vec));
            y_hist.push_back(std::move(y_vec));
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > cfg.memory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
    }

    if (termination == "max_iterations" && g.norm() <= cfg.tolerance) {
        termination = "gradient_tolerance";
    }
    res.report.termination = termination;
    res.report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

std::pair<Solution, TrainReport> fit(const MarketParams& params, const WaveletFamily& family,
                                     const TrainingSets& sets, const LossWeights& weights,
                                     const LogGrid& grid, const TrainConfig& cfg,
                                     bool verbose) {
    cfg.validate();
    KernelSpectrum kernel = precompute_kernel(grid, params);
    ResidualSystem system = assemble(params, family, sets, grid, kernel, weights);

    const Eigen::Index n = system.n_atoms();
    auto [c0, b0] = init_parameters(static_cast<std::size_t>(n), cfg.seed);

    // The optimizers work in the mass-whitened parametrization: the odd
    // Gaussian atoms are near-collinear and gradient methods stall badly in
    // raw coefficients. The loss values are unchanged.
    MassTransform transform;
    const bool whiten = cfg.precondition;
    if (whiten) transform = make_mass_transform(family);

    LossFn loss_fn = [&system, &transform, whiten, n](const Vec& theta, Vec& grad) {
        Vec c = whiten ? transform.to_coeff(theta.head(n)) : Vec(theta.head(n));
        LossGrad lg = loss_and_gradient(system, c, theta[n]);
        grad.resize(n + 1);
        grad.head(n) = whiten ? transform.grad_to_phi(lg.grad_c) : lg.grad_c;
        grad[n] = lg.grad_b;
        return lg.loss;
    };

    Vec theta0(n + 1);
    theta0.head(n) = whiten ? transform.from_coeff(c0) : c0;
    theta0[n] = b0;

    TrainReport report;
    report.seed = cfg.seed;
    report.n_atoms = static_cast<std::size_t>(n);
    {
        Vec g0(n + 1);
        report.initial_loss = loss_fn(theta0, g0);
    }
    if (verbose) {
        std::fprintf(stderr, "[fit] atoms=%ld initial loss %.6e\n", static_cast<long>(n),
                     report.initial_loss);
    }

    StageResult s1 = adam_stage(loss_fn, theta0, cfg.stage1, "adam");
    report.stages.push_back(s1.report);
    if (verbose) {
        std::fprintf(stderr, "[fit] stage 1 best loss %.6e (%.1fs)\n", s1.report.best_loss,
                     s1.report.wall_seconds);
    }

    StageResult s2 = adam_stage(loss_fn, s1.theta, cfg.stage2, "adam_refine");
    report.stages.push_back(s2.report);
    if (verbose) {
        std::fprintf(stderr, "[fit] stage 2 best loss %.6e (%.1fs)\n", s2.report.best_loss,
                     s2.report.wall_seconds);
    }

    StageResult s3 = lbfgs_stage(loss_fn, s2.theta, cfg.stage3);
    report.stages.push_back(s3.report);
    if (verbose) {
        std::fprintf(stderr, "[fit] stage 3 best loss %.6e after %zu iterations (%s, %.1fs)\n",
                     s3.report.best_loss, s3.report.loss_history.size(),
                     s3.report.termination.c_str(), s3.report.wall_seconds);
    }

    report.final_loss = std::min({report.initial_loss, s1.report.best_loss,
                                  s2.report.best_loss, s3.report.best_loss});

    Solution sol;
    sol.params = params;
    sol.family = family;
    sol.c = whiten ? transform.to_coeff(s3.theta.head(n)) : Vec(s3.theta.head(n));
    sol.b = s3.theta[n];
    return {std::move(sol), std::move(report)};
}

} // namespace jumpwave
