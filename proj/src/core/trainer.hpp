#pragma once

#include "common.hpp"
#include "residual.hpp"
#include "solution.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace jumpwave {

struct AdamStageConfig {
    double lr = 1e-2;
    int epochs = 5000;
    int plateau_patience = 200; // epochs without relative 1e-8 improvement
    double lr_factor = 0.5;
    double min_lr = 1e-6;
    double clip_norm = 0.0; // 0 disables clipping
};

struct LbfgsConfig {
    int max_iterations = 500;
    int memory = 20;
    double c1 = 1e-4; // sufficient decrease
    double c2 = 0.9;  // curvature bound
    double tolerance = 1e-10;
};

struct TrainConfig {
    AdamStageConfig stage1{1e-2, 5000, 200, 0.5, 1e-6, 0.0};
    AdamStageConfig stage2{1e-4, 2000, 200, 0.5, 1e-8, 1.0};
    LbfgsConfig stage3;
    std::uint64_t seed = 1;
    bool precondition = true; // column-equilibrated parametrization inside fit

    void validate() const;
};

// Loss callback over the full parameter vector theta = (c..., b); fills
// the gradient and returns the loss.
using LossFn = std::function<double(const Vec&, Vec&)>;

struct WolfeRecord {
    double alpha;
    double f_before, f_after;
    double slope_before, slope_after; // directional derivatives g.d
};

struct StageReport {
    std::string name;
    std::vector<double> loss_history; // per epoch / iteration
    std::vector<double> lr_trace;     // Adam stages only
    std::vector<WolfeRecord> wolfe;   // L-BFGS stage only
    std::string termination;
    double best_loss = 0.0;
    double wall_seconds = 0.0;
};

struct TrainReport {
    std::vector<StageReport> stages;
    double initial_loss = 0.0;
    double final_loss = 0.0;
    std::uint64_t seed = 0;
    std::size_t n_atoms = 0;

    double best_loss() const;
};

struct StageResult {
    Vec theta;
    StageReport report;
};

// Xavier-uniform coefficients on +/- sqrt(6/(n_atoms+1)), bias 0.5.
std::pair<Vec, double> init_parameters(std::size_t n_atoms, std::uint64_t seed);

// Full-batch Adam with ReduceLROnPlateau semantics and optional global
// gradient-norm clipping; returns the best iterate seen, not the last.
StageResult adam_stage(const LossFn& loss_fn, const Vec& start, const AdamStageConfig& cfg,
                       const std::string& name = "adam");

// Two-loop-recursion L-BFGS with a strong-Wolfe line search.
StageResult lbfgs_stage(const LossFn& loss_fn, const Vec& start, const LbfgsConfig& cfg);

// assemble -> init -> Adam -> Adam refinement -> L-BFGS.
std::pair<Solution, TrainReport> fit(const MarketParams& params, const WaveletFamily& family,
                                     const TrainingSets& sets, const LossWeights& weights,
                                     const LogGrid& grid, const TrainConfig& cfg,
                                     bool verbose = false);

} // namespace jumpwave
