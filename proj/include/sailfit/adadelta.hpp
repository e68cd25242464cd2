#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sailfit/linear_model.hpp"

namespace sailfit {

// Per-parameter exponential moving averages of squared gradients and squared
// updates. Both accumulators start at zero and stay nonnegative.
struct AdadeltaState {
    std::vector<double> avg_sq_grad;
    std::vector<double> avg_sq_update;
    double rho = 0.95;
    double epsilon = 1e-6;

    explicit AdadeltaState(std::size_t n_params, double rho_ = 0.95, double eps = 1e-6)
        : avg_sq_grad(n_params, 0.0), avg_sq_update(n_params, 0.0), rho(rho_), epsilon(eps) {}
};

// One optimizer step, per coordinate:
//   E[g^2]  <- rho E[g^2] + (1-rho) g^2
//   delta   = -sqrt(E[du^2] + eps) / sqrt(E[g^2] + eps) * g   (previous E[du^2])
//   E[du^2] <- rho E[du^2] + (1-rho) delta^2
//   theta   <- theta + delta
// Throws DimensionMismatch / NonFiniteGradient.
void adadelta_step(AdadeltaState& state, std::vector<double>& params,
                   const std::vector<double>& grads);

struct AdadeltaConfig {
    double l2_lambda = 0.0;
    double rho = 0.95;
    double epsilon = 1e-6;
    std::size_t max_iters = 200000;
    double tol = 0.0;  // 0 = auto: 1e-10 * initial loss; < 0 = run the full budget
};

// Trains the linear model's L2 loss with ADADELTA from a zero start; the
// intercept is the last optimizer coordinate and is not penalized. Same
// standardization requirement as fit_gd. max_iters=0 returns the zero model.
// Throws Diverged on a non-finite loss.
std::pair<LinearModel, std::vector<double>> fit_adadelta(const FeatureMatrix& X,
                                                         const TargetVector& y,
                                                         const AdadeltaConfig& config,
                                                         ExecMode mode = ExecMode::Parallel);

} // namespace sailfit
