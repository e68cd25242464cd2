#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sailfit/features.hpp"
#include "sailfit/parallel.hpp"

namespace sailfit {

struct LinearModel {
    FeatureSchema schema;
    std::map<std::string, double> coefficients;  // column name -> USD per unit
    double intercept = 0;                        // USD
    std::optional<Standardization> standardization;

    // Coefficients in schema column order.
    std::vector<double> coefficient_vector() const;
};

struct GDConfig {
    double learning_rate = 0.1;   // halved on instability, at most 10 times
    double l2_lambda = 0.0;
    std::size_t max_iters = 50000;
    double tol = 0.0;             // 0 = auto: 1e-8 * initial loss
    std::uint64_t seed = 0;       // reserved for optional random init
};

// Closed-form least squares via the normal equations. Requires n >= p+1.
// Throws RankDeficient naming the offending column when X'X is singular.
LinearModel fit_ols(const FeatureMatrix& X, const TargetVector& y,
                    ExecMode mode = ExecMode::Parallel);

// J = mse(y, predict(model, X)) + lambda * sum(coef^2); intercept excluded
// from the penalty.
double loss_l2(const FeatureMatrix& X, const TargetVector& y, const LinearModel& model,
               double lambda);

// Full-batch gradient descent on the L2-regularized squared loss from a zero
// start. The returned trace holds the loss before the first step and after
// every iteration. Requires standardized features: throws if X carries no
// standardization params and any column magnitude exceeds 1e3.
// Throws Diverged when the loss is still non-finite after 10 halvings of the
// learning rate.
std::pair<LinearModel, std::vector<double>> fit_gd(const FeatureMatrix& X,
                                                   const TargetVector& y,
                                                   const GDConfig& config,
                                                   ExecMode mode = ExecMode::Parallel);

// yhat = intercept + sum(coef * column), after mapping X into the model's
// standardization space. X must either be raw or carry the identical params.
TargetVector predict(const LinearModel& model, const FeatureMatrix& X,
                     ExecMode mode = ExecMode::Parallel);

// --- trainer kernels, shared with the ADADELTA fitter and the gradient
// checks: plain linear algebra on the matrix as stored, no standardization.

// (1/n)||y - X beta - b||^2 + lambda * ||beta||^2
double linear_loss(const Matrix& X, const TargetVector& y, const std::vector<double>& beta,
                   double intercept, double lambda, ExecMode mode = ExecMode::Parallel);

// grad w.r.t. beta into grad_beta (size p), w.r.t. intercept into grad_b.
void linear_gradient(const Matrix& X, const TargetVector& y, const std::vector<double>& beta,
                     double intercept, double lambda, std::vector<double>& grad_beta,
                     double& grad_b, ExecMode mode = ExecMode::Parallel);

// Flat key=value serialization, exact decimal round-trip.
std::string save_linear_model(const LinearModel& model);
LinearModel load_linear_model(const std::string& text);

} // namespace sailfit
