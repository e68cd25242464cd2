#include "sailfit/adadelta.hpp"

#include <cmath>

#include "sailfit/error.hpp"

namespace sailfit {

void adadelta_step(AdadeltaState& state, std::vector<double>& params,
                   const std::vector<double>& grads) {
    const std::size_t n = params.size();
    if (grads.size() != n || state.avg_sq_grad.size() != n || state.avg_sq_update.size() != n)
        throw Error(Err::DimensionMismatch, "params/grads/state sizes disagree");
    for (double g : grads)
        if (!std::isfinite(g)) throw Error(Err::NonFiniteGradient, "gradient not finite");

    const double rho = state.rho;
    for (std::size_t i = 0; i < n; ++i) {
        const double g = grads[i];
        state.avg_sq_grad[i] = rho * state.avg_sq_grad[i] + (1.0 - rho) * g * g;
        const double delta = -std::sqrt(state.avg_sq_update[i] + state.epsilon) /
                             std::sqrt(state.avg_sq_grad[i] + state.epsilon) * g;
        state.avg_sq_update[i] = rho * state.avg_sq_update[i] + (1.0 - rho) * delta * delta;
        params[i] += delta;
    }
}

std::pair<LinearModel, std::vector<double>> fit_adadelta(const FeatureMatrix& X,
                                                         const TargetVector& y,
                                                         const AdadeltaConfig& config,
                                                         ExecMode mode) {
    if (config.rho <= 0 || config.rho >= 1)
        throw Error(Err::InvalidArgument, "rho must lie in (0,1)");
    if (config.epsilon <= 0) throw Error(Err::InvalidArgument, "epsilon must be > 0");
    if (config.l2_lambda < 0) throw Error(Err::InvalidArgument, "l2_lambda must be >= 0");
    if (y.size() != X.values.rows)
        throw Error(Err::LengthMismatch, "row/target count mismatch");
    if (y.empty()) throw Error(Err::EmptyInput, "no rows");
    if (!X.standardization.has_value()) {
        for (double v : X.values.data)
            if (std::fabs(v) > 1e3)
                throw Error(Err::InvalidArgument,
                            "iterative trainers need standardized features; found a column "
                            "value of magnitude > 1e3 and no standardization params");
    }

    const std::size_t p = X.values.cols;
    const Matrix& M = X.values;

    // One flat parameter vector: p coefficients then the intercept.
    std::vector<double> theta(p + 1, 0.0);
    AdadeltaState state(p + 1, config.rho, config.epsilon);

    std::vector<double> beta(p, 0.0), grad_beta(p), full_grad(p + 1);
    double grad_b = 0;
    std::vector<double> trace;
    double loss = linear_loss(M, y, beta, 0.0, config.l2_lambda, mode);
    trace.push_back(loss);
    const bool never_stop = config.tol < 0;
    const double tol = config.tol > 0 ? config.tol : 1e-10 * loss;

    for (std::size_t it = 0; it < config.max_iters; ++it) {
        for (std::size_t j = 0; j < p; ++j) beta[j] = theta[j];
        linear_gradient(M, y, beta, theta[p], config.l2_lambda, grad_beta, grad_b, mode);
        for (std::size_t j = 0; j < p; ++j) full_grad[j] = grad_beta[j];
        full_grad[p] = grad_b;
        adadelta_step(state, theta, full_grad);

        for (std::size_t j = 0; j < p; ++j) beta[j] = theta[j];
        double next = linear_loss(M, y, beta, theta[p], config.l2_lambda, mode);
        trace.push_back(next);
        if (!std::isfinite(next)) throw Error(Err::Diverged, "loss non-finite");
        if (!never_stop && loss - next < tol && next <= loss) {
            loss = next;
            break;
        }
        loss = next;
    }

    LinearModel m;
    m.schema = X.schema;
    for (std::size_t j = 0; j < p; ++j) m.coefficients[X.schema.columns[j].name] = theta[j];
    m.intercept = theta[p];
    m.standardization = X.standardization;
    return {std::move(m), std::move(trace)};
}

} // namespace sailfit
