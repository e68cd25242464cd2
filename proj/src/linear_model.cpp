#include "sailfit/linear_model.hpp"

#include <cmath>

#include "sailfit/error.hpp"
#include "sailfit/linalg.hpp"
#include "sailfit/metrics.hpp"
#include "sailfit/textio.hpp"

namespace sailfit {

std::vector<double> LinearModel::coefficient_vector() const {
    std::vector<double> beta;
    beta.reserve(schema.width());
    for (const auto& c : schema.columns) beta.push_back(coefficients.at(c.name));
    return beta;
}

namespace {

LinearModel assemble_model(const FeatureMatrix& X, const LsqSolution& sol) {
    LinearModel m;
    m.schema = X.schema;
    m.intercept = sol.intercept;
    for (std::size_t j = 0; j < X.schema.width(); ++j)
        m.coefficients[X.schema.columns[j].name] = sol.beta[j];
    m.standardization = X.standardization;
    return m;
}

// The matrix predict() should evaluate the model on: X's own values when it
// is already in the model's space, a freshly standardized copy otherwise.
const Matrix& model_space_values(const LinearModel& model, const FeatureMatrix& X,
                                 Matrix& scratch) {
    if (!(X.schema == model.schema))
        throw Error(Err::SchemaMismatch, "feature matrix schema differs from model schema");
    if (X.standardization.has_value()) {
        bool same = model.standardization.has_value() &&
                    *X.standardization == *model.standardization;
        if (!same)
            throw Error(Err::SchemaMismatch,
                        "matrix standardization params differ from the model's");
        return X.values;
    }
    if (!model.standardization.has_value()) return X.values;
    scratch = apply_standardization(X.values, X.schema, *model.standardization);
    return scratch;
}

} // namespace

LinearModel fit_ols(const FeatureMatrix& X, const TargetVector& y, ExecMode mode) {
    const std::size_t n = X.values.rows;
    const std::size_t p = X.values.cols;
    if (y.size() != n)
        throw Error(Err::LengthMismatch, std::to_string(n) + " rows vs " +
                                             std::to_string(y.size()) + " targets");
    if (n < p + 1)
        throw Error(Err::TooFewRows, "need at least p+1 = " + std::to_string(p + 1) +
                                         " rows, got " + std::to_string(n));
    int bad = -1;
    try {
        LsqSolution sol = solve_normal_equations(X.values, y, 0.0, mode, &bad);
        return assemble_model(X, sol);
    } catch (const Error& e) {
        if (e.kind() == Err::RankDeficient && bad >= 0) {
            std::string name = bad < static_cast<int>(p)
                                   ? X.schema.columns[static_cast<std::size_t>(bad)].name
                                   : std::string("intercept");
            throw Error(Err::RankDeficient, "design matrix singular at column '" + name +
                                                "' (collinear or constant)");
        }
        throw;
    }
}

double loss_l2(const FeatureMatrix& X, const TargetVector& y, const LinearModel& model,
               double lambda) {
    if (lambda < 0) throw Error(Err::InvalidArgument, "lambda must be >= 0");
    TargetVector yhat = predict(model, X);
    double penalty = 0;
    for (const auto& [name, c] : model.coefficients) {
        (void)name;
        penalty += c * c;
    }
    return mse(y, yhat) + lambda * penalty;
}

double linear_loss(const Matrix& X, const TargetVector& y, const std::vector<double>& beta,
                   double intercept, double lambda, ExecMode mode) {
    const std::size_t n = X.rows;
    double sse = pairwise_reduce(
        n,
        [&](std::size_t i) {
            double pred = intercept;
            const double* row = X.row(i);
            for (std::size_t j = 0; j < X.cols; ++j) pred += beta[j] * row[j];
            double d = y[i] - pred;
            return d * d;
        },
        mode);
    double penalty = 0;
    for (double b : beta) penalty += b * b;
    return sse / static_cast<double>(n) + lambda * penalty;
}

void linear_gradient(const Matrix& X, const TargetVector& y, const std::vector<double>& beta,
                     double intercept, double lambda, std::vector<double>& grad_beta,
                     double& grad_b, ExecMode mode) {
    const std::size_t n = X.rows;
    const std::size_t p = X.cols;
    std::vector<double> resid(n);
    if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < static_cast<long>(n); ++i) {
            double pred = intercept;
            const double* row = X.row(static_cast<std::size_t>(i));
            for (std::size_t j = 0; j < p; ++j) pred += beta[j] * row[j];
            resid[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] - pred;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            double pred = intercept;
            const double* row = X.row(i);
            for (std::size_t j = 0; j < p; ++j) pred += beta[j] * row[j];
            resid[i] = y[i] - pred;
        }
    }
    grad_beta.assign(p, 0.0);
    const double two_over_n = 2.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < p; ++j) {
        double s = pairwise_reduce(n, [&](std::size_t i) { return X(i, j) * resid[i]; }, mode);
        grad_beta[j] = -two_over_n * s + 2.0 * lambda * beta[j];
    }
    grad_b = -two_over_n * pairwise_reduce(n, [&](std::size_t i) { return resid[i]; }, mode);
}

namespace {

void require_standardized(const FeatureMatrix& X) {
    if (X.standardization.has_value()) return;
    for (double v : X.values.data)
        if (std::fabs(v) > 1e3)
            throw Error(Err::InvalidArgument,
                        "iterative trainers need standardized features; found a column "
                        "value of magnitude > 1e3 and no standardization params");
}

} // namespace

std::pair<LinearModel, std::vector<double>> fit_gd(const FeatureMatrix& X,
                                                   const TargetVector& y,
                                                   const GDConfig& config,
                                                   ExecMode mode) {
    if (config.learning_rate <= 0) throw Error(Err::InvalidArgument, "learning_rate must be > 0");
    if (config.l2_lambda < 0) throw Error(Err::InvalidArgument, "l2_lambda must be >= 0");
    if (config.max_iters == 0) throw Error(Err::InvalidArgument, "max_iters must be > 0");
    if (y.size() != X.values.rows)
        throw Error(Err::LengthMismatch, "row/target count mismatch");
    if (y.empty()) throw Error(Err::EmptyInput, "no rows");
    require_standardized(X);

    const std::size_t p = X.values.cols;
    const Matrix& M = X.values;

    double alpha = config.learning_rate;
    const int max_halvings = 10;
    std::vector<double> beta, trace, grad(p);
    double intercept = 0, grad_b = 0;

    for (int attempt = 0; attempt <= max_halvings; ++attempt) {
        const bool last_attempt = attempt == max_halvings;
        beta.assign(p, 0.0);
        intercept = 0.0;
        trace.clear();
        double loss = linear_loss(M, y, beta, intercept, config.l2_lambda, mode);
        trace.push_back(loss);
        double tol = config.tol > 0 ? config.tol : 1e-8 * loss;
        bool unstable = false;

        for (std::size_t it = 0; it < config.max_iters; ++it) {
            linear_gradient(M, y, beta, intercept, config.l2_lambda, grad, grad_b, mode);
            for (std::size_t j = 0; j < p; ++j) beta[j] -= alpha * grad[j];
            intercept -= alpha * grad_b;
            double next = linear_loss(M, y, beta, intercept, config.l2_lambda, mode);
            trace.push_back(next);
            if (!std::isfinite(next)) {
                if (last_attempt) throw Error(Err::Diverged, "loss non-finite after 10 halvings");
                unstable = true;
                break;
            }
            if (next > loss && !last_attempt) {
                unstable = true;
                break;
            }
            if (loss - next < tol && loss >= next) {
                loss = next;
                break;
            }
            loss = next;
        }
        if (!unstable) break;
        alpha *= 0.5;
    }

    LinearModel m;
    m.schema = X.schema;
    m.intercept = intercept;
    for (std::size_t j = 0; j < p; ++j) m.coefficients[X.schema.columns[j].name] = beta[j];
    m.standardization = X.standardization;
    return {std::move(m), std::move(trace)};
}

TargetVector predict(const LinearModel& model, const FeatureMatrix& X, ExecMode mode) {
    Matrix scratch;
    const Matrix& M = model_space_values(model, X, scratch);
    std::vector<double> beta = model.coefficient_vector();
    TargetVector yhat(M.rows);
    if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < static_cast<long>(M.rows); ++i) {
            double pred = model.intercept;
            const double* row = M.row(static_cast<std::size_t>(i));
            for (std::size_t j = 0; j < M.cols; ++j) pred += beta[j] * row[j];
            yhat[static_cast<std::size_t>(i)] = pred;
        }
    } else {
        for (std::size_t i = 0; i < M.rows; ++i) {
            double pred = model.intercept;
            const double* row = M.row(i);
            for (std::size_t j = 0; j < M.cols; ++j) pred += beta[j] * row[j];
            yhat[i] = pred;
        }
    }
    return yhat;
}

std::string save_linear_model(const LinearModel& model) {
    std::string out = "model=linear\n";
    out += "intercept=" + fmt_double(model.intercept) + "\n";
    out += serialize_schema(model.schema);
    for (const auto& c : model.schema.columns)
        out += "coef." + c.name + "=" + fmt_double(model.coefficients.at(c.name)) + "\n";
    if (model.standardization) {
        for (const auto& e : model.standardization->entries) {
            out += "std." + e.column + ".mean=" + fmt_double(e.mean) + "\n";
            out += "std." + e.column + ".stddev=" + fmt_double(e.stddev) + "\n";
        }
    }
    return out;
}

LinearModel load_linear_model(const std::string& text) {
    KvMap kv = parse_kv_lines(text);
    if (kv["model"] != "linear")
        throw Error(Err::SchemaMismatch, "not a linear model file");
    LinearModel m;
    m.schema = parse_schema(kv);
    m.intercept = parse_double(kv.at("intercept")).value();
    for (const auto& c : m.schema.columns) {
        auto it = kv.find("coef." + c.name);
        if (it == kv.end())
            throw Error(Err::SchemaMismatch, "model file missing coefficient for " + c.name);
        m.coefficients[c.name] = parse_double(it->second).value();
    }
    Standardization std_params;
    for (const auto& c : m.schema.columns) {
        auto mit = kv.find("std." + c.name + ".mean");
        auto sit = kv.find("std." + c.name + ".stddev");
        if (mit != kv.end() && sit != kv.end())
            std_params.entries.push_back({c.name, parse_double(mit->second).value(),
                                          parse_double(sit->second).value()});
    }
    if (!std_params.empty()) m.standardization = std_params;
    return m;
}

} // namespace sailfit
