#pragma once

#include <string>
#include <vector>

#include "sailfit/features.hpp"
#include "sailfit/parallel.hpp"

namespace sailfit {

struct EvalReport {
    std::string model_name;
    std::string split_name;
    std::size_t n = 0;
    double mse = 0;
    double mae = 0;
    std::vector<double> residuals;  // y_i - yhat_i, USD
};

// mean((y - yhat)^2). Throws LengthMismatch / EmptyInput.
double mse(const TargetVector& actual, const TargetVector& predicted,
           ExecMode mode = ExecMode::Parallel);

// mean(|y - yhat|). Same contract as mse.
double mae(const TargetVector& actual, const TargetVector& predicted,
           ExecMode mode = ExecMode::Parallel);

// Elementwise y_i - yhat_i.
std::vector<double> residuals(const TargetVector& actual, const TargetVector& predicted);

EvalReport make_eval_report(const std::string& model_name, const std::string& split_name,
                            const TargetVector& actual, const TargetVector& predicted);

} // namespace sailfit
