#include "sailfit/metrics.hpp"

#include <cmath>

#include "sailfit/error.hpp"

namespace sailfit {

namespace {

void check_lengths(const TargetVector& a, const TargetVector& b) {
    if (a.size() != b.size())
        throw Error(Err::LengthMismatch, std::to_string(a.size()) + " actual vs " +
                                             std::to_string(b.size()) + " predicted");
    if (a.empty()) throw Error(Err::EmptyInput, "no observations");
}

} // namespace

double mse(const TargetVector& actual, const TargetVector& predicted, ExecMode mode) {
    check_lengths(actual, predicted);
    double total = pairwise_reduce(
        actual.size(),
        [&](std::size_t i) {
            double d = actual[i] - predicted[i];
            return d * d;
        },
        mode);
    return total / static_cast<double>(actual.size());
}

double mae(const TargetVector& actual, const TargetVector& predicted, ExecMode mode) {
    check_lengths(actual, predicted);
    double total = pairwise_reduce(
        actual.size(), [&](std::size_t i) { return std::fabs(actual[i] - predicted[i]); },
        mode);
    return total / static_cast<double>(actual.size());
}

std::vector<double> residuals(const TargetVector& actual, const TargetVector& predicted) {
    if (actual.size() != predicted.size())
        throw Error(Err::LengthMismatch, std::to_string(actual.size()) + " actual vs " +
                                             std::to_string(predicted.size()) + " predicted");
    std::vector<double> r(actual.size());
    for (std::size_t i = 0; i < actual.size(); ++i) r[i] = actual[i] - predicted[i];
    return r;
}

EvalReport make_eval_report(const std::string& model_name, const std::string& split_name,
                            const TargetVector& actual, const TargetVector& predicted) {
    EvalReport rep;
    rep.model_name = model_name;
    rep.split_name = split_name;
    rep.n = actual.size();
    rep.mse = mse(actual, predicted);
    rep.mae = mae(actual, predicted);
    rep.residuals = residuals(actual, predicted);
    return rep;
}

} // namespace sailfit
