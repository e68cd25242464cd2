#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sailfit/tree.hpp"

namespace sailfit {

struct BoostedEnsemble {
    FeatureSchema schema;
    double initial_prediction = 0;  // mean of training targets, USD
    std::vector<RegressionTree> trees;
    double learning_rate = 0.1;
    double l2_lambda = 0.0;

    std::size_t n_iters() const { return trees.size(); }
};

struct BoostConfig {
    std::size_t n_iters = 500;
    double learning_rate = 0.1;  // in (0, 1]
    double l2_lambda = 0.0;
    TreeConfig tree_config;
    double tol = 0.0;  // 0 = auto: 1e-10 * initial training loss; < 0 = run all rounds
};

// Negative gradient of the squared-error part of the training loss with
// respect to the current predictions, scaled to plain residuals y - yhat
// (the 2/n factor is folded into the learning rate). The L2 penalty does not
// depend on the predictions, so lambda and theta_proxy leave the result
// unchanged; they mirror the loss signature being differentiated.
std::vector<double> negative_gradient(const TargetVector& targets,
                                      const TargetVector& current_predictions,
                                      double lambda = 0.0,
                                      const std::vector<double>& theta_proxy = {});

// Boosting loop: start from the target mean, fit a tree to the residuals
// each round, add learning_rate * tree. Leaf values are regularized as
// sum(residuals) / (count + lambda * n). Stops after n_iters rounds or when
// the training loss improves by less than tol. The returned trace holds the
// training MSE before the first round and after each round; it is
// non-increasing for learning_rate <= 1.
std::pair<BoostedEnsemble, std::vector<double>> fit_boosted(const FeatureMatrix& X,
                                                            const TargetVector& y,
                                                            const BoostConfig& config,
                                                            ExecMode mode = ExecMode::Parallel);

// initial + learning_rate * sum of tree outputs, per row.
TargetVector predict_boosted(const BoostedEnsemble& ensemble, const FeatureMatrix& X,
                             ExecMode mode = ExecMode::Parallel);

// Header (initial, learning rate, lambda, n_iters) plus schema, followed by
// the concatenated preorder tree encodings; exact round-trip.
std::string save_boosted(const BoostedEnsemble& ensemble);
BoostedEnsemble load_boosted(const std::string& text);

} // namespace sailfit
