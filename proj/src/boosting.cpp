#include "sailfit/boosting.hpp"

#include <cmath>
#include <sstream>

#include "sailfit/error.hpp"
#include "sailfit/metrics.hpp"
#include "sailfit/textio.hpp"

namespace sailfit {

std::vector<double> negative_gradient(const TargetVector& targets,
                                      const TargetVector& current_predictions, double lambda,
                                      const std::vector<double>& theta_proxy) {
    (void)lambda;
    (void)theta_proxy;
    if (targets.size() != current_predictions.size())
        throw Error(Err::LengthMismatch,
                    std::to_string(targets.size()) + " targets vs " +
                        std::to_string(current_predictions.size()) + " predictions");
    std::vector<double> g(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i)
        g[i] = targets[i] - current_predictions[i];
    return g;
}

std::pair<BoostedEnsemble, std::vector<double>> fit_boosted(const FeatureMatrix& X,
                                                            const TargetVector& y,
                                                            const BoostConfig& config,
                                                            ExecMode mode) {
    const std::size_t n = X.values.rows;
    if (n < 2) throw Error(Err::EmptyInput, "boosting needs at least 2 rows");
    if (y.size() != n) throw Error(Err::LengthMismatch, "row/target count mismatch");
    if (config.learning_rate <= 0 || config.learning_rate > 1)
        throw Error(Err::InvalidArgument, "learning_rate must lie in (0,1]");
    if (config.l2_lambda < 0) throw Error(Err::InvalidArgument, "l2_lambda must be >= 0");

    BoostedEnsemble ens;
    ens.schema = X.schema;
    ens.learning_rate = config.learning_rate;
    ens.l2_lambda = config.l2_lambda;
    ens.initial_prediction = pairwise_sum(y, mode) / static_cast<double>(n);

    TargetVector pred(n, ens.initial_prediction);
    std::vector<double> trace;
    double loss = mse(y, pred, mode);
    trace.push_back(loss);
    const bool never_stop = config.tol < 0;
    const double tol = config.tol > 0 ? config.tol : 1e-10 * loss;
    const double leaf_offset = config.l2_lambda * static_cast<double>(n);

    for (std::size_t round = 0; round < config.n_iters; ++round) {
        std::vector<double> grad = negative_gradient(y, pred);
        RegressionTree tree = fit_tree(X.values, grad, config.tree_config, mode, leaf_offset);
        if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
            for (long i = 0; i < static_cast<long>(n); ++i)
                pred[static_cast<std::size_t>(i)] +=
                    config.learning_rate *
                    predict_tree(tree, X.values.row(static_cast<std::size_t>(i)), X.values.cols);
        } else {
            for (std::size_t i = 0; i < n; ++i)
                pred[i] += config.learning_rate * predict_tree(tree, X.values.row(i), X.values.cols);
        }
        ens.trees.push_back(std::move(tree));
        double next = mse(y, pred, mode);
        trace.push_back(next);
        if (!std::isfinite(next)) throw Error(Err::NonFiniteLoss, "training loss non-finite");
        if (!never_stop && loss - next < tol) {
            loss = next;
            break;
        }
        loss = next;
    }
    return {std::move(ens), std::move(trace)};
}

TargetVector predict_boosted(const BoostedEnsemble& ensemble, const FeatureMatrix& X,
                             ExecMode mode) {
    if (!(X.schema == ensemble.schema))
        throw Error(Err::SchemaMismatch, "feature matrix schema differs from ensemble schema");
    const std::size_t n = X.values.rows;
    TargetVector out(n);
    auto one_row = [&](std::size_t i) {
        double acc = 0;
        for (const auto& tree : ensemble.trees)
            acc += predict_tree(tree, X.values.row(i), X.values.cols);
        return ensemble.initial_prediction + ensemble.learning_rate * acc;
    };
    if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < static_cast<long>(n); ++i)
            out[static_cast<std::size_t>(i)] = one_row(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < n; ++i) out[i] = one_row(i);
    }
    return out;
}

std::string save_boosted(const BoostedEnsemble& ensemble) {
    std::string out = "model=gbr\n";
    out += "initial=" + fmt_double(ensemble.initial_prediction) + "\n";
    out += "learning_rate=" + fmt_double(ensemble.learning_rate) + "\n";
    out += "l2_lambda=" + fmt_double(ensemble.l2_lambda) + "\n";
    out += "n_iters=" + std::to_string(ensemble.n_iters()) + "\n";
    out += serialize_schema(ensemble.schema);
    for (std::size_t k = 0; k < ensemble.trees.size(); ++k) {
        out += "tree." + std::to_string(k) +
               ".nodes=" + std::to_string(ensemble.trees[k].nodes.size()) + "\n";
        out += serialize_tree(ensemble.trees[k]);
    }
    return out;
}

BoostedEnsemble load_boosted(const std::string& text) {
    KvMap kv;
    std::vector<std::string> node_lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == 'I' || line[0] == 'L') {
            node_lines.push_back(line);
        } else {
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw Error(Err::SchemaMismatch, "bad ensemble line: " + line);
            kv[line.substr(0, eq)] = line.substr(eq + 1);
        }
    }
    if (kv["model"] != "gbr") throw Error(Err::SchemaMismatch, "not a gbr model file");

    BoostedEnsemble ens;
    ens.initial_prediction = parse_double(kv.at("initial")).value();
    ens.learning_rate = parse_double(kv.at("learning_rate")).value();
    ens.l2_lambda = parse_double(kv.at("l2_lambda")).value();
    ens.schema = parse_schema(kv);
    const std::size_t n_iters = parse_u64(kv.at("n_iters")).value();
    std::size_t pos = 0;
    for (std::size_t k = 0; k < n_iters; ++k)
        ens.trees.push_back(parse_tree_lines(node_lines, pos));
    if (pos != node_lines.size())
        throw Error(Err::SchemaMismatch, "trailing tree data in ensemble file");
    return ens;
}

} // namespace sailfit
