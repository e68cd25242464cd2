#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "sailfit/adadelta.hpp"
#include "sailfit/boosting.hpp"
#include "sailfit/ingest.hpp"
#include "sailfit/metrics.hpp"

namespace sailfit {

enum class ModelFamily { Ols, Gd, Adadelta, Gbr };

const char* family_name(ModelFamily f);
std::optional<ModelFamily> parse_family(const std::string& s);

// What to train and on which design. Feature names are build_design_matrix
// inputs; add "region" to include the dummy group. standardize is ignored for
// gbr (trees are split-point models, scale does not reach them).
struct ModelSpec {
    ModelFamily family = ModelFamily::Ols;
    std::vector<std::string> features;  // empty = the 8 technical regressors
    bool include_region = false;
    RegionScheme region_scheme = RegionScheme::ThreeRegion;
    bool drop_base = true;
    bool standardize = false;  // forced true for gd/adadelta by default_spec
    GDConfig gd;
    AdadeltaConfig adadelta;
    BoostConfig boost;

    std::vector<std::string> design_columns() const;
};

// Family defaults: the paper's 8 regressors, standardization on for the
// iterative trainers only.
ModelSpec default_spec(ModelFamily family);

struct TrainedModel {
    ModelSpec spec;
    std::variant<LinearModel, BoostedEnsemble> model;

    bool is_linear() const { return std::holds_alternative<LinearModel>(model); }
    const LinearModel& linear() const { return std::get<LinearModel>(model); }
    const BoostedEnsemble& boosted() const { return std::get<BoostedEnsemble>(model); }
};

// Fits spec.family on the given rows; standardization statistics come from
// these rows only. loss_trace (when non-null) receives the iterative
// trainers' per-iteration loss; OLS leaves it empty.
TrainedModel train_model(const Records& train, const ModelSpec& spec,
                         ExecMode mode = ExecMode::Parallel,
                         std::vector<double>* loss_trace = nullptr);

// Predicts unseen rows: builds the raw design matrix and lets the model map
// it into its own standardization space.
TargetVector predict_model(const TrainedModel& trained, const Records& rows,
                           ExecMode mode = ExecMode::Parallel);

struct SplitPlan {
    std::uint64_t seed = 0;
    std::vector<std::string> half_a_ids;
    std::vector<std::string> half_b_ids;
};

// Fisher-Yates shuffle of the ids under the documented stream, then halve;
// half A gets the extra id when the count is odd. Throws TooFewRows below 2.
SplitPlan make_split(const std::vector<std::string>& ids, std::uint64_t seed);

struct SwapResult {
    EvalReport forward;   // train A, test B
    EvalReport backward;  // train B, test A
    double relative_mse_gap = 0;  // |fwd - bwd| / min(fwd, bwd)
    double relative_mae_gap = 0;
};

// Trains on each half and tests on the other; nothing derived from a test
// half ever reaches its model.
SwapResult run_swap(const Records& dataset, const ModelSpec& spec, const SplitPlan& plan,
                    ExecMode mode = ExecMode::Parallel);

// One report per spec on the identical split (train A, test B), in spec order.
std::vector<EvalReport> compare_models(const Records& dataset,
                                       const std::vector<ModelSpec>& specs,
                                       const SplitPlan& plan,
                                       ExecMode mode = ExecMode::Parallel);

// columns: model, split, n, mse, mae
std::string comparison_csv(const std::vector<EvalReport>& reports);
std::string comparison_markdown(const std::vector<EvalReport>& reports);

} // namespace sailfit
