#include "sailfit/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "sailfit/error.hpp"
#include "sailfit/rng.hpp"
#include "sailfit/textio.hpp"

namespace sailfit {

const char* family_name(ModelFamily f) {
    switch (f) {
        case ModelFamily::Ols: return "ols";
        case ModelFamily::Gd: return "gd";
        case ModelFamily::Adadelta: return "adadelta";
        case ModelFamily::Gbr: return "gbr";
    }
    return "?";
}

std::optional<ModelFamily> parse_family(const std::string& s) {
    if (s == "ols") return ModelFamily::Ols;
    if (s == "gd") return ModelFamily::Gd;
    if (s == "adadelta") return ModelFamily::Adadelta;
    if (s == "gbr") return ModelFamily::Gbr;
    return std::nullopt;
}

std::vector<std::string> ModelSpec::design_columns() const {
    std::vector<std::string> cols = features.empty() ? technical_feature_names() : features;
    if (include_region &&
        std::find(cols.begin(), cols.end(), "region") == cols.end())
        cols.push_back("region");
    return cols;
}

ModelSpec default_spec(ModelFamily family) {
    ModelSpec spec;
    spec.family = family;
    spec.standardize = family == ModelFamily::Gd || family == ModelFamily::Adadelta;
    return spec;
}

TrainedModel train_model(const Records& train, const ModelSpec& spec, ExecMode mode,
                         std::vector<double>* loss_trace) {
    bool standardize = spec.standardize && spec.family != ModelFamily::Gbr;
    DesignMatrix d = build_design_matrix(train, spec.design_columns(), spec.region_scheme,
                                         spec.drop_base, standardize);
    TrainedModel out;
    out.spec = spec;
    if (loss_trace) loss_trace->clear();
    switch (spec.family) {
        case ModelFamily::Ols:
            out.model = fit_ols(d.X, d.y, mode);
            break;
        case ModelFamily::Gd: {
            auto [m, trace] = fit_gd(d.X, d.y, spec.gd, mode);
            out.model = std::move(m);
            if (loss_trace) *loss_trace = std::move(trace);
            break;
        }
        case ModelFamily::Adadelta: {
            auto [m, trace] = fit_adadelta(d.X, d.y, spec.adadelta, mode);
            out.model = std::move(m);
            if (loss_trace) *loss_trace = std::move(trace);
            break;
        }
        case ModelFamily::Gbr: {
            auto [m, trace] = fit_boosted(d.X, d.y, spec.boost, mode);
            out.model = std::move(m);
            if (loss_trace) *loss_trace = std::move(trace);
            break;
        }
    }
    return out;
}

TargetVector predict_model(const TrainedModel& trained, const Records& rows, ExecMode mode) {
    DesignMatrix d = build_design_matrix(rows, trained.spec.design_columns(),
                                         trained.spec.region_scheme, trained.spec.drop_base,
                                         /*standardize=*/false);
    if (trained.is_linear()) return predict(trained.linear(), d.X, mode);
    return predict_boosted(trained.boosted(), d.X, mode);
}

SplitPlan make_split(const std::vector<std::string>& ids, std::uint64_t seed) {
    if (ids.size() < 2)
        throw Error(Err::TooFewRows, "need at least 2 ids to split, got " +
                                         std::to_string(ids.size()));
    SplitPlan plan;
    plan.seed = seed;
    std::vector<std::string> shuffled = ids;
    Rng rng(seed);
    rng.shuffle(shuffled);
    const std::size_t half = (shuffled.size() + 1) / 2;
    plan.half_a_ids.assign(shuffled.begin(), shuffled.begin() + static_cast<long>(half));
    plan.half_b_ids.assign(shuffled.begin() + static_cast<long>(half), shuffled.end());
    return plan;
}

namespace {

Records select_by_ids(const Records& dataset, const std::vector<std::string>& ids) {
    std::map<std::string, const SailboatRecord*> by_id;
    for (const auto& r : dataset) by_id[r.id] = &r;
    Records out;
    out.reserve(ids.size());
    for (const auto& id : ids) {
        auto it = by_id.find(id);
        if (it == by_id.end())
            throw Error(Err::InvalidArgument, "split id '" + id + "' not in dataset");
        out.push_back(*it->second);
    }
    return out;
}

double relative_gap(double fwd, double bwd) {
    double lo = std::min(fwd, bwd);
    double diff = std::fabs(fwd - bwd);
    if (lo == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return diff / lo;
}

EvalReport eval_direction(const Records& train, const Records& test, const ModelSpec& spec,
                          const std::string& split_name, ExecMode mode) {
    TrainedModel m = train_model(train, spec, mode);
    TargetVector yhat = predict_model(m, test, mode);
    TargetVector y;
    y.reserve(test.size());
    for (const auto& r : test) y.push_back(r.listing_price);
    return make_eval_report(family_name(spec.family), split_name, y, yhat);
}

} // namespace

SwapResult run_swap(const Records& dataset, const ModelSpec& spec, const SplitPlan& plan,
                    ExecMode mode) {
    Records half_a = select_by_ids(dataset, plan.half_a_ids);
    Records half_b = select_by_ids(dataset, plan.half_b_ids);

    SwapResult result;
    result.forward = eval_direction(half_a, half_b, spec, "train_a_test_b", mode);
    result.backward = eval_direction(half_b, half_a, spec, "train_b_test_a", mode);
    result.relative_mse_gap = relative_gap(result.forward.mse, result.backward.mse);
    result.relative_mae_gap = relative_gap(result.forward.mae, result.backward.mae);
    return result;
}

std::vector<EvalReport> compare_models(const Records& dataset,
                                       const std::vector<ModelSpec>& specs,
                                       const SplitPlan& plan, ExecMode mode) {
    if (specs.empty()) throw Error(Err::InvalidArgument, "no model specs given");
    Records half_a = select_by_ids(dataset, plan.half_a_ids);
    Records half_b = select_by_ids(dataset, plan.half_b_ids);
    std::vector<EvalReport> reports;
    reports.reserve(specs.size());
    for (const auto& spec : specs)
        reports.push_back(eval_direction(half_a, half_b, spec, "train_a_test_b", mode));
    return reports;
}

std::string comparison_csv(const std::vector<EvalReport>& reports) {
    std::string out = "model,split,n,mse,mae\n";
    for (const auto& r : reports)
        out += r.model_name + "," + r.split_name + "," + std::to_string(r.n) + "," +
               fmt_double(r.mse) + "," + fmt_double(r.mae) + "\n";
    return out;
}

std::string comparison_markdown(const std::vector<EvalReport>& reports) {
    std::string out = "| model | split | n | mse | mae |\n|---|---|---|---|---|\n";
    for (const auto& r : reports)
        out += "| " + r.model_name + " | " + r.split_name + " | " + std::to_string(r.n) +
               " | " + fmt_double(r.mse) + " | " + fmt_double(r.mae) + " |\n";
    return out;
}

} // namespace sailfit
