#include "sailfit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "sailfit/error.hpp"
#include "sailfit/rng.hpp"
#include "sailfit/textio.hpp"

namespace sailfit {

namespace {

double feature_value(const SailboatRecord& r, const std::string& name) {
    if (name == "hull") return encode_hull(r.hull);
    if (name == "length_ft") return r.length_ft;
    if (name == "year") return static_cast<double>(r.year);
    if (name == "waterline_ft") return r.waterline_ft;
    if (name == "beam_ft") return r.beam_ft;
    if (name == "draft_ft") return r.draft_ft;
    if (name == "displacement_lb") return r.displacement_lb;
    if (name == "sail_area_sqft") return r.sail_area_sqft;
    if (name == "gdp") return r.gdp.value();
    return r.gdp_per_capita.value();
}

CorrelationResult correlate_one(const Records& records, const std::string& name,
                                ExecMode mode) {
    const std::size_t n = records.size();
    auto x = [&](std::size_t i) { return feature_value(records[i], name); };
    auto y = [&](std::size_t i) { return records[i].listing_price; };

    const double nd = static_cast<double>(n);
    double mean_x = pairwise_reduce(n, x, mode) / nd;
    double mean_y = pairwise_reduce(n, y, mode) / nd;
    double var_x = pairwise_reduce(
                       n, [&](std::size_t i) { return (x(i) - mean_x) * (x(i) - mean_x); },
                       mode) /
                   nd;
    double var_y = pairwise_reduce(
                       n, [&](std::size_t i) { return (y(i) - mean_y) * (y(i) - mean_y); },
                       mode) /
                   nd;
    double cov = pairwise_reduce(
                     n, [&](std::size_t i) { return (x(i) - mean_x) * (y(i) - mean_y); },
                     mode) /
                 nd;
    if (var_x == 0.0)
        throw Error(Err::ZeroVariance, "feature '" + name + "' is constant");
    if (var_y == 0.0)
        throw Error(Err::ZeroVariance, "listing price is constant");

    CorrelationResult res;
    res.feature = name;
    res.n = n;
    res.pearson_r = cov / std::sqrt(var_x * var_y);
    res.trend_slope = cov / var_x;
    res.trend_intercept = mean_y - res.trend_slope * mean_x;
    return res;
}

} // namespace

std::vector<CorrelationResult> correlate_features(const Records& records, ExecMode mode) {
    if (records.size() < 3)
        throw Error(Err::TooFewRows,
                    "correlation needs >= 3 records, got " + std::to_string(records.size()));

    std::vector<std::string> names = technical_feature_names();
    bool all_gdp = std::all_of(records.begin(), records.end(),
                               [](const SailboatRecord& r) { return r.gdp.has_value(); });
    bool all_gpc = std::all_of(records.begin(), records.end(), [](const SailboatRecord& r) {
        return r.gdp_per_capita.has_value();
    });
    if (all_gdp) names.push_back("gdp");
    if (all_gpc) names.push_back("gdp_per_capita");

    std::vector<CorrelationResult> results(names.size());
    if (mode == ExecMode::Parallel) {
        std::vector<std::string> failed(names.size());
#pragma omp parallel for schedule(static)
        for (long k = 0; k < static_cast<long>(names.size()); ++k) {
            try {
                results[static_cast<std::size_t>(k)] =
                    correlate_one(records, names[static_cast<std::size_t>(k)], ExecMode::Serial);
            } catch (const Error&) {
                failed[static_cast<std::size_t>(k)] = names[static_cast<std::size_t>(k)];
            }
        }
        for (const auto& name : failed)
            if (!name.empty()) correlate_one(records, name, ExecMode::Serial);  // rethrows
    } else {
        for (std::size_t k = 0; k < names.size(); ++k)
            results[k] = correlate_one(records, names[k], ExecMode::Serial);
    }
    return results;
}

std::string correlations_csv(const std::vector<CorrelationResult>& results) {
    std::string out = "feature,r,slope,intercept,n\n";
    for (const auto& r : results)
        out += r.feature + "," + fmt_double(r.pearson_r) + "," + fmt_double(r.trend_slope) +
               "," + fmt_double(r.trend_intercept) + "," + std::to_string(r.n) + "\n";
    return out;
}

RegionalEffects fit_regional(const Records& records, ModelFamily family, RegionScheme scheme,
                             Region base, ExecMode mode) {
    if (base != Region::Caribbean)
        throw Error(Err::InvalidArgument,
                    "only the Caribbean base level is supported by the region encoding");
    if (family == ModelFamily::Gbr)
        throw Error(Err::InvalidArgument,
                    "regional effects are read from linear coefficients; use a linear family");
    std::set<Region> seen;
    for (const auto& r : records) seen.insert(r.region);
    if (seen.size() < 2)
        throw Error(Err::SingleRegion, "records span a single region; effects unidentifiable");

    ModelSpec spec = default_spec(family);
    spec.include_region = true;
    spec.region_scheme = scheme;
    spec.drop_base = true;
    TrainedModel trained = train_model(records, spec, mode);

    RegionalEffects out;
    out.base_region = base;
    out.model = trained.linear();
    out.effects[base] = 0.0;
    for (const auto& col : out.model.schema.columns) {
        if (col.group != "region") continue;
        Region r = parse_region(col.level).value();
        out.effects[r] = out.model.coefficients.at(col.name);
    }
    return out;
}

namespace {

// Rebuilds build_design_matrix inputs from a fitted model's schema so a bare
// LinearModel can be applied to fresh records.
struct SchemaRecipe {
    std::vector<std::string> selection;
    RegionScheme scheme = RegionScheme::ThreeRegion;
    bool drop_base = false;
    bool has_region = false;
};

SchemaRecipe recipe_from_schema(const FeatureSchema& schema) {
    SchemaRecipe recipe;
    for (const auto& col : schema.columns) {
        if (col.kind == ColumnKind::Numeric) {
            recipe.selection.push_back(col.name);
        } else if (col.group == "region" && !recipe.has_region) {
            recipe.has_region = true;
            recipe.selection.push_back("region");
            recipe.scheme = col.group_levels.size() == 4 ? RegionScheme::FourRegionHK
                                                         : RegionScheme::ThreeRegion;
            recipe.drop_base = col.dropped_level.has_value();
        }
    }
    return recipe;
}

} // namespace

CounterfactualResult hk_counterfactual(const LinearModel& model, const Records& records,
                                       std::size_t sample_size, std::uint64_t seed) {
    SchemaRecipe recipe = recipe_from_schema(model.schema);
    if (!recipe.has_region || recipe.scheme != RegionScheme::FourRegionHK)
        throw Error(Err::SchemaMismatch,
                    "counterfactual needs a model trained with the 4-region scheme");

    Records pool;
    for (const auto& r : records)
        if (r.region != Region::HongKong) pool.push_back(r);
    if (pool.empty()) throw Error(Err::EmptyInput, "no non-HK records to sample");

    std::vector<std::size_t> order(pool.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);
    order.resize(std::min(sample_size, order.size()));

    // delta is the region-coefficient difference; by linearity this equals
    // the prediction difference, and computing it once per region keeps it
    // bitwise identical for every boat sharing an origin.
    auto region_coef = [&](Region r) {
        if (recipe.drop_base && r == Region::Caribbean) return 0.0;
        return model.coefficients.at(std::string("region_") + region_name(r));
    };
    const double hk_coef = region_coef(Region::HongKong);

    CounterfactualResult result;
    for (std::size_t idx : order) {
        const SailboatRecord& original = pool[idx];
        DesignMatrix d = build_design_matrix({original}, recipe.selection, recipe.scheme,
                                             recipe.drop_base, false);
        CounterfactualRow row;
        row.id = original.id;
        row.hull = original.hull;
        row.original_region = original.region;
        row.pred_original = predict(model, d.X, ExecMode::Serial)[0];
        row.delta = hk_coef - region_coef(original.region);
        row.pred_hk = row.pred_original + row.delta;
        (original.hull == Hull::Monohull ? result.monohulls : result.catamarans)
            .push_back(std::move(row));
    }
    return result;
}

std::string counterfactual_csv(const CounterfactualResult& result) {
    std::string out = "id,hull,original_region,pred_original,pred_hk,delta\n";
    auto emit = [&](const std::vector<CounterfactualRow>& rows) {
        for (const auto& r : rows)
            out += r.id + "," + hull_name(r.hull) + "," + region_name(r.original_region) +
                   "," + fmt_double(r.pred_original) + "," + fmt_double(r.pred_hk) + "," +
                   fmt_double(r.delta) + "\n";
    };
    emit(result.monohulls);
    emit(result.catamarans);
    return out;
}

} // namespace sailfit
