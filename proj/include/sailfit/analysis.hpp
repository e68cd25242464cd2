#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sailfit/evaluation.hpp"

namespace sailfit {

struct CorrelationResult {
    std::string feature;
    double pearson_r = 0;
    double trend_slope = 0;      // simple OLS of price on this feature alone
    double trend_intercept = 0;
    std::size_t n = 0;
};

// Pearson r and a univariate trend line per feature vs listing price, over
// the 8 regressors (hull as 0/1, so r is the point-biserial value) plus the
// GDP columns when every record carries them. Needs >= 3 records; throws
// ZeroVariance for constant features.
std::vector<CorrelationResult> correlate_features(const Records& records,
                                                  ExecMode mode = ExecMode::Parallel);

std::string correlations_csv(const std::vector<CorrelationResult>& results);

struct RegionalEffects {
    Region base_region = Region::Caribbean;
    std::map<Region, double> effects;  // USD relative to base; base maps to 0
    LinearModel model;
};

// Linear fit on the 8 technical features plus region dummies with the base
// dropped; the effects are the dummy coefficients. family must be one of the
// linear trainers. Throws SingleRegion when the records span fewer than two
// regions.
RegionalEffects fit_regional(const Records& records, ModelFamily family, RegionScheme scheme,
                             Region base = Region::Caribbean,
                             ExecMode mode = ExecMode::Parallel);

struct CounterfactualRow {
    std::string id;
    Hull hull = Hull::Monohull;
    Region original_region = Region::Caribbean;
    double pred_original = 0;
    double pred_hk = 0;
    double delta = 0;  // pred_hk - pred_original, a pure region-coefficient difference
};

struct CounterfactualResult {
    std::vector<CounterfactualRow> monohulls;
    std::vector<CounterfactualRow> catamarans;
};

// Relabels a seeded sample of non-HK boats to Hong Kong under a 4-region
// linear model and reports the prediction shift, grouped by hull type.
// sample_size is capped at the available rows. Throws SchemaMismatch unless
// the model carries the hong_kong dummy.
CounterfactualResult hk_counterfactual(const LinearModel& model, const Records& records,
                                       std::size_t sample_size, std::uint64_t seed);

std::string counterfactual_csv(const CounterfactualResult& result);

} // namespace sailfit
