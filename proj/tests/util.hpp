#pragma once

#include <string>
#include <vector>

#include "sailfit/features.hpp"
#include "sailfit/ingest.hpp"

namespace testutil {

// FeatureMatrix over plain numeric columns, for driving the model trainers
// without going through records.
inline sailfit::FeatureMatrix feature_matrix(const std::vector<std::vector<double>>& rows,
                                             std::vector<std::string> names = {}) {
    sailfit::FeatureMatrix fm;
    const std::size_t p = rows.empty() ? 0 : rows[0].size();
    for (std::size_t j = 0; j < p; ++j) {
        sailfit::Column c;
        c.name = j < names.size() ? names[j] : "f" + std::to_string(j);
        fm.schema.columns.push_back(std::move(c));
    }
    fm.values = sailfit::Matrix(rows.size(), p);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < p; ++j) fm.values(i, j) = rows[i][j];
        fm.row_ids.push_back("r" + std::to_string(i));
    }
    return fm;
}

// The standard noise-free 8-regressor synthetic dataset used across tests.
inline sailfit::SyntheticSpec technical_spec(std::uint64_t seed, std::size_t n,
                                             double noise = 0.0) {
    sailfit::SyntheticSpec spec;
    spec.n_rows = n;
    spec.true_coefficients = {{"length_ft", 3000}, {"year", 700},
                              {"waterline_ft", 900}, {"beam_ft", 1500},
                              {"draft_ft", -2500},  {"displacement_lb", 2},
                              {"sail_area_sqft", 40}, {"hull", 60000}};
    spec.true_intercept = 50000;
    spec.noise_std = noise;
    spec.seed = seed;
    return spec;
}

} // namespace testutil
