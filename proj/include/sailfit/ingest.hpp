#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sailfit/records.hpp"

namespace sailfit {

struct CleaningReport {
    std::size_t rows_in = 0;
    std::size_t dropped_missing_region = 0;
    std::size_t dropped_missing_technical = 0;
    std::size_t dropped_malformed = 0;
    std::size_t rows_out = 0;
};

// Loads and cleans a listing CSV. Required header columns (any order,
// extras ignored): id, make_variant, year, length_ft, beam_ft, draft_ft,
// displacement_lb, sail_area_sqft, waterline_ft, hull, region, gdp,
// gdp_per_capita, listing_price.
//
// Drop rules, applied in this order per row:
//   missing region cell                  -> dropped_missing_region
//   missing technical/price cell         -> dropped_missing_technical
//   anything unparseable or out of range -> dropped_malformed
// A missing cell is an empty string or "NA" (case-insensitive). GDP cells
// are optional per row and never cause a drop when merely absent.
//
// Throws FileNotFound, HeaderMismatch, EmptyAfterCleaning.
std::pair<Records, CleaningReport> load_csv(const std::string& path);

// Writes records in the canonical 14-column layout, %.17g numerics.
void write_records_csv(const std::string& path, const Records& records);

struct SyntheticSpec {
    std::size_t n_rows = 0;
    std::map<std::string, double> true_coefficients;  // feature name -> coefficient
    double true_intercept = 0;
    std::map<Region, double> region_effects;          // USD offsets; empty = all Caribbean
    double noise_std = 0;
    std::uint64_t seed = 0;
    bool include_gdp = false;  // emit gdp columns even with zero coefficient
};

// Deterministic generator backing the oracle tests. Feature ranges:
//   length 20-80 ft, beam 8-30 ft, draft 2-12 ft, displacement 4k-60k lb,
//   sail area 200-3000 sqft, waterline 0.75-0.95 x length, year 1980-2022,
//   hull fair coin, region uniform over the region_effects keys,
//   gdp 4e10-2.5e13 USD, gdp per capita 5e3-9e4 USD.
// listing_price = intercept + sum(coef * feature) + region effect + N(0, noise_std).
// The Gaussian draw happens even at noise_std=0 so the feature stream is
// identical across noise settings for a fixed seed.
Records generate_synthetic(const SyntheticSpec& spec);

} // namespace sailfit
