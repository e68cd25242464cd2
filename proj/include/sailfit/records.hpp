#pragma once

#include <optional>
#include <string>
#include <vector>

namespace sailfit {

enum class Hull { Monohull, Catamaran };

// Order is load-bearing: region dummy columns are emitted in this order.
enum class Region { Caribbean, Europe, USA, HongKong };

inline constexpr Region kAllRegions[] = {Region::Caribbean, Region::Europe,
                                         Region::USA, Region::HongKong};

const char* hull_name(Hull h);       // "monohull" / "catamaran"
const char* region_name(Region r);   // "caribbean" / "europe" / "usa" / "hong_kong"

// Case-insensitive; returns nullopt for unrecognized text.
std::optional<Hull> parse_hull(const std::string& s);
std::optional<Region> parse_region(const std::string& s);

// One listing. Units: feet, pounds, square feet, USD.
struct SailboatRecord {
    std::string id;
    std::string make_variant;
    int year = 0;
    double length_ft = 0;
    double beam_ft = 0;
    double draft_ft = 0;
    double displacement_lb = 0;
    double sail_area_sqft = 0;
    double waterline_ft = 0;
    Hull hull = Hull::Monohull;
    Region region = Region::Caribbean;
    std::optional<double> gdp;             // USD
    std::optional<double> gdp_per_capita;  // USD
    double listing_price = 0;              // USD
};

// waterline <= length, positive finite numerics, year in [1900, 2025].
bool record_valid(const SailboatRecord& r);

using Records = std::vector<SailboatRecord>;

} // namespace sailfit
