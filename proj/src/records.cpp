#include "sailfit/records.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace sailfit {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

} // namespace

const char* hull_name(Hull h) {
    return h == Hull::Monohull ? "monohull" : "catamaran";
}

const char* region_name(Region r) {
    switch (r) {
        case Region::Caribbean: return "caribbean";
        case Region::Europe: return "europe";
        case Region::USA: return "usa";
        case Region::HongKong: return "hong_kong";
    }
    return "?";
}

std::optional<Hull> parse_hull(const std::string& s) {
    std::string t = lower(s);
    if (t == "monohull") return Hull::Monohull;
    if (t == "catamaran") return Hull::Catamaran;
    return std::nullopt;
}

std::optional<Region> parse_region(const std::string& s) {
    std::string t = lower(s);
    for (Region r : kAllRegions)
        if (t == region_name(r)) return r;
    return std::nullopt;
}

bool record_valid(const SailboatRecord& r) {
    auto pos = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!pos(r.length_ft) || !pos(r.beam_ft) || !pos(r.draft_ft) ||
        !pos(r.displacement_lb) || !pos(r.sail_area_sqft) || !pos(r.waterline_ft) ||
        !pos(r.listing_price))
        return false;
    if (r.waterline_ft > r.length_ft) return false;
    if (r.year < 1900 || r.year > 2025) return false;
    if (r.gdp && (!std::isfinite(*r.gdp) || *r.gdp < 0.0)) return false;
    if (r.gdp_per_capita && (!std::isfinite(*r.gdp_per_capita) || *r.gdp_per_capita < 0.0))
        return false;
    return true;
}

} // namespace sailfit
