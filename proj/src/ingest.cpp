#include "sailfit/ingest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <sstream>

#include "sailfit/error.hpp"
#include "sailfit/features.hpp"
#include "sailfit/rng.hpp"
#include "sailfit/textio.hpp"

namespace sailfit {

namespace {

const std::array<const char*, 14> kCsvColumns = {
    "id", "make_variant", "year", "length_ft", "beam_ft", "draft_ft",
    "displacement_lb", "sail_area_sqft", "waterline_ft", "hull", "region",
    "gdp", "gdp_per_capita", "listing_price"};

// Splits one CSV line; supports double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    cells.push_back(std::move(cur));
    return cells;
}

bool is_missing(const std::string& cell) {
    if (cell.empty()) return true;
    if (cell.size() == 2 && std::toupper(static_cast<unsigned char>(cell[0])) == 'N' &&
        std::toupper(static_cast<unsigned char>(cell[1])) == 'A')
        return true;
    return false;
}

} // namespace

std::pair<Records, CleaningReport> load_csv(const std::string& path) {
    std::string text = read_text_file(path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw Error(Err::HeaderMismatch, path + " is empty, no header row");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::vector<std::string> header = split_csv_line(line);
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (col.count(header[i]))
            throw Error(Err::HeaderMismatch, "duplicate column '" + header[i] + "'");
        col[header[i]] = i;
    }
    for (const char* name : kCsvColumns)
        if (!col.count(name))
            throw Error(Err::HeaderMismatch, std::string("required column '") + name +
                                                 "' absent from " + path);

    Records records;
    CleaningReport report;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++report.rows_in;
        std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() < header.size()) {
            ++report.dropped_malformed;
            continue;
        }
        auto cell = [&](const char* name) -> const std::string& { return cells[col[name]]; };

        if (is_missing(cell("region"))) {
            ++report.dropped_missing_region;
            continue;
        }
        static const char* technical[] = {"year",           "length_ft",      "beam_ft",
                                          "draft_ft",       "displacement_lb", "sail_area_sqft",
                                          "waterline_ft",   "hull",           "listing_price"};
        bool missing_tech = false;
        for (const char* name : technical)
            if (is_missing(cell(name))) missing_tech = true;
        if (missing_tech) {
            ++report.dropped_missing_technical;
            continue;
        }

        SailboatRecord r;
        r.id = cell("id");
        r.make_variant = cell("make_variant");
        auto year = parse_int(cell("year"));
        auto length = parse_double(cell("length_ft"));
        auto beam = parse_double(cell("beam_ft"));
        auto draft = parse_double(cell("draft_ft"));
        auto displacement = parse_double(cell("displacement_lb"));
        auto sail_area = parse_double(cell("sail_area_sqft"));
        auto waterline = parse_double(cell("waterline_ft"));
        auto hull = parse_hull(cell("hull"));
        auto region = parse_region(cell("region"));
        auto price = parse_double(cell("listing_price"));
        if (r.id.empty() || !year || !length || !beam || !draft || !displacement ||
            !sail_area || !waterline || !hull || !region || !price) {
            ++report.dropped_malformed;
            continue;
        }
        r.year = *year;
        r.length_ft = *length;
        r.beam_ft = *beam;
        r.draft_ft = *draft;
        r.displacement_lb = *displacement;
        r.sail_area_sqft = *sail_area;
        r.waterline_ft = *waterline;
        r.hull = *hull;
        r.region = *region;
        r.listing_price = *price;

        bool bad_gdp = false;
        for (const char* name : {"gdp", "gdp_per_capita"}) {
            const std::string& c = cell(name);
            if (is_missing(c)) continue;
            auto v = parse_double(c);
            if (!v) {
                bad_gdp = true;
                continue;
            }
            if (std::string(name) == "gdp")
                r.gdp = *v;
            else
                r.gdp_per_capita = *v;
        }
        if (bad_gdp || !record_valid(r)) {
            ++report.dropped_malformed;
            continue;
        }
        records.push_back(std::move(r));
    }
    report.rows_out = records.size();
    if (report.rows_in > 0 && report.rows_out == 0)
        throw Error(Err::EmptyAfterCleaning,
                    "all " + std::to_string(report.rows_in) + " rows of " + path +
                        " were dropped during cleaning");
    if (report.rows_in == 0)
        throw Error(Err::EmptyAfterCleaning, path + " has a header but no data rows");
    return {std::move(records), report};
}

void write_records_csv(const std::string& path, const Records& records) {
    std::string out;
    for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
        if (i) out += ',';
        out += kCsvColumns[i];
    }
    out += '\n';
    for (const auto& r : records) {
        out += r.id;
        out += ',';
        out += r.make_variant;
        out += ',';
        out += std::to_string(r.year);
        out += ',';
        out += fmt_double(r.length_ft);
        out += ',';
        out += fmt_double(r.beam_ft);
        out += ',';
        out += fmt_double(r.draft_ft);
        out += ',';
        out += fmt_double(r.displacement_lb);
        out += ',';
        out += fmt_double(r.sail_area_sqft);
        out += ',';
        out += fmt_double(r.waterline_ft);
        out += ',';
        out += hull_name(r.hull);
        out += ',';
        out += region_name(r.region);
        out += ',';
        if (r.gdp) out += fmt_double(*r.gdp);
        out += ',';
        if (r.gdp_per_capita) out += fmt_double(*r.gdp_per_capita);
        out += ',';
        out += fmt_double(r.listing_price);
        out += '\n';
    }
    write_text_file(path, out);
}

Records generate_synthetic(const SyntheticSpec& spec) {
    static const char* known[] = {"length_ft",       "year",          "waterline_ft",
                                  "beam_ft",         "draft_ft",      "displacement_lb",
                                  "sail_area_sqft",  "hull",          "gdp",
                                  "gdp_per_capita"};
    for (const auto& [name, coef] : spec.true_coefficients) {
        (void)coef;
        if (std::find(std::begin(known), std::end(known), name) == std::end(known))
            throw Error(Err::MissingColumn,
                        "synthetic generator has no feature '" + name + "'");
    }
    bool want_gdp = spec.include_gdp || spec.true_coefficients.count("gdp") ||
                    spec.true_coefficients.count("gdp_per_capita");

    std::vector<Region> regions;
    for (Region r : kAllRegions)
        if (spec.region_effects.count(r)) regions.push_back(r);

    auto coef = [&](const char* name) {
        auto it = spec.true_coefficients.find(name);
        return it == spec.true_coefficients.end() ? 0.0 : it->second;
    };

    Rng rng(spec.seed);
    Records records;
    records.reserve(spec.n_rows);
    for (std::size_t i = 0; i < spec.n_rows; ++i) {
        SailboatRecord r;
        char id[24];
        std::snprintf(id, sizeof(id), "synth-%06zu", i + 1);
        r.id = id;
        r.make_variant = "synthetic";
        r.length_ft = rng.uniform(20.0, 80.0);
        r.beam_ft = rng.uniform(8.0, 30.0);
        r.draft_ft = rng.uniform(2.0, 12.0);
        r.displacement_lb = rng.uniform(4000.0, 60000.0);
        r.sail_area_sqft = rng.uniform(200.0, 3000.0);
        r.waterline_ft = r.length_ft * rng.uniform(0.75, 0.95);
        r.year = 1980 + static_cast<int>(rng.next_below(43));  // 1980..2022
        r.hull = rng.next_below(2) == 0 ? Hull::Monohull : Hull::Catamaran;
        double region_effect = 0.0;
        if (!regions.empty()) {
            r.region = regions[rng.next_below(regions.size())];
            region_effect = spec.region_effects.at(r.region);
        }
        if (want_gdp) {
            r.gdp = rng.uniform(4e10, 2.5e13);
            r.gdp_per_capita = rng.uniform(5e3, 9e4);
        }
        double noise = rng.normal(0.0, 1.0) * spec.noise_std;
        r.listing_price = spec.true_intercept + coef("length_ft") * r.length_ft +
                          coef("year") * r.year + coef("waterline_ft") * r.waterline_ft +
                          coef("beam_ft") * r.beam_ft + coef("draft_ft") * r.draft_ft +
                          coef("displacement_lb") * r.displacement_lb +
                          coef("sail_area_sqft") * r.sail_area_sqft +
                          coef("hull") * encode_hull(r.hull) +
                          (r.gdp ? coef("gdp") * *r.gdp : 0.0) +
                          (r.gdp_per_capita ? coef("gdp_per_capita") * *r.gdp_per_capita : 0.0) +
                          region_effect + noise;
        records.push_back(std::move(r));
    }
    return records;
}

} // namespace sailfit
