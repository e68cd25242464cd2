#include "sailfit/features.hpp"

#include <algorithm>
#include <cmath>

#include "sailfit/error.hpp"

namespace sailfit {

int FeatureSchema::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i].name == name) return static_cast<int>(i);
    return -1;
}

const Standardization::Entry* Standardization::find(const std::string& column) const {
    for (const auto& e : entries)
        if (e.column == column) return &e;
    return nullptr;
}

double encode_hull(Hull h) { return h == Hull::Catamaran ? 1.0 : 0.0; }

Hull decode_hull(double v) { return v == 1.0 ? Hull::Catamaran : Hull::Monohull; }

namespace {

std::vector<Region> scheme_regions(RegionScheme scheme) {
    if (scheme == RegionScheme::ThreeRegion)
        return {Region::Caribbean, Region::Europe, Region::USA};
    return {Region::Caribbean, Region::Europe, Region::USA, Region::HongKong};
}

std::vector<Column> region_columns(RegionScheme scheme, bool drop_base) {
    std::vector<Region> regs = scheme_regions(scheme);
    std::vector<std::string> levels;
    for (Region r : regs) levels.push_back(region_name(r));

    std::vector<Column> cols;
    for (Region r : regs) {
        if (drop_base && r == Region::Caribbean) continue;
        Column c;
        c.name = std::string("region_") + region_name(r);
        c.kind = ColumnKind::OneHotGroup;
        c.group = "region";
        c.level = region_name(r);
        c.group_levels = levels;
        if (drop_base) c.dropped_level = region_name(Region::Caribbean);
        cols.push_back(std::move(c));
    }
    return cols;
}

void fill_region_row(double* row, std::size_t base, const SailboatRecord& rec,
                     RegionScheme scheme, bool drop_base) {
    std::vector<Region> regs = scheme_regions(scheme);
    if (std::find(regs.begin(), regs.end(), rec.region) == regs.end())
        throw Error(Err::UnknownRegion,
                    "record " + rec.id + " has region '" + region_name(rec.region) +
                        "' not representable by the requested scheme");
    std::size_t j = base;
    for (Region r : regs) {
        if (drop_base && r == Region::Caribbean) continue;
        row[j++] = (rec.region == r) ? 1.0 : 0.0;
    }
}

// Continuous record fields addressable by name; hull and region are handled
// separately so indicators never get z-scored.
double numeric_field(const SailboatRecord& r, const std::string& name) {
    if (name == "length_ft") return r.length_ft;
    if (name == "year") return static_cast<double>(r.year);
    if (name == "waterline_ft") return r.waterline_ft;
    if (name == "beam_ft") return r.beam_ft;
    if (name == "draft_ft") return r.draft_ft;
    if (name == "displacement_lb") return r.displacement_lb;
    if (name == "sail_area_sqft") return r.sail_area_sqft;
    if (name == "gdp") return r.gdp.value();
    if (name == "gdp_per_capita") return r.gdp_per_capita.value();
    throw Error(Err::MissingColumn, "unknown feature '" + name + "'");
}

const std::vector<std::string> kNumericOrder = {
    "length_ft", "year", "waterline_ft", "beam_ft", "draft_ft",
    "displacement_lb", "sail_area_sqft", "gdp", "gdp_per_capita"};

const std::vector<std::string> kNumericNoGdp = {
    "length_ft", "year", "waterline_ft", "beam_ft", "draft_ft",
    "displacement_lb", "sail_area_sqft"};

const std::vector<std::string> kTechnical = {
    "length_ft", "year", "waterline_ft", "beam_ft", "draft_ft",
    "displacement_lb", "sail_area_sqft", "hull"};

} // namespace

const std::vector<std::string>& numeric_feature_names() { return kNumericNoGdp; }
const std::vector<std::string>& technical_feature_names() { return kTechnical; }

FeatureMatrix encode_regions(const Records& records, RegionScheme scheme, bool drop_base) {
    FeatureMatrix fm;
    fm.schema.columns = region_columns(scheme, drop_base);
    fm.values = Matrix(records.size(), fm.schema.width());
    fm.row_ids.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        fill_region_row(&fm.values(i, 0), 0, records[i], scheme, drop_base);
        fm.row_ids.push_back(records[i].id);
    }
    return fm;
}

DesignMatrix build_design_matrix(const Records& records,
                                 const std::vector<std::string>& feature_selection,
                                 RegionScheme region_scheme, bool drop_base,
                                 bool standardize) {
    std::vector<std::string> numeric;
    bool want_hull = false, want_region = false;
    for (const auto& name : feature_selection) {
        if (name == "hull") {
            if (want_hull) throw Error(Err::InvalidArgument, "duplicate feature 'hull'");
            want_hull = true;
        } else if (name == "region") {
            if (want_region) throw Error(Err::InvalidArgument, "duplicate feature 'region'");
            want_region = true;
        } else if (std::find(kNumericOrder.begin(), kNumericOrder.end(), name) !=
                   kNumericOrder.end()) {
            if (std::find(numeric.begin(), numeric.end(), name) != numeric.end())
                throw Error(Err::InvalidArgument, "duplicate feature '" + name + "'");
            numeric.push_back(name);
        } else {
            throw Error(Err::MissingColumn, "unknown feature '" + name + "'");
        }
    }

    // GDP columns may be requested only when every record carries them.
    for (const auto& name : numeric) {
        if (name == "gdp" || name == "gdp_per_capita") {
            for (const auto& r : records) {
                bool has = (name == "gdp") ? r.gdp.has_value() : r.gdp_per_capita.has_value();
                if (!has)
                    throw Error(Err::MissingColumn,
                                "record " + r.id + " lacks requested column '" + name + "'");
            }
        }
    }

    // Deterministic order: declared numeric order, then hull, then region.
    std::sort(numeric.begin(), numeric.end(), [](const std::string& a, const std::string& b) {
        auto pos = [](const std::string& n) {
            return std::find(kNumericOrder.begin(), kNumericOrder.end(), n) -
                   kNumericOrder.begin();
        };
        return pos(a) < pos(b);
    });

    DesignMatrix out;
    for (const auto& name : numeric) {
        Column c;
        c.name = name;
        out.X.schema.columns.push_back(std::move(c));
    }
    if (want_hull) {
        Column c;
        c.name = "hull";
        out.X.schema.columns.push_back(std::move(c));
    }
    std::size_t region_base = out.X.schema.width();
    if (want_region) {
        for (auto& c : region_columns(region_scheme, drop_base))
            out.X.schema.columns.push_back(std::move(c));
    }

    std::size_t n = records.size();
    std::size_t p = out.X.schema.width();
    out.X.values = Matrix(n, p);
    out.X.row_ids.reserve(n);
    out.y.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const SailboatRecord& rec = records[i];
        std::size_t j = 0;
        for (const auto& name : numeric) out.X.values(i, j++) = numeric_field(rec, name);
        if (want_hull) out.X.values(i, j++) = encode_hull(rec.hull);
        if (want_region) fill_region_row(&out.X.values(i, 0), region_base, rec,
                                         region_scheme, drop_base);
        out.X.row_ids.push_back(rec.id);
        out.y.push_back(rec.listing_price);
    }

    if (standardize) {
        if (n == 0) throw Error(Err::EmptyInput, "cannot standardize an empty matrix");
        for (std::size_t j = 0; j < numeric.size(); ++j) {
            double mean = 0;
            for (std::size_t i = 0; i < n; ++i) mean += out.X.values(i, j);
            mean /= static_cast<double>(n);
            double var = 0;
            for (std::size_t i = 0; i < n; ++i) {
                double d = out.X.values(i, j) - mean;
                var += d * d;
            }
            var /= static_cast<double>(n);
            double sd = std::sqrt(var);
            if (sd == 0.0)
                throw Error(Err::ZeroVarianceColumn,
                            "column '" + numeric[j] + "' is constant");
            for (std::size_t i = 0; i < n; ++i)
                out.X.values(i, j) = (out.X.values(i, j) - mean) / sd;
            out.standardization.entries.push_back({numeric[j], mean, sd});
        }
        out.X.standardization = out.standardization;
    }
    return out;
}

Matrix apply_standardization(const Matrix& raw, const FeatureSchema& schema,
                             const Standardization& std_params) {
    Matrix m = raw;
    for (std::size_t j = 0; j < schema.width(); ++j) {
        const auto* e = std_params.find(schema.columns[j].name);
        if (!e) continue;
        for (std::size_t i = 0; i < m.rows; ++i) m(i, j) = (m(i, j) - e->mean) / e->stddev;
    }
    return m;
}

Matrix undo_standardization(const Matrix& scaled, const FeatureSchema& schema,
                            const Standardization& std_params) {
    Matrix m = scaled;
    for (std::size_t j = 0; j < schema.width(); ++j) {
        const auto* e = std_params.find(schema.columns[j].name);
        if (!e) continue;
        for (std::size_t i = 0; i < m.rows; ++i) m(i, j) = m(i, j) * e->stddev + e->mean;
    }
    return m;
}

namespace {

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) s += sep;
        s += parts[i];
    }
    return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) parts.push_back(cur);
    return parts;
}

} // namespace

std::string serialize_schema(const FeatureSchema& schema) {
    std::string out;
    out += "columns=" + std::to_string(schema.width()) + "\n";
    for (std::size_t j = 0; j < schema.width(); ++j) {
        const Column& c = schema.columns[j];
        std::string pre = "column." + std::to_string(j) + ".";
        out += pre + "name=" + c.name + "\n";
        out += pre + "kind=" + (c.kind == ColumnKind::Numeric ? "numeric" : "onehot") + "\n";
        if (c.kind == ColumnKind::OneHotGroup) {
            out += pre + "group=" + c.group + "\n";
            out += pre + "level=" + c.level + "\n";
            out += pre + "group_levels=" + join(c.group_levels, ';') + "\n";
            if (c.dropped_level) out += pre + "dropped_level=" + *c.dropped_level + "\n";
        }
    }
    return out;
}

FeatureSchema parse_schema(const std::map<std::string, std::string>& kv) {
    auto get = [&](const std::string& key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end())
            throw Error(Err::SchemaMismatch, "model file missing key " + key);
        return it->second;
    };
    FeatureSchema schema;
    std::size_t ncols = static_cast<std::size_t>(std::stoul(get("columns")));
    for (std::size_t j = 0; j < ncols; ++j) {
        std::string pre = "column." + std::to_string(j) + ".";
        Column c;
        c.name = get(pre + "name");
        c.kind = get(pre + "kind") == "onehot" ? ColumnKind::OneHotGroup : ColumnKind::Numeric;
        if (c.kind == ColumnKind::OneHotGroup) {
            c.group = get(pre + "group");
            c.level = get(pre + "level");
            c.group_levels = split(get(pre + "group_levels"), ';');
            auto it = kv.find(pre + "dropped_level");
            if (it != kv.end()) c.dropped_level = it->second;
        }
        schema.columns.push_back(std::move(c));
    }
    return schema;
}

} // namespace sailfit
