#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sailfit/records.hpp"

namespace sailfit {

// Dense row-major matrix, the only matrix type used in the toolkit.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    const double* row(std::size_t i) const { return data.data() + i * cols; }
};

enum class ColumnKind { Numeric, OneHotGroup };

// One matrix column. One-hot group members carry the full level list of
// their group so the encoding scheme that produced a matrix stays readable
// from the schema alone.
struct Column {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;
    std::string group;                          // e.g. "region" for one-hot members
    std::string level;                          // level this column indicates
    std::vector<std::string> group_levels;      // ordered levels of the group
    std::optional<std::string> dropped_level;   // base level, absent if none dropped

    bool operator==(const Column& o) const {
        return name == o.name && kind == o.kind && group == o.group && level == o.level &&
               group_levels == o.group_levels && dropped_level == o.dropped_level;
    }
};

struct FeatureSchema {
    std::vector<Column> columns;

    std::size_t width() const { return columns.size(); }
    // Index of a named column, or -1.
    int index_of(const std::string& name) const;
    bool operator==(const FeatureSchema& o) const { return columns == o.columns; }
};

// Per-column z-score parameters, present only for columns that were scaled.
struct Standardization {
    struct Entry {
        std::string column;
        double mean = 0;
        double stddev = 0;  // population standard deviation
        bool operator==(const Entry& o) const {
            return column == o.column && mean == o.mean && stddev == o.stddev;
        }
    };
    std::vector<Entry> entries;

    bool empty() const { return entries.empty(); }
    const Entry* find(const std::string& column) const;
    bool operator==(const Standardization& o) const { return entries == o.entries; }
};

using TargetVector = std::vector<double>;

struct FeatureMatrix {
    FeatureSchema schema;
    Matrix values;
    std::vector<std::string> row_ids;
    // Set when the stored values are z-scores; records the train-set statistics.
    std::optional<Standardization> standardization;
};

enum class RegionScheme { ThreeRegion, FourRegionHK };

// Ordered one-hot region columns (Caribbean, Europe, USA[, HongKong]); with
// drop_base the Caribbean column is omitted and Caribbean becomes the
// reference level. Throws UnknownRegion if the scheme cannot represent a
// record's region.
FeatureMatrix encode_regions(const Records& records, RegionScheme scheme, bool drop_base);

double encode_hull(Hull h);       // Monohull -> 0, Catamaran -> 1
Hull decode_hull(double v);       // exact 0/1 round-trip

// Feature names accepted by build_design_matrix: the numeric record fields,
// "hull", and "region" (expanded to the scheme's dummy columns).
const std::vector<std::string>& numeric_feature_names();  // excludes gdp columns
const std::vector<std::string>& technical_feature_names(); // 8 regressors incl. hull

struct DesignMatrix {
    FeatureMatrix X;
    TargetVector y;  // listing prices, never standardized
    Standardization standardization;
};

// Assembles the design matrix in deterministic column order: numeric columns
// in declared order, then hull, then the region group. standardize=true
// z-scores the continuous numeric columns (population stddev); 0/1 indicator
// columns are left raw.
DesignMatrix build_design_matrix(const Records& records,
                                 const std::vector<std::string>& feature_selection,
                                 RegionScheme region_scheme, bool drop_base,
                                 bool standardize);

// Maps a raw matrix into the z-score space of `std_params` (columns without
// an entry pass through).
Matrix apply_standardization(const Matrix& raw, const FeatureSchema& schema,
                             const Standardization& std_params);
// Inverse map, used by round-trip checks.
Matrix undo_standardization(const Matrix& scaled, const FeatureSchema& schema,
                            const Standardization& std_params);

// key=value lines describing a schema, shared by the model file formats.
std::string serialize_schema(const FeatureSchema& schema);
FeatureSchema parse_schema(const std::map<std::string, std::string>& kv);

} // namespace sailfit
