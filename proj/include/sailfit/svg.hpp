#pragma once

#include <string>
#include <utility>
#include <vector>

namespace sailfit {

enum class FigureKind { ScatterTrend, Bar, Residual, GroupedComparison };

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;          // x/y kinds
    std::vector<std::pair<std::string, double>> categories; // Bar kind
};

struct FigureSpec {
    FigureKind kind = FigureKind::ScatterTrend;
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    std::string output_path;
};

// Data range extended by 5% of the span on each side (a fixed fallback pad
// for zero-span data).
struct AxisRange {
    double lo = 0;
    double hi = 1;
};
AxisRange padded_range(double min_value, double max_value);

// At most max_ticks round-number tick positions (1/2/5 x 10^k step) within [lo, hi].
std::vector<double> nice_ticks(double lo, double hi, std::size_t max_ticks = 10);

// Fixed 800x600 canvas. ScatterTrend draws a least-squares line per series;
// Residual adds a dashed zero line; GroupedComparison draws a legend.
// Byte-deterministic for identical specs. Throws NonFiniteData on empty or
// non-finite input, IoError when the path cannot be written.
std::string render_svg_string(const FigureSpec& spec);
void render_svg(const FigureSpec& spec);  // render_svg_string + write to output_path

} // namespace sailfit
