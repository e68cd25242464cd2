#include "sailfit/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "sailfit/error.hpp"
#include "sailfit/textio.hpp"

namespace sailfit {

namespace {

// Canvas geometry, fixed for determinism.
constexpr double kWidth = 800, kHeight = 600;
constexpr double kLeft = 70, kRight = 775, kTop = 45, kBottom = 545;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

} // namespace

AxisRange padded_range(double min_value, double max_value) {
    double span = max_value - min_value;
    double pad = span == 0.0 ? std::max(1.0, std::fabs(max_value) * 0.05) : 0.05 * span;
    return {min_value - pad, max_value + pad};
}

std::vector<double> nice_ticks(double lo, double hi, std::size_t max_ticks) {
    std::vector<double> ticks;
    double span = hi - lo;
    if (!(span > 0)) return ticks;
    double raw = span / static_cast<double>(max_ticks);
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double norm = raw / mag;
    double step = norm <= 1.0 ? mag : norm <= 2.0 ? 2 * mag : norm <= 5.0 ? 5 * mag : 10 * mag;
    double first = std::ceil(lo / step) * step;
    for (double t = first; t <= hi + step * 1e-9; t += step) {
        // snap to a round multiple so labels never show 0.30000000000000004
        double snapped = std::round(t / step) * step;
        ticks.push_back(snapped == 0.0 ? 0.0 : snapped);
        if (ticks.size() >= max_ticks) break;
    }
    return ticks;
}

namespace {

struct Mapper {
    AxisRange x, y;
    double px(double v) const { return kLeft + (v - x.lo) / (x.hi - x.lo) * (kRight - kLeft); }
    double py(double v) const { return kBottom - (v - y.lo) / (y.hi - y.lo) * (kBottom - kTop); }
};

void validate(const FigureSpec& spec) {
    if (spec.series.empty()) throw Error(Err::NonFiniteData, "figure has no series");
    for (const auto& s : spec.series) {
        if (spec.kind == FigureKind::Bar) {
            if (s.categories.empty())
                throw Error(Err::NonFiniteData, "bar series '" + s.name + "' is empty");
            for (const auto& [name, v] : s.categories) {
                (void)name;
                if (!std::isfinite(v))
                    throw Error(Err::NonFiniteData, "non-finite bar value in '" + s.name + "'");
            }
        } else {
            if (s.points.empty())
                throw Error(Err::NonFiniteData, "series '" + s.name + "' is empty");
            for (const auto& [px, py] : s.points)
                if (!std::isfinite(px) || !std::isfinite(py))
                    throw Error(Err::NonFiniteData, "non-finite point in '" + s.name + "'");
        }
    }
}

void append_axes(std::string& out, const Mapper& map, const FigureSpec& spec,
                 bool x_ticks = true) {
    out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kBottom) + "\" x2=\"" + num(kRight) +
           "\" y2=\"" + num(kBottom) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) +
           "\" y2=\"" + num(kBottom) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    for (double t : x_ticks ? nice_ticks(map.x.lo, map.x.hi) : std::vector<double>{}) {
        double x = map.px(t);
        out += "<line x1=\"" + num(x) + "\" y1=\"" + num(kBottom) + "\" x2=\"" + num(x) +
               "\" y2=\"" + num(kBottom + 5) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        out += "<text x=\"" + num(x) + "\" y=\"" + num(kBottom + 18) +
               "\" font-size=\"11\" text-anchor=\"middle\">" + tick_label(t) + "</text>\n";
    }
    for (double t : nice_ticks(map.y.lo, map.y.hi)) {
        double y = map.py(t);
        out += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(y) + "\" x2=\"" + num(kLeft) +
               "\" y2=\"" + num(y) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        out += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(y + 4) +
               "\" font-size=\"11\" text-anchor=\"end\">" + tick_label(t) + "</text>\n";
    }
    out += "<text x=\"" + num((kLeft + kRight) / 2) + "\" y=\"" + num(kHeight - 12) +
           "\" font-size=\"13\" text-anchor=\"middle\">" + xml_escape(spec.x_label) +
           "</text>\n";
    out += "<text x=\"18\" y=\"" + num((kTop + kBottom) / 2) +
           "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
           num((kTop + kBottom) / 2) + ")\">" + xml_escape(spec.y_label) + "</text>\n";
    out += "<text x=\"" + num(kWidth / 2) + "\" y=\"24\" font-size=\"15\" "
           "text-anchor=\"middle\" font-weight=\"bold\">" +
           xml_escape(spec.title) + "</text>\n";
}

void append_xy_figure(std::string& out, const FigureSpec& spec) {
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    bool first = true;
    for (const auto& s : spec.series) {
        for (const auto& [x, y] : s.points) {
            if (first) {
                xmin = xmax = x;
                ymin = ymax = y;
                first = false;
            }
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (spec.kind == FigureKind::Residual) {
        ymin = std::min(ymin, 0.0);
        ymax = std::max(ymax, 0.0);
    }
    Mapper map{padded_range(xmin, xmax), padded_range(ymin, ymax)};
    append_axes(out, map, spec);

    if (spec.kind == FigureKind::Residual) {
        double zero = map.py(0.0);
        out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(zero) + "\" x2=\"" + num(kRight) +
               "\" y2=\"" + num(zero) +
               "\" stroke=\"#555555\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>\n";
    }

    for (std::size_t si = 0; si < spec.series.size(); ++si) {
        const Series& s = spec.series[si];
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        for (const auto& [x, y] : s.points)
            out += "<circle cx=\"" + num(map.px(x)) + "\" cy=\"" + num(map.py(y)) +
                   "\" r=\"2.5\" fill=\"" + color + "\" fill-opacity=\"0.75\"/>\n";

        if (spec.kind == FigureKind::ScatterTrend && s.points.size() >= 2) {
            double n = static_cast<double>(s.points.size());
            double sx = 0, sy = 0;
            for (const auto& [x, y] : s.points) {
                sx += x;
                sy += y;
            }
            double mx = sx / n, my = sy / n;
            double sxx = 0, sxy = 0;
            for (const auto& [x, y] : s.points) {
                sxx += (x - mx) * (x - mx);
                sxy += (x - mx) * (y - my);
            }
            if (sxx > 0) {
                double slope = sxy / sxx;
                double intercept = my - slope * mx;
                double y0 = intercept + slope * map.x.lo;
                double y1 = intercept + slope * map.x.hi;
                out += "<line x1=\"" + num(map.px(map.x.lo)) + "\" y1=\"" + num(map.py(y0)) +
                       "\" x2=\"" + num(map.px(map.x.hi)) + "\" y2=\"" + num(map.py(y1)) +
                       "\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\"/>\n";
            }
        }
    }

    if (spec.kind == FigureKind::GroupedComparison) {
        for (std::size_t si = 0; si < spec.series.size(); ++si) {
            const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
            double ly = kTop + 14 + 16 * static_cast<double>(si);
            out += "<rect x=\"" + num(kRight - 150) + "\" y=\"" + num(ly - 9) +
                   "\" width=\"10\" height=\"10\" fill=\"" + color + "\"/>\n";
            out += "<text x=\"" + num(kRight - 136) + "\" y=\"" + num(ly) +
                   "\" font-size=\"11\">" + xml_escape(spec.series[si].name) + "</text>\n";
        }
    }
}

void append_bar_figure(std::string& out, const FigureSpec& spec) {
    const Series& s = spec.series[0];
    double vmin = 0, vmax = 0;
    for (const auto& [name, v] : s.categories) {
        (void)name;
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    Mapper map{{0, 1}, padded_range(vmin, vmax)};
    append_axes(out, map, spec, /*x_ticks=*/false);

    const std::size_t k = s.categories.size();
    const double slot = (kRight - kLeft) / static_cast<double>(k);
    const double bar_w = slot * 0.6;
    double baseline = std::clamp(0.0, map.y.lo, map.y.hi);
    for (std::size_t i = 0; i < k; ++i) {
        const auto& [name, v] = s.categories[i];
        double cx = kLeft + slot * (static_cast<double>(i) + 0.5);
        double y0 = map.py(baseline), y1 = map.py(v);
        double top = std::min(y0, y1);
        double h = std::fabs(y0 - y1);
        out += "<rect x=\"" + num(cx - bar_w / 2) + "\" y=\"" + num(top) + "\" width=\"" +
               num(bar_w) + "\" height=\"" + num(h) + "\" fill=\"#1f77b4\"/>\n";
        out += "<text x=\"" + num(cx) + "\" y=\"" + num(kBottom + 18) +
               "\" font-size=\"11\" text-anchor=\"middle\">" + xml_escape(name) + "</text>\n";
    }
}

} // namespace

std::string render_svg_string(const FigureSpec& spec) {
    validate(spec);
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
           "viewBox=\"0 0 800 600\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
    if (spec.kind == FigureKind::Bar)
        append_bar_figure(out, spec);
    else
        append_xy_figure(out, spec);
    out += "</svg>\n";
    return out;
}

void render_svg(const FigureSpec& spec) {
    write_text_file(spec.output_path, render_svg_string(spec));
}

} // namespace sailfit
