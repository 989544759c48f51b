#pragma once

// Self-contained SVG 1.1 emission for the exploration and sweep figures.
// Every chart renders onto a fixed 960x540 canvas, escapes all text, and
// carries exactly one legend group (<g class="legend">).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sinistre/csv.hpp" // format_double
#include "sinistre/stats.hpp"

namespace sinistre {

inline constexpr int kCanvasWidth = 960;
inline constexpr int kCanvasHeight = 540;

namespace svg {

inline std::string escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

inline std::string num(double v) {
    // fixed 2-decimal coordinates keep files small and diff-stable
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

/// Minimal element writer; callers balance group() / close_group().
class Document {
public:
    Document(int width = kCanvasWidth, int height = kCanvasHeight)
        : width_(width), height_(height) {}

    void group(std::string_view attrs = {}) {
        body_ << "<g";
        if (!attrs.empty()) body_ << ' ' << attrs;
        body_ << ">\n";
        ++open_groups_;
    }
    void close_group() {
        body_ << "</g>\n";
        --open_groups_;
    }

    void rect(double x, double y, double w, double h, std::string_view fill,
              std::string_view extra = {}) {
        body_ << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(w)
              << "\" height=\"" << num(h) << "\" fill=\"" << fill << "\"";
        if (!extra.empty()) body_ << ' ' << extra;
        body_ << "/>\n";
    }

    void line(double x1, double y1, double x2, double y2, std::string_view stroke,
              double width = 1.0) {
        body_ << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2)
              << "\" y2=\"" << num(y2) << "\" stroke=\"" << stroke << "\" stroke-width=\""
              << num(width) << "\"/>\n";
    }

    void path(std::string_view d, std::string_view fill, std::string_view stroke,
              double stroke_width = 1.0) {
        body_ << "<path d=\"" << d << "\" fill=\"" << fill << "\" stroke=\"" << stroke
              << "\" stroke-width=\"" << num(stroke_width) << "\"/>\n";
    }

    void circle(double cx, double cy, double r, std::string_view fill) {
        body_ << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" r=\"" << num(r)
              << "\" fill=\"" << fill << "\"/>\n";
    }

    void text(double x, double y, std::string_view content, double size = 12.0,
              std::string_view anchor = "start", std::string_view extra = {}) {
        body_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\"" << num(size)
              << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << "\"";
        if (!extra.empty()) body_ << ' ' << extra;
        body_ << ">" << escape(content) << "</text>\n";
    }

    std::string str() const {
        std::ostringstream out;
        out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\""
            << height_ << "\" viewBox=\"0 0 " << width_ << ' ' << height_ << "\">\n";
        out << "<rect x=\"0\" y=\"0\" width=\"" << width_ << "\" height=\"" << height_
            << "\" fill=\"white\"/>\n";
        out << body_.str();
        out << "</svg>\n";
        return out.str();
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int open_groups() const noexcept { return open_groups_; }

private:
    int width_;
    int height_;
    int open_groups_ = 0;
    std::ostringstream body_;
};

/// Linear map from a data domain onto pixel coordinates.
struct LinearScale {
    double domain_lo = 0.0, domain_hi = 1.0;
    double range_lo = 0.0, range_hi = 1.0;

    double operator()(double v) const {
        const double span = domain_hi - domain_lo;
        const double t = span == 0.0 ? 0.5 : (v - domain_lo) / span;
        return range_lo + t * (range_hi - range_lo);
    }
};

inline const std::vector<std::string>& palette() {
    static const std::vector<std::string> colors{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};
    return colors;
}

/// RGB interpolation between two hex colors, t in [0,1].
inline std::string lerp_color(std::string_view from, std::string_view to, double t) {
    auto channel = [&](int offset) {
        const int a = std::stoi(std::string(from.substr(offset, 2)), nullptr, 16);
        const int b = std::stoi(std::string(to.substr(offset, 2)), nullptr, 16);
        const int v = static_cast<int>(std::lround(a + std::clamp(t, 0.0, 1.0) * (b - a)));
        char buf[3];
        std::snprintf(buf, sizeof(buf), "%02x", v);
        return std::string(buf);
    };
    return "#" + channel(1) + channel(3) + channel(5);
}

inline void draw_axes(Document& doc, double left, double top, double right, double bottom) {
    doc.line(left, bottom, right, bottom, "#333333");
    doc.line(left, top, left, bottom, "#333333");
}

inline void legend_swatches(Document& doc, double x, double y,
                            const std::vector<std::pair<std::string, std::string>>& entries) {
    // wide sweeps (one series per coefficient) would overflow the canvas
    constexpr std::size_t max_entries = 24;
    doc.group("class=\"legend\"");
    double yy = y;
    const std::size_t shown = std::min(entries.size(), max_entries);
    for (std::size_t i = 0; i < shown; ++i) {
        doc.rect(x, yy - 9, 12, 12, entries[i].second);
        doc.text(x + 18, yy, entries[i].first, 12.0);
        yy += 18;
    }
    if (entries.size() > shown) {
        doc.text(x, yy, "(+" + std::to_string(entries.size() - shown) + " more)", 12.0);
    }
    doc.close_group();
}

} // namespace svg

/**
 * @brief Two-panel figure: policy counts per level beside the claim
 * proportion per level with confidence whiskers.
 */
inline std::string render_bar_with_ci(const std::vector<ProportionRow>& rows,
                                      const std::string& title) {
    if (rows.empty()) {
        throw std::invalid_argument("render_bar_with_ci: no rows to draw");
    }
    svg::Document doc;
    const double margin = 50.0;
    const double mid = kCanvasWidth / 2.0;
    const double top = 60.0, bottom = kCanvasHeight - 70.0;

    doc.text(mid, 28, title, 16.0, "middle");

    std::uint64_t max_count = 1;
    double max_hi = 0.0;
    for (const auto& r : rows) {
        max_count = std::max(max_count, r.policy_count);
        max_hi = std::max(max_hi, r.ci_high);
    }
    max_hi = std::max(max_hi, 1e-12);

    struct Panel {
        double left, right;
    };
    const Panel panels[2] = {{margin, mid - 30.0}, {mid + 40.0, kCanvasWidth - margin}};

    // left panel: counts
    {
        const auto [left, right] = panels[0];
        svg::LinearScale yscale{0.0, static_cast<double>(max_count), bottom, top};
        const double band = (right - left) / static_cast<double>(rows.size());
        svg::draw_axes(doc, left, top, right, bottom);
        const std::size_t label_step = rows.size() > 12 ? (rows.size() + 11) / 12 : 1;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const double x = left + band * static_cast<double>(i);
            const double y = yscale(static_cast<double>(rows[i].policy_count));
            doc.rect(x + band * 0.1, y, band * 0.8, bottom - y, "#1f77b4");
            if (i % label_step == 0) {
                doc.text(x + band / 2, bottom + 16, rows[i].level, 10.0, "middle");
            }
        }
        doc.text(left, top - 10, "policies: " + format_double(static_cast<double>(max_count)),
                 11.0);
        doc.text((left + right) / 2, kCanvasHeight - 28, "level", 12.0, "middle");
    }

    // right panel: proportion with CI whiskers
    {
        const auto [left, right] = panels[1];
        svg::LinearScale yscale{0.0, max_hi, bottom, top};
        const double band = (right - left) / static_cast<double>(rows.size());
        svg::draw_axes(doc, left, top, right, bottom);
        const std::size_t label_step = rows.size() > 12 ? (rows.size() + 11) / 12 : 1;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const double cx = left + band * (static_cast<double>(i) + 0.5);
            const double y = yscale(rows[i].proportion);
            const double ylo = yscale(rows[i].ci_low);
            const double yhi = yscale(rows[i].ci_high);
            doc.line(cx, ylo, cx, yhi, "#d62728", 1.5);
            doc.line(cx - 4, ylo, cx + 4, ylo, "#d62728", 1.5);
            doc.line(cx - 4, yhi, cx + 4, yhi, "#d62728", 1.5);
            doc.circle(cx, y, 3.0, "#d62728");
            if (i % label_step == 0) {
                doc.text(cx, bottom + 16, rows[i].level, 10.0, "middle");
            }
        }
        doc.text(left, top - 10, "proportion max: " + format_double(max_hi), 11.0);
        doc.text((left + right) / 2, kCanvasHeight - 28, "level", 12.0, "middle");
    }

    svg::legend_swatches(doc, kCanvasWidth - 210.0, 46.0,
                         {{"policy count", "#1f77b4"}, {"claim proportion ±CI", "#d62728"}});
    return doc.str();
}

struct LineSeries {
    std::string name;
    std::vector<std::pair<double, double>> points; // (x, y)
};

/**
 * @brief Multi-series line chart; set log_x for decade-spanning sweeps
 * such as regularization paths.
 */
inline std::string render_line(const std::vector<LineSeries>& series, const std::string& title,
                               const std::string& x_label, const std::string& y_label,
                               bool log_x = false) {
    if (series.empty() ||
        std::all_of(series.begin(), series.end(),
                    [](const LineSeries& s) { return s.points.empty(); })) {
        throw std::invalid_argument("render_line: no points to draw");
    }
    svg::Document doc;
    const double left = 70.0, right = kCanvasWidth - 180.0;
    const double top = 60.0, bottom = kCanvasHeight - 60.0;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            const double xv = log_x ? std::log10(x) : x;
            xmin = std::min(xmin, xv);
            xmax = std::max(xmax, xv);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (xmin == xmax) { xmin -= 0.5; xmax += 0.5; }
    if (ymin == ymax) { ymin -= 0.5; ymax += 0.5; }

    svg::LinearScale xs{xmin, xmax, left, right};
    svg::LinearScale ys{ymin, ymax, bottom, top};

    doc.text(kCanvasWidth / 2.0, 28, title, 16.0, "middle");
    svg::draw_axes(doc, left, top, right, bottom);
    for (int t = 0; t <= 4; ++t) {
        const double fx = xmin + (xmax - xmin) * t / 4.0;
        const double fy = ymin + (ymax - ymin) * t / 4.0;
        const double px = xs(fx), py = ys(fy);
        doc.line(px, bottom, px, bottom + 4, "#333333");
        doc.text(px, bottom + 18, format_double(log_x ? std::pow(10.0, fx) : fx), 10.0, "middle");
        doc.line(left - 4, py, left, py, "#333333");
        doc.text(left - 8, py + 4, format_double(fy), 10.0, "end");
    }
    doc.text((left + right) / 2, kCanvasHeight - 20,
             log_x ? x_label + " (log scale)" : x_label, 12.0, "middle");
    doc.text(16, (top + bottom) / 2, y_label, 12.0, "middle",
             "transform=\"rotate(-90 16 " + svg::num((top + bottom) / 2) + ")\"");

    std::vector<std::pair<std::string, std::string>> legend;
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& color = svg::palette()[si % svg::palette().size()];
        const auto& pts = series[si].points;
        if (pts.empty()) continue;
        std::string d;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double x = xs(log_x ? std::log10(pts[i].first) : pts[i].first);
            const double y = ys(pts[i].second);
            d += (i == 0 ? "M" : "L") + svg::num(x) + " " + svg::num(y);
        }
        doc.path(d, "none", color, 1.8);
        legend.emplace_back(series[si].name, color);
    }
    svg::legend_swatches(doc, right + 16.0, top + 6.0, legend);
    return doc.str();
}

/**
 * @brief Correlation heatmap: blue-white-red cells over [-1, 1], grey for
 * undefined (constant-column) pairs, with a color-ramp legend.
 */
inline std::string render_heatmap(const CorrelationMatrix& corr, const std::string& title) {
    const std::size_t p = corr.names.size();
    if (p == 0) throw std::invalid_argument("render_heatmap: empty matrix");

    svg::Document doc;
    const double left = 150.0, top = 70.0;
    const double size = std::min(kCanvasWidth - left - 180.0, kCanvasHeight - top - 40.0);
    const double cell = size / static_cast<double>(p);

    doc.text(kCanvasWidth / 2.0, 28, title, 16.0, "middle");

    auto color_for = [](double r) {
        if (std::isnan(r)) return std::string("#bbbbbb");
        return r >= 0.0 ? svg::lerp_color("#ffffff", "#b2182b", r)
                        : svg::lerp_color("#ffffff", "#2166ac", -r);
    };

    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            doc.rect(left + cell * static_cast<double>(j), top + cell * static_cast<double>(i),
                     cell, cell, color_for(corr.values(i, j)),
                     "stroke=\"#ffffff\" stroke-width=\"0.5\"");
        }
        doc.text(left - 6, top + cell * (static_cast<double>(i) + 0.65),
                 corr.names[i], 10.0, "end");
        doc.text(left + cell * (static_cast<double>(i) + 0.5), top + size + 12.0, corr.names[i],
                 9.0, "middle",
                 "transform=\"rotate(45 " + svg::num(left + cell * (static_cast<double>(i) + 0.5)) +
                     " " + svg::num(top + size + 12.0) + ")\"");
    }

    // color ramp legend
    doc.group("class=\"legend\"");
    const double lx = left + size + 40.0, ly = top, lh = size, lw = 16.0;
    const int steps = 64;
    for (int s = 0; s < steps; ++s) {
        const double r = 1.0 - 2.0 * s / (steps - 1.0); // +1 at top, -1 at bottom
        doc.rect(lx, ly + lh * s / steps, lw, lh / steps + 0.5, color_for(r));
    }
    doc.text(lx + lw + 6, ly + 10, "+1", 11.0);
    doc.text(lx + lw + 6, ly + lh / 2 + 4, "0", 11.0);
    doc.text(lx + lw + 6, ly + lh, "-1", 11.0);
    doc.close_group();
    return doc.str();
}

} // namespace sinistre
