#pragma once

#include "udgembed/graph.hpp"
#include "udgembed/hardware.hpp"
#include "udgembed/pipeline.hpp"
#include "udgembed/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace udg {

namespace plot_detail {

inline std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

struct SvgBuilder {
    std::string body;
    double width = 0.0;
    double height = 0.0;

    void open(double w, double h) {
        width = w;
        height = h;
        body += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
                "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\">\n";
        body += "<rect x=\"0\" y=\"0\" width=\"" + num(w) + "\" height=\"" + num(h) + "\" fill=\"white\"/>\n";
    }
    void line(double x1, double y1, double x2, double y2, const std::string& stroke, double sw) {
        body += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) +
                "\" stroke=\"" + stroke + "\" stroke-width=\"" + num(sw) + "\"/>\n";
    }
    void circle(double cx, double cy, double r, const std::string& fill, const std::string& stroke,
                double sw, double opacity = 1.0) {
        body += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) + "\" fill=\"" + fill +
                "\" stroke=\"" + stroke + "\" stroke-width=\"" + num(sw) + "\" fill-opacity=\"" +
                num(opacity) + "\"/>\n";
    }
    void rect(double x, double y, double w, double h, const std::string& fill, const std::string& stroke) {
        body += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" +
                num(h) + "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\"/>\n";
    }
    void text(double x, double y, const std::string& s, double size, const std::string& anchor = "middle") {
        body += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + num(size) +
                "\" font-family=\"sans-serif\" text-anchor=\"" + anchor + "\">" + s + "</text>\n";
    }
    std::string finish() { return body + "</svg>\n"; }
};

} // namespace plot_detail

struct EmbeddingPlotOptions {
    bool draw_blockade_disks = true; // disks of radius r_b / 2
    bool draw_labels = true;
    double pixels_per_um = 8.0;
};

// Register view of an embedding: blockade disks, edges, vertices and (on trap
// registers) the unused trap sites.
inline std::string svg_embedding(const Embedding& e, const Graph& g, const RegisterProfile& profile,
                                 const EmbeddingPlotOptions& opts = {}) {
    using plot_detail::SvgBuilder;
    const double margin_um = 6.0;

    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
    if (const auto* rect = profile.rectangle()) {
        x1 = rect->width;
        y1 = rect->height;
    } else {
        x0 = y0 = -profile.coord_bound;
        x1 = y1 = profile.coord_bound;
    }

    const double s = opts.pixels_per_um;
    const auto px = [&](double x) { return (x - x0 + margin_um) * s; };
    // SVG y axis points down; flip so plots read like register diagrams.
    const auto py = [&](double y) { return (y1 - y + margin_um) * s; };

    SvgBuilder svg;
    svg.open((x1 - x0 + 2 * margin_um) * s, (y1 - y0 + 2 * margin_um) * s);

    if (profile.rectangle() != nullptr) {
        svg.rect(px(0.0), py(y1), (x1 - x0) * s, (y1 - y0) * s, "none", "#888888");
    }
    if (const auto* lattice = profile.lattice()) {
        for (const Vec2& t : lattice->traps) {
            svg.circle(px(t.x), py(t.y), 0.25 * s, "#bbbbbb", "none", 0.0);
        }
    }

    if (opts.draw_blockade_disks) {
        for (const Vec2& c : e) {
            svg.circle(px(c.x), py(c.y), profile.r_b / 2.0 * s, "#77aaff", "none", 0.0, 0.25);
        }
    }
    for (auto [u, v] : g.edges()) {
        const Vec2 a = e[static_cast<std::size_t>(u)];
        const Vec2 b = e[static_cast<std::size_t>(v)];
        svg.line(px(a.x), py(a.y), px(b.x), py(b.y), "#333333", 0.15 * s);
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
        svg.circle(px(e[i].x), py(e[i].y), 0.45 * s, "#d04040", "#400000", 0.05 * s);
        if (opts.draw_labels) {
            svg.text(px(e[i].x), py(e[i].y) - 0.7 * s, std::to_string(i), 0.9 * s);
        }
    }
    return svg.finish();
}

// Bar chart: percentage of feasible samples per vertex count, with the sample
// count printed in each bin.
inline std::string svg_success_bars(const BatchReport& report) {
    using plot_detail::SvgBuilder;
    const double bar_w = 42.0, gap = 14.0, chart_h = 220.0, base = 260.0, left = 50.0;
    const std::size_t bins = report.success_by_n.size();
    SvgBuilder svg;
    svg.open(left + (bar_w + gap) * std::max<std::size_t>(bins, 1) + 30.0, 300.0);

    svg.line(left - 6, base, left + (bar_w + gap) * bins + 10, base, "#000000", 1.0);
    for (int tick = 0; tick <= 100; tick += 25) {
        const double y = base - chart_h * tick / 100.0;
        svg.line(left - 6, y, left - 2, y, "#000000", 1.0);
        svg.text(left - 10, y + 4, std::to_string(tick) + "%", 11.0, "end");
    }

    double x = left;
    for (const auto& [n, bucket] : report.success_by_n) {
        const double frac = bucket.total > 0 ? static_cast<double>(bucket.feasible) / bucket.total : 0.0;
        const double h = chart_h * frac;
        svg.rect(x, base - h, bar_w, h, "#6699dd", "#335588");
        svg.text(x + bar_w / 2, base - h - 6, plot_detail::num(100.0 * frac) + "%", 10.0);
        const double count_y = h >= 18.0 ? base - h / 2 + 4 : base - h - 18;
        svg.text(x + bar_w / 2, count_y, std::to_string(bucket.total), 10.0);
        svg.text(x + bar_w / 2, base + 16, "n=" + std::to_string(n), 11.0);
        x += bar_w + gap;
    }
    return svg.finish();
}

// Box summaries of the gap distribution per vertex count.
inline std::string svg_gap_boxes(const BatchReport& report) {
    using plot_detail::SvgBuilder;
    const double box_w = 30.0, gap = 26.0, chart_h = 220.0, base = 260.0, left = 56.0;
    const std::size_t bins = report.gaps_by_n.size();

    double max_gap = 1.0;
    for (const auto& [n, values] : report.gaps_by_n) {
        if (!values.empty()) max_gap = std::max(max_gap, values.back());
    }

    SvgBuilder svg;
    svg.open(left + (box_w + gap) * std::max<std::size_t>(bins, 1) + 30.0, 300.0);
    const auto yy = [&](double v) { return base - chart_h * v / max_gap; };

    svg.line(left - 6, base, left + (box_w + gap) * bins + 10, base, "#000000", 1.0);
    for (int tick = 0; tick <= 4; ++tick) {
        const double v = max_gap * tick / 4.0;
        svg.line(left - 6, yy(v), left - 2, yy(v), "#000000", 1.0);
        svg.text(left - 10, yy(v) + 4, plot_detail::num(v), 10.0, "end");
    }

    const auto quant = [](const std::vector<double>& sorted, double q) {
        const double pos = q * (static_cast<double>(sorted.size()) - 1.0);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
    };

    double x = left;
    for (const auto& [n, values] : report.gaps_by_n) {
        if (values.empty()) continue;
        const double q1 = quant(values, 0.25), q2 = quant(values, 0.5), q3 = quant(values, 0.75);
        const double cx = x + box_w / 2;
        svg.line(cx, yy(values.front()), cx, yy(q1), "#333333", 1.0);
        svg.line(cx, yy(q3), cx, yy(values.back()), "#333333", 1.0);
        svg.rect(x, yy(q3), box_w, yy(q1) - yy(q3), "#88cc88", "#336633");
        svg.line(x, yy(q2), x + box_w, yy(q2), "#114411", 2.0);
        svg.text(cx, base + 16, "n=" + std::to_string(n), 11.0);
        x += box_w + gap;
    }
    return svg.finish();
}

} // namespace udg
