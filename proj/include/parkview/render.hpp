#pragma once

// Deterministic SVG rendering of a resolved scene. World coordinates are
// (column x, height); the canvas flips y so height grows upward. Output is
// byte-stable: fixed element order (hedges, grid, tree strokes, active
// paths, glyphs), fixed "%.3f" number formatting, no timestamps.

#include <array>
#include <cstdio>
#include <string>
#include <vector>

#include "layout.hpp"

namespace parkview {

struct RenderConfig {
    double canvas_width = 1200;
    double canvas_height = 800;
    double margin = 40;
    double tree_stroke = 1.4;          // px
    double grid_stroke = 1.0;          // px
    double grid_opacity = 0.35;
    double active_stroke_frac = 0.6;   // of the active column width
    double glyph_scale = 1.6;          // glyph side, in active stroke widths
    double min_bar_frac = 0.005;       // visible floor for degenerate bar heights
};

// Light fills for hedges, dark strokes for the matching active paths.
inline const std::array<const char*, 6>& red_fills() {
    static const std::array<const char*, 6> c = {"#f6c2b8", "#fadfc0", "#f1a7c8",
                                                 "#e8b797", "#f4cdd4", "#ddb2a4"};
    return c;
}
inline const std::array<const char*, 6>& red_strokes() {
    static const std::array<const char*, 6> c = {"#c1392b", "#e67e22", "#c2447f",
                                                 "#a04b1e", "#d96a77", "#8e4a35"};
    return c;
}
inline const std::array<const char*, 6>& blue_fills() {
    static const std::array<const char*, 6> c = {"#bcd4f0", "#c4e7e3", "#ccc2ec",
                                                 "#a9d3bc", "#d4dbf5", "#aec8cf"};
    return c;
}
inline const std::array<const char*, 6>& blue_strokes() {
    static const std::array<const char*, 6> c = {"#2b6cb0", "#1f8a7d", "#6b4fc1",
                                                 "#2e8b57", "#4a5fc1", "#36717f"};
    return c;
}

namespace detail {

inline void fmt(std::string& out, double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    out += buf;
}

struct Mapper {
    double x_scale = 1, y_scale = 1, x0 = 0, y0 = 0, margin = 0, canvas_h = 0;
    double px(double wx) const { return margin + (wx - x0) * x_scale; }
    double py(double wy) const { return canvas_h - margin - (wy - y0) * y_scale; }
};

inline void rect(std::string& out, const Mapper& m, const char* cls, double x0, double x1,
                 double y0, double y1, const std::string& style) {
    out += "<rect class=\"";
    out += cls;
    out += "\" x=\"";
    fmt(out, m.px(x0));
    out += "\" y=\"";
    fmt(out, m.py(y1));
    out += "\" width=\"";
    fmt(out, (x1 - x0) * m.x_scale);
    out += "\" height=\"";
    fmt(out, (y1 - y0) * m.y_scale);
    out += "\" ";
    out += style;
    out += "/>\n";
}

inline void line(std::string& out, const Mapper& m, const char* cls, double x0, double y0,
                 double x1, double y1, const std::string& style) {
    out += "<line class=\"";
    out += cls;
    out += "\" x1=\"";
    fmt(out, m.px(x0));
    out += "\" y1=\"";
    fmt(out, m.py(y0));
    out += "\" x2=\"";
    fmt(out, m.px(x1));
    out += "\" y2=\"";
    fmt(out, m.py(y1));
    out += "\" ";
    out += style;
    out += "/>\n";
}

// One rectilinear outline: straight top edge, stepped bottom following the
// bar bottoms. Bars are column-contiguous by construction.
inline void hedge_path(std::string& out, const Mapper& m, const TreeLayout& tl, const Hedge& h,
                       double min_bar, const std::string& style) {
    auto bottom_of = [&](const Bar& b) {
        double bot = b.bottom;
        if (h.top - bot < min_bar) bot = h.top - min_bar;
        return bot;
    };
    out += "<path class=\"hedge\" d=\"";
    const Column& first = tl.columns[h.bars.front().column];
    const Column& last = tl.columns[h.bars.back().column];
    out += "M ";
    fmt(out, m.px(tl.x_offset + first.x_left));
    out += " ";
    fmt(out, m.py(h.top));
    out += " L ";
    fmt(out, m.px(tl.x_offset + last.x_right));
    out += " ";
    fmt(out, m.py(h.top));
    for (auto it = h.bars.rbegin(); it != h.bars.rend(); ++it) {
        const Column& c = tl.columns[it->column];
        double bot = bottom_of(*it);
        out += " L ";
        fmt(out, m.px(tl.x_offset + c.x_right));
        out += " ";
        fmt(out, m.py(bot));
        out += " L ";
        fmt(out, m.px(tl.x_offset + c.x_left));
        out += " ";
        fmt(out, m.py(bot));
    }
    out += " Z\" ";
    out += style;
    out += "/>\n";
}

}  // namespace detail

inline std::string render_svg(const Scene& s, const RenderConfig& rc = {}) {
    using namespace detail;

    double wx0 = 0, wx1 = s.right.x_offset + s.right.width();
    double wy0 = kInf, wy1 = s.cap;
    for (const TreeLayout* tl : {&s.left, &s.right}) {
        for (const Column& c : tl->columns) wy0 = std::min(wy0, c.y_bottom);
        for (const Hedge& h : tl->hedges)
            for (const Bar& b : h.bars) wy0 = std::min(wy0, b.bottom);
    }
    if (!(wy0 < wy1)) wy0 = wy1 - 1.0;

    Mapper m;
    m.margin = rc.margin;
    m.canvas_h = rc.canvas_height;
    m.x0 = wx0;
    m.y0 = wy0;
    m.x_scale = (rc.canvas_width - 2 * rc.margin) / std::max(wx1 - wx0, 1e-12);
    m.y_scale = (rc.canvas_height - 2 * rc.margin) / std::max(wy1 - wy0, 1e-12);

    double min_bar = rc.min_bar_frac * (wy1 - wy0);

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"";
    fmt(out, rc.canvas_width);
    out += "\" height=\"";
    fmt(out, rc.canvas_height);
    out += "\" viewBox=\"0 0 ";
    fmt(out, rc.canvas_width);
    out += " ";
    fmt(out, rc.canvas_height);
    out += "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

    auto hedge_style = [&](bool red, int color) {
        const auto& pal = red ? red_fills() : blue_fills();
        return std::string("fill=\"") + pal[color % 6] + "\" stroke=\"none\"";
    };
    auto active_style = [&](bool red, int color, double width_px) {
        const auto& pal = red ? red_strokes() : blue_strokes();
        std::string st = std::string("stroke=\"") + pal[color % 6] + "\" stroke-width=\"";
        fmt(st, width_px);
        st += "\"";
        return st;
    };

    // hedges (left tree holds the red side, right tree the blue side)
    for (const Hedge& h : s.left.hedges) hedge_path(out, m, s.left, h, min_bar, hedge_style(true, h.color));
    for (const Hedge& h : s.right.hedges) hedge_path(out, m, s.right, h, min_bar, hedge_style(false, h.color));

    // grid
    {
        std::string gs = "stroke=\"#9a9a9a\" stroke-width=\"";
        fmt(gs, rc.grid_stroke);
        gs += "\" stroke-opacity=\"";
        fmt(gs, rc.grid_opacity);
        gs += "\"";
        for (double g : s.grid) line(out, m, "grid", wx0, g, wx1, g, gs);
    }

    // tree strokes: one vertical per column, one horizontal per merge
    {
        std::string ts = "stroke=\"#222222\" stroke-width=\"";
        fmt(ts, rc.tree_stroke);
        ts += "\"";
        for (const TreeLayout* tl : {&s.left, &s.right}) {
            for (const Column& c : tl->columns)
                line(out, m, "tree", tl->x_offset + c.x_center, c.y_bottom,
                     tl->x_offset + c.x_center, c.y_top, ts);
            for (const Connector& c : tl->connectors)
                line(out, m, "tree", tl->x_offset + tl->columns[c.col_lo].x_center, c.height,
                     tl->x_offset + tl->columns[c.col_hi].x_center, c.height, ts);
        }
    }

    // active paths and their end glyphs
    for (int side = 0; side < 2; ++side) {
        const TreeLayout& tl = side == 0 ? s.left : s.right;
        bool red = side == 1;  // actives on the right tree match the left (red) hedges
        for (const ActivePathGlyph& g : tl.actives) {
            const Column& c = tl.columns[g.column];
            double w_px = rc.active_stroke_frac * c.width * m.x_scale;
            line(out, m, "active", tl.x_offset + c.x_center, g.lo, tl.x_offset + c.x_center, g.hi,
                 active_style(red, g.color, w_px));
        }
        for (const ActivePathGlyph& g : tl.actives) {
            const Column& c = tl.columns[g.column];
            double side_px = rc.active_stroke_frac * c.width * m.x_scale * rc.glyph_scale;
            double half_w = 0.5 * side_px / m.x_scale;
            double half_h = 0.5 * side_px / m.y_scale;
            const auto& pal = red ? red_strokes() : blue_strokes();
            std::string st = std::string("fill=\"") + pal[g.color % 6] + "\"";
            rect(out, m, "glyph", tl.x_offset + c.x_center - half_w, tl.x_offset + c.x_center + half_w,
                 g.hi - half_h, g.hi + half_h, st);
        }
    }

    out += "</svg>\n";
    return out;
}

}  // namespace parkview
