#pragma once

// Resolved ParkView geometry: columns (one per path, narrowed when inactive),
// rectilinear tree strokes, hedges (histogram-shaped enclosures of branches,
// built from tree bars, fillers, and bridges), active paths, the hedge
// adjacency graph with its structural properties, and the coloring pass.

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "decomposition.hpp"
#include "interleaving.hpp"
#include "merge_tree.hpp"

namespace parkview {

inline constexpr double kGeomTol = 1e-9;

struct LayoutConfig {
    double active_width = 3.0;
    double inactive_width = 1.0;
    double tree_gap = 4.0;
    int grid_fraction = 1;
    int palette_size = 3;
    int max_grid_lines = 4096;
};

struct Column {
    int path_index = -1;
    double x_center = 0, width = 0, x_left = 0, x_right = 0;
    bool active = false;
    double y_bottom = 0, y_top = 0;  // vertical stroke extent of the path
};

enum class BarKind { Tree, Filler, Bridge };

struct Bar {
    int column = -1;
    BarKind kind = BarKind::Tree;
    double bottom = 0, top = 0;
};

struct Hedge {
    int path_index = -1;  // path in the other tree whose branch this encloses
    std::vector<Bar> bars;
    double top = 0;
    int min_col = 0, max_col = 0;
    int lowest_leaf_column = 0;
    int color = -1;
};

struct ActivePathGlyph {
    int path_index = -1;
    int column = -1;
    double lo = 0, hi = 0;  // [lo, hi); square marker at hi
    int color = -1;
};

struct Connector {
    int vertex = -1;
    double height = 0;
    int col_lo = 0, col_hi = 0;
};

struct TreeLayout {
    std::vector<Column> columns;
    std::vector<Connector> connectors;
    std::vector<Hedge> hedges;             // enclosures of branches mapped from this tree
    std::vector<ActivePathGlyph> actives;  // active paths on this tree's own paths
    double x_offset = 0;

    double width() const { return columns.empty() ? 0 : columns.back().x_right; }
};

struct Scene {
    TreeLayout left, right;
    double delta = 0;
    double cap = 0;  // drawing height standing in for +infinity
    std::vector<double> grid;
    LayoutConfig config;
};

struct SceneError : std::runtime_error {
    std::vector<Violation> violations;
    explicit SceneError(std::vector<Violation> v)
        : std::runtime_error(ValidationError::format(v)), violations(std::move(v)) {}
};

// ---------------------------------------------------------------------------

// Columns in leaf order; a column is active iff its own path is mapped to.
inline std::vector<Column> build_columns(const PathDecomposition& d,
                                         const std::vector<Branch>& own_branches, double cap,
                                         const LayoutConfig& cfg) {
    std::vector<Column> cols;
    double x = 0;
    for (int i = 0; i < static_cast<int>(d.paths.size()); ++i) {
        Column c;
        c.path_index = i;
        c.active = !own_branches[i].empty();
        c.width = c.active ? cfg.active_width : cfg.inactive_width;
        c.x_left = x;
        c.x_right = x + c.width;
        c.x_center = x + 0.5 * c.width;
        x = c.x_right;
        c.y_bottom = d.tree->height(d.paths[i].bottom_leaf);
        c.y_top = d.paths[i].top_vertex < 0 ? cap : d.tree->height(d.paths[i].top_vertex);
        cols.push_back(c);
    }
    return cols;
}

// One hedge per nonempty branch: a tree bar per column holding branch points,
// fillers in the gaps inside a component, bridges between components. All bar
// tops sit at the branch top height.
inline Hedge build_hedge(const Branch& b, const PathDecomposition& source_paths, double cap,
                         double delta) {
    if (b.empty()) throw std::invalid_argument("build_hedge: empty branch has no hedge");
    Hedge h;
    h.path_index = b.path_index;
    h.top = std::isinf(b.top_height) ? cap - delta : b.top_height;

    struct CompCols {
        std::map<int, double> bottom;  // column -> lowest branch point there
    };
    std::vector<CompCols> comps;
    for (const BranchComponent& c : b.components) {
        CompCols cc;
        for (const auto& [edge, iv] : c.edge_spans) {
            int col = source_paths.path_of_edge[edge];
            auto it = cc.bottom.find(col);
            if (it == cc.bottom.end())
                cc.bottom[col] = iv.lo;
            else
                it->second = std::min(it->second, iv.lo);
        }
        comps.push_back(std::move(cc));
    }
    std::sort(comps.begin(), comps.end(),
              [](const CompCols& a, const CompCols& b2) { return a.bottom.begin()->first < b2.bottom.begin()->first; });

    for (size_t ci = 0; ci < comps.size(); ++ci) {
        const auto& cc = comps[ci].bottom;
        int prev_col = -1;
        double prev_bottom = 0;
        for (const auto& [col, bottom] : cc) {
            if (prev_col >= 0 && col > prev_col + 1) {
                double fill = std::max(prev_bottom, bottom);  // shorter flanking bar wins
                for (int g = prev_col + 1; g < col; ++g)
                    h.bars.push_back(Bar{g, BarKind::Filler, fill, h.top});
            }
            h.bars.push_back(Bar{col, BarKind::Tree, bottom, h.top});
            prev_col = col;
            prev_bottom = bottom;
        }
    }
    // bridges fill gap columns between consecutive components, hung from the top
    double shortest = kInf;
    for (const Bar& bar : h.bars) shortest = std::min(shortest, bar.top - bar.bottom);
    for (size_t ci = 0; ci + 1 < comps.size(); ++ci) {
        int from = comps[ci].bottom.rbegin()->first;
        int to = comps[ci + 1].bottom.begin()->first;
        for (int g = from + 1; g < to; ++g)
            h.bars.push_back(Bar{g, BarKind::Bridge, h.top - 0.5 * shortest, h.top});
    }
    std::sort(h.bars.begin(), h.bars.end(), [](const Bar& a, const Bar& b2) { return a.column < b2.column; });

    h.min_col = h.bars.front().column;
    h.max_col = h.bars.back().column;
    h.lowest_leaf_column = h.bars.front().column;
    double lowest = kInf;
    for (const Bar& bar : h.bars)
        if (bar.kind == BarKind::Tree && bar.bottom < lowest) {
            lowest = bar.bottom;
            h.lowest_leaf_column = bar.column;
        }
    return h;
}

// ---------------------------------------------------------------------------
// Adjacency and the structural properties (i)-(iii)

struct HedgeAdjacency {
    std::vector<std::vector<int>> neighbors;
    std::vector<int> parent;  // -1 if none
    std::vector<Violation> violations;
};

inline HedgeAdjacency hedge_adjacency(const std::vector<Hedge>& hedges) {
    HedgeAdjacency adj;
    int n = static_cast<int>(hedges.size());
    adj.neighbors.assign(n, {});
    adj.parent.assign(n, -1);

    int ncols = 0;
    for (const Hedge& h : hedges) ncols = std::max(ncols, h.max_col + 1);
    // per column: (hedge index, bar)
    std::vector<std::vector<std::pair<int, const Bar*>>> by_col(ncols);
    for (int i = 0; i < n; ++i)
        for (const Bar& b : hedges[i].bars) by_col[b.column].push_back({i, &b});
    for (auto& col : by_col)
        std::sort(col.begin(), col.end(),
                  [](const auto& a, const auto& b) { return a.second->bottom < b.second->bottom; });

    auto add_edge = [&](int a, int b) {
        if (a == b) return;
        auto& na = adj.neighbors[a];
        if (std::find(na.begin(), na.end(), b) == na.end()) {
            na.push_back(b);
            adj.neighbors[b].push_back(a);
        }
    };
    std::vector<std::vector<int>> parents(n);

    for (int c = 0; c < ncols; ++c) {
        const auto& col = by_col[c];
        // same column: stacked bars; touching bottoms/tops are adjacency, overlap is a bug
        for (size_t i = 0; i + 1 < col.size(); ++i) {
            const auto& [hi_, bi] = col[i];
            const auto& [hj_, bj] = col[i + 1];
            if (hi_ == hj_) continue;
            if (bj->bottom < bi->top - kGeomTol)
                adj.violations.push_back({"property-i",
                                          "hedge interiors overlap in column " + std::to_string(c)});
            else if (std::abs(bj->bottom - bi->top) <= kGeomTol) {
                add_edge(hi_, hj_);
                // bi's top is the top of hedge hi_ (tops aligned); hj_ sits above it
                parents[hi_].push_back(hj_);
            }
        }
        // adjacent columns: shared vertical boundary with positive overlap
        if (c + 1 < ncols) {
            for (const auto& [ha, ba] : by_col[c]) {
                for (const auto& [hb, bb] : by_col[c + 1]) {
                    if (ha == hb) continue;
                    double lo = std::max(ba->bottom, bb->bottom);
                    double hi2 = std::min(ba->top, bb->top);
                    if (hi2 - lo > kGeomTol) add_edge(ha, hb);
                }
            }
        }
    }

    for (int i = 0; i < n; ++i) {
        auto& ps = parents[i];
        std::sort(ps.begin(), ps.end());
        ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
        if (ps.size() > 1)
            adj.violations.push_back({"property-ii", "hedge has more than one parent"});
        if (!ps.empty()) adj.parent[i] = ps.front();
    }

    // property (iii): nothing adjacent to the bottom of a longest bar
    for (int i = 0; i < n; ++i) {
        double lowest = kInf;
        for (const Bar& b : hedges[i].bars) lowest = std::min(lowest, b.bottom);
        for (const Bar& b : hedges[i].bars) {
            if (b.bottom > lowest + kGeomTol) continue;
            for (const auto& [hj_, bj] : by_col[b.column]) {
                if (hj_ == i) continue;
                if (std::abs(bj->top - b.bottom) <= kGeomTol)
                    adj.violations.push_back({"property-iii",
                                              "hedge adjacent below a longest bar in column " +
                                                  std::to_string(b.column)});
            }
        }
    }
    return adj;
}

// ---------------------------------------------------------------------------
// Coloring (hedges processed by descending top; the swap step frees a color
// when the left, right, and parent neighbors are all distinct).

inline std::vector<int> color_hedges(const std::vector<Hedge>& hedges, const HedgeAdjacency& adj,
                                     int palette_size) {
    if (palette_size < 3) throw std::invalid_argument("color_hedges: palette must have >= 3 colors");
    int n = static_cast<int>(hedges.size());
    std::vector<int> color(n, -1);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (hedges[a].top != hedges[b].top) return hedges[a].top > hedges[b].top;
        return hedges[a].lowest_leaf_column < hedges[b].lowest_leaf_column;
    });

    for (int g : order) {
        auto used_colors = [&]() {
            std::vector<bool> used(palette_size, false);
            for (int nb : adj.neighbors[g])
                if (color[nb] >= 0) used[color[nb]] = true;
            return used;
        };
        auto count = [](const std::vector<bool>& u) {
            return static_cast<int>(std::count(u.begin(), u.end(), true));
        };
        // classify colored neighbors by where their bars actually touch G:
        // stacked above = parent, side contact = left/right (nearest wins)
        int L = -1, R = -1, P = adj.parent[g] >= 0 && color[adj.parent[g]] >= 0 ? adj.parent[g] : -1;
        int bestL = -1, bestR = -1;
        for (int nb : adj.neighbors[g]) {
            if (color[nb] < 0 || nb == P) continue;
            for (const Bar& a : hedges[g].bars)
                for (const Bar& b : hedges[nb].bars) {
                    if (std::abs(a.column - b.column) == 1 &&
                        std::min(a.top, b.top) - std::max(a.bottom, b.bottom) > kGeomTol) {
                        if (b.column < a.column) {
                            if (b.column > bestL) bestL = b.column, L = nb;
                        } else {
                            if (bestR < 0 || b.column < bestR) bestR = b.column, R = nb;
                        }
                    } else if (a.column == b.column && std::abs(b.bottom - a.top) <= kGeomTol &&
                               P < 0) {
                        P = nb;
                    }
                }
        }
        if (count(used_colors()) >= palette_size && L >= 0 && R >= 0 && P >= 0 &&
            color[L] != color[R] && color[R] != color[P] && color[L] != color[P]) {
            // locate the bar of P closest to G that extends below the top of G
            int best_col = -1, best_dist = 0;
            for (const Bar& b : hedges[P].bars) {
                if (!(b.bottom < hedges[g].top - kGeomTol)) continue;
                int dist;
                if (b.column < hedges[g].min_col)
                    dist = hedges[g].min_col - b.column;
                else if (b.column > hedges[g].max_col)
                    dist = b.column - hedges[g].max_col;
                else
                    continue;
                if (best_col < 0 || dist < best_dist) {
                    best_col = b.column;
                    best_dist = dist;
                }
            }
            if (best_col >= 0) {
                int l = color[L], r = color[R];
                bool on_left = best_col < hedges[g].min_col;
                for (int h = 0; h < n; ++h) {
                    if (color[h] < 0) continue;
                    bool between = on_left
                                       ? (hedges[h].min_col > best_col && hedges[h].max_col < hedges[g].min_col)
                                       : (hedges[h].max_col < best_col && hedges[h].min_col > hedges[g].max_col);
                    if (!between) continue;
                    if (color[h] == l)
                        color[h] = r;
                    else if (color[h] == r)
                        color[h] = l;
                }
            }
        }
        std::vector<bool> used = used_colors();
        for (int c = 0; c < palette_size; ++c)
            if (!used[c]) {
                color[g] = c;
                break;
            }
        if (color[g] < 0)
            throw SceneError(std::vector<Violation>{
                {"coloring", "no free color for a hedge; palette exhausted"}});
    }

    for (int a = 0; a < n; ++a)
        for (int b : adj.neighbors[a])
            if (color[a] == color[b])
                throw SceneError(std::vector<Violation>{
                    {"coloring", "adjacent hedges received the same color"}});
    return color;
}

// ---------------------------------------------------------------------------
// Scene assembly

inline TreeLayout build_tree_layout(const PathDecomposition& own_paths,
                                    const std::vector<Branch>& own_branches,
                                    const std::vector<Branch>& incoming_branches, double delta,
                                    double cap, const LayoutConfig& cfg) {
    TreeLayout tl;
    tl.columns = build_columns(own_paths, own_branches, cap, cfg);

    const OrderedMergeTree& t = *own_paths.tree;
    for (int v = 0; v < t.size(); ++v) {
        if (t.is_leaf(v)) continue;
        Connector c;
        c.vertex = v;
        c.height = t.height(v);
        c.col_lo = t.size();
        c.col_hi = -1;
        for (int ch : t.children(v)) {
            int col = own_paths.path_of_edge[ch];
            c.col_lo = std::min(c.col_lo, col);
            c.col_hi = std::max(c.col_hi, col);
        }
        tl.connectors.push_back(c);
    }

    for (const Branch& b : incoming_branches)
        if (!b.empty()) tl.hedges.push_back(build_hedge(b, own_paths, cap, delta));

    for (int i = 0; i < static_cast<int>(own_paths.paths.size()); ++i) {
        const Branch& b = own_branches[i];
        if (b.empty()) continue;
        ActivePathGlyph g;
        g.path_index = i;
        g.column = i;
        g.lo = b.bottom_height + delta;
        g.hi = own_paths.paths[i].top_vertex < 0 ? cap : own_paths.paths[i].top_height(t);
        tl.actives.push_back(g);
    }
    return tl;
}

inline void validate_scene(Scene& s) {
    std::vector<Violation> out;

    auto check_tree = [&](const TreeLayout& with_hedges, const TreeLayout& with_actives,
                          const char* tag) {
        // delta-offset: each hedge top is exactly delta below its active path top
        std::vector<int> glyph_of_path(with_actives.columns.size(), -1);
        for (int i = 0; i < static_cast<int>(with_actives.actives.size()); ++i)
            glyph_of_path[with_actives.actives[i].path_index] = i;
        for (const Hedge& h : with_hedges.hedges) {
            int gi = glyph_of_path[h.path_index];
            if (gi < 0) {
                out.push_back({"offset", std::string(tag) + ": hedge without a matching active path"});
                continue;
            }
            if (with_actives.actives[gi].hi - s.delta != h.top)
                out.push_back({"offset", std::string(tag) + ": hedge top is not exactly delta below its active path"});
        }
        // order correspondence: lowest-leaf order of hedges matches the
        // left-to-right order of their active paths
        std::vector<const Hedge*> sorted;
        for (const Hedge& h : with_hedges.hedges) sorted.push_back(&h);
        std::sort(sorted.begin(), sorted.end(), [](const Hedge* a, const Hedge* b) {
            return a->lowest_leaf_column < b->lowest_leaf_column;
        });
        for (size_t i = 1; i < sorted.size(); ++i)
            if (sorted[i - 1]->path_index >= sorted[i]->path_index)
                out.push_back({"order-correspondence",
                               std::string(tag) + ": hedge order disagrees with active path order"});
        // no leaf vertically above a horizontal connector segment
        for (const Connector& c : with_actives.connectors)
            for (int col = c.col_lo; col <= c.col_hi; ++col)
                if (with_actives.columns[col].y_bottom > c.height + kGeomTol)
                    out.push_back({"leaf-above-segment",
                                   std::string(tag) + ": leaf above a horizontal segment"});
    };
    check_tree(s.left, s.right, "alpha");
    check_tree(s.right, s.left, "beta");
    if (!out.empty()) throw SceneError(std::move(out));
}

inline Scene build_scene(const Interleaving& il, const PathBranchDecomposition& pbd,
                         const LayoutConfig& cfg) {
    const OrderedMergeTree& T = *il.alpha.source;
    const OrderedMergeTree& Tp = *il.alpha.target;
    const double delta = il.alpha.delta;

    Scene s;
    s.config = cfg;
    s.delta = delta;

    double max_root = std::max(T.height(T.root()), Tp.height(Tp.root()));
    double min_h = kInf, max_h = -kInf;
    for (int v = 0; v < T.size(); ++v) {
        min_h = std::min(min_h, T.height(v));
        max_h = std::max(max_h, T.height(v));
    }
    for (int v = 0; v < Tp.size(); ++v) {
        min_h = std::min(min_h, Tp.height(v));
        max_h = std::max(max_h, Tp.height(v));
    }
    double range = max_h - min_h;
    s.cap = max_root + delta + (range > 0 ? 0.05 * range : 1.0);

    // T's columns come from beta's decomposition of T; hedges on T enclose
    // alpha's branches; the active paths on T belong to beta.
    s.left = build_tree_layout(pbd.beta.paths, pbd.beta.branches, pbd.alpha.branches, delta, s.cap, cfg);
    s.right = build_tree_layout(pbd.alpha.paths, pbd.alpha.branches, pbd.beta.branches, delta, s.cap, cfg);
    s.right.x_offset = s.left.width() + cfg.tree_gap;

    auto color_side = [&](TreeLayout& with_hedges, TreeLayout& with_actives) {
        HedgeAdjacency adj = hedge_adjacency(with_hedges.hedges);
        if (!adj.violations.empty()) throw SceneError(std::move(adj.violations));
        std::vector<int> colors = color_hedges(with_hedges.hedges, adj, cfg.palette_size);
        for (size_t i = 0; i < with_hedges.hedges.size(); ++i)
            with_hedges.hedges[i].color = colors[i];
        std::vector<int> color_of_path(with_actives.columns.size(), -1);
        for (const Hedge& h : with_hedges.hedges) color_of_path[h.path_index] = h.color;
        for (ActivePathGlyph& g : with_actives.actives) g.color = color_of_path[g.path_index];
    };
    color_side(s.left, s.right);
    color_side(s.right, s.left);

    if (delta > 0 && cfg.grid_fraction >= 1) {
        double spacing = delta / cfg.grid_fraction;
        long long k0 = static_cast<long long>(std::ceil(min_h / spacing));
        long long k1 = static_cast<long long>(std::floor(s.cap / spacing));
        if (k1 - k0 + 1 <= cfg.max_grid_lines)
            for (long long k = k0; k <= k1; ++k) s.grid.push_back(k * spacing);
    }

    validate_scene(s);
    return s;
}

// Debug dump listing every bar, glyph, color index, and grid line.
inline nlohmann::json scene_to_json(const Scene& s) {
    auto dump_tree = [](const TreeLayout& tl) {
        nlohmann::json j;
        nlohmann::json cols = nlohmann::json::array();
        for (const Column& c : tl.columns)
            cols.push_back({{"path", c.path_index},
                            {"x", c.x_center},
                            {"width", c.width},
                            {"active", c.active},
                            {"y0", c.y_bottom},
                            {"y1", c.y_top}});
        j["columns"] = cols;
        nlohmann::json hedges = nlohmann::json::array();
        for (const Hedge& h : tl.hedges) {
            nlohmann::json bars = nlohmann::json::array();
            for (const Bar& b : h.bars)
                bars.push_back({{"column", b.column},
                                {"kind", b.kind == BarKind::Tree ? "tree"
                                         : b.kind == BarKind::Filler ? "filler" : "bridge"},
                                {"bottom", b.bottom},
                                {"top", b.top}});
            hedges.push_back({{"path", h.path_index}, {"color", h.color}, {"bars", bars}});
        }
        j["hedges"] = hedges;
        nlohmann::json actives = nlohmann::json::array();
        for (const ActivePathGlyph& g : tl.actives)
            actives.push_back({{"path", g.path_index},
                               {"column", g.column},
                               {"lo", g.lo},
                               {"hi", g.hi},
                               {"color", g.color}});
        j["actives"] = actives;
        return j;
    };
    nlohmann::json j;
    j["delta"] = s.delta;
    j["cap"] = s.cap;
    j["left"] = dump_tree(s.left);
    j["right"] = dump_tree(s.right);
    j["grid"] = s.grid;
    return j;
}

}  // namespace parkview
