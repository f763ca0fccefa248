#pragma once

// 2D scalar fields and the sublevel-set join tree: an ascending union-find
// sweep makes local minima leaves and merge saddles internal vertices, then
// exact-height ties are cleaned up and low-persistence leaves can be
// simplified away.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "merge_tree.hpp"
#include "tree_io.hpp"

namespace parkview {

struct ScalarField2D {
    int rows = 0, cols = 0;
    std::vector<double> values;  // row-major

    double at(int r, int c) const { return values[static_cast<size_t>(r) * cols + c]; }
    bool valid() const {
        if (rows <= 0 || cols <= 0) return false;
        if (values.size() != static_cast<size_t>(rows) * cols) return false;
        for (double v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

// Two formats: CSV (comma-separated rows) or a whitespace grid headed by
// a "rows cols" line. A comma in the first line selects CSV.
inline ScalarField2D read_field(const std::string& text) {
    ScalarField2D f;
    std::istringstream in(text);
    std::string first;
    while (std::getline(in, first) && first.find_first_not_of(" \t\r") == std::string::npos) {
    }
    if (first.find(',') != std::string::npos) {
        std::string line = first;
        do {
            if (line.find_first_not_of(" \t\r,") == std::string::npos) continue;
            std::istringstream row(line);
            std::string tok;
            int c = 0;
            while (std::getline(row, tok, ',')) {
                try {
                    size_t pos = 0;
                    double v = std::stod(tok, &pos);
                    f.values.push_back(v);
                } catch (const std::exception&) {
                    throw ParseError("field CSV: bad number '" + tok + "'");
                }
                ++c;
            }
            if (f.rows == 0)
                f.cols = c;
            else if (c != f.cols)
                throw ParseError("field CSV: ragged rows");
            ++f.rows;
        } while (std::getline(in, line));
    } else {
        std::istringstream head(first);
        if (!(head >> f.rows >> f.cols) || f.rows <= 0 || f.cols <= 0)
            throw ParseError("field grid: header must be 'rows cols'");
        double v;
        while (in >> v) f.values.push_back(v);
        if (f.values.size() != static_cast<size_t>(f.rows) * f.cols)
            throw ParseError("field grid: expected " + std::to_string(f.rows * f.cols) +
                             " values, got " + std::to_string(f.values.size()));
    }
    if (f.values.empty()) throw ParseError("field: no values");
    for (double v : f.values)
        if (!std::isfinite(v)) throw ParseError("field: non-finite value");
    return f;
}

namespace detail_field {

struct DSU {
    std::vector<int> p;
    explicit DSU(int n) : p(n) {
        for (int i = 0; i < n; ++i) p[i] = i;
    }
    int find(int x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace detail_field

inline OrderedMergeTree merge_tree_from_field(const ScalarField2D& f, int connectivity = 4) {
    if (!f.valid()) throw std::invalid_argument("merge_tree_from_field: invalid field");
    if (connectivity != 4 && connectivity != 8)
        throw std::invalid_argument("merge_tree_from_field: connectivity must be 4 or 8");

    int n = f.rows * f.cols;
    std::vector<int> cells(n);
    for (int i = 0; i < n; ++i) cells[i] = i;
    std::sort(cells.begin(), cells.end(), [&](int a, int b) {
        if (f.values[a] != f.values[b]) return f.values[a] < f.values[b];
        return a < b;
    });
    std::vector<int> sweep_pos(n);
    for (int i = 0; i < n; ++i) sweep_pos[cells[i]] = i;

    using Vertex = OrderedMergeTree::Vertex;
    std::vector<Vertex> verts;
    detail_field::DSU dsu(n);
    std::vector<int> rep(n, -1);       // component root cell -> current tree vertex
    std::vector<int> min_cell(n, -1);  // component root cell -> lowest cell (for ordering)
    for (int i = 0; i < n; ++i) min_cell[i] = i;

    auto neighbors = [&](int cell, std::vector<int>& out) {
        out.clear();
        int r = cell / f.cols, c = cell % f.cols;
        for (int dr = -1; dr <= 1; ++dr)
            for (int dc = -1; dc <= 1; ++dc) {
                if (dr == 0 && dc == 0) continue;
                if (connectivity == 4 && dr != 0 && dc != 0) continue;
                int rr = r + dr, cc = c + dc;
                if (rr < 0 || rr >= f.rows || cc < 0 || cc >= f.cols) continue;
                out.push_back(rr * f.cols + cc);
            }
    };

    std::vector<int> nb, comps;
    int saddle_count = 0;
    int last_root = -1;
    for (int pos = 0; pos < n; ++pos) {
        int cell = cells[pos];
        neighbors(cell, nb);
        comps.clear();
        for (int o : nb) {
            if (sweep_pos[o] > pos) continue;  // not swept yet
            int root = dsu.find(o);
            if (std::find(comps.begin(), comps.end(), root) == comps.end()) comps.push_back(root);
        }
        if (comps.empty()) {
            Vertex v;
            v.name = "m" + std::to_string(cell);
            v.height = f.values[cell];
            v.cell = {cell / f.cols, cell % f.cols};
            rep[dsu.find(cell)] = static_cast<int>(verts.size());
            verts.push_back(std::move(v));
        } else if (comps.size() == 1) {
            dsu.unite(cell, comps[0]);
            int root = dsu.find(cell);
            rep[root] = rep[comps[0]];
            min_cell[root] = min_cell[comps[0]];
        } else {
            std::sort(comps.begin(), comps.end(), [&](int a, int b) {
                int ma = min_cell[a], mb = min_cell[b];
                if (f.values[ma] != f.values[mb]) return f.values[ma] < f.values[mb];
                return ma < mb;
            });
            Vertex v;
            v.name = "s" + std::to_string(saddle_count++);
            v.height = f.values[cell];
            for (int comp : comps) v.children.push_back(rep[comp]);
            int vid = static_cast<int>(verts.size());
            verts.push_back(std::move(v));
            int best = min_cell[comps[0]];
            for (int comp : comps) dsu.unite(comp, cell);
            int root = dsu.find(cell);
            rep[root] = vid;
            min_cell[root] = best;
        }
        last_root = dsu.find(cell);
    }
    int root_vertex = rep[last_root];

    // exact-tie cleanup: a merge at the height of a child either absorbs that
    // child (internal, same sublevel set) or discards it (plateau leaf that is
    // not a strict minimum)
    std::vector<char> dead(verts.size(), 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t v = 0; v < verts.size(); ++v) {
            if (dead[v] || verts[v].children.empty()) continue;
            std::vector<int> kids;
            for (int c : verts[v].children) {
                if (verts[c].height == verts[v].height) {
                    changed = true;
                    if (verts[c].children.empty()) {
                        dead[c] = 1;  // plateau leaf
                    } else {
                        for (int gc : verts[c].children) kids.push_back(gc);
                        dead[c] = 1;
                    }
                } else {
                    kids.push_back(c);
                }
            }
            verts[v].children = std::move(kids);
        }
    }
    // splice out vertices left with a single child; a childless ex-saddle
    // becomes a leaf of its plateau
    std::vector<int> replace(verts.size());
    for (size_t v = 0; v < verts.size(); ++v) replace[v] = static_cast<int>(v);
    for (size_t pass = 0; pass < verts.size(); ++pass) {
        bool any = false;
        for (size_t v = 0; v < verts.size(); ++v) {
            if (dead[v] || verts[v].children.size() != 1) continue;
            int c = verts[v].children[0];
            replace[v] = replace[c];
            dead[v] = 1;
            any = true;
        }
        for (auto& vx : verts)
            for (int& c : vx.children) c = replace[c];
        if (static_cast<size_t>(root_vertex) < verts.size()) root_vertex = replace[root_vertex];
        if (!any) break;
    }

    std::vector<Vertex> alive;
    std::vector<int> remap(verts.size(), -1);
    for (size_t v = 0; v < verts.size(); ++v) {
        if (dead[v]) continue;
        remap[v] = static_cast<int>(alive.size());
        alive.push_back(std::move(verts[v]));
    }
    for (auto& vx : alive)
        for (int& c : vx.children) c = remap[c];
    return OrderedMergeTree::build(std::move(alive), remap[root_vertex]);
}

// Persistence of a leaf: the height climbed until its subtree contains a
// lower leaf (lexicographic on (height, leaf rank) so exact ties pair up
// deterministically). The lowest leaf of the whole tree persists forever.
inline std::vector<std::pair<int, double>> leaf_persistences(const OrderedMergeTree& t) {
    std::vector<std::pair<double, int>> sub_min(t.size(), {kInf, -1});
    std::vector<int> order;
    {
        std::vector<int> stack{t.root()};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            order.push_back(v);
            for (int c : t.children(v)) stack.push_back(c);
        }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int v = *it;
        if (t.is_leaf(v)) {
            sub_min[v] = {t.height(v), t.leaf_rank(v)};
        } else {
            for (int c : t.children(v)) sub_min[v] = std::min(sub_min[v], sub_min[c]);
        }
    }
    std::vector<std::pair<int, double>> out;
    for (int leaf : t.leaf_order()) {
        std::pair<double, int> me{t.height(leaf), t.leaf_rank(leaf)};
        int v = t.parent(leaf);
        double pers = kInf;
        while (v >= 0) {
            if (sub_min[v] < me) {
                pers = t.height(v) - t.height(leaf);
                break;
            }
            v = t.parent(v);
        }
        out.push_back({leaf, pers});
    }
    return out;
}

inline OrderedMergeTree simplify(const OrderedMergeTree& input, double threshold) {
    using Vertex = OrderedMergeTree::Vertex;
    OrderedMergeTree t = input;
    while (t.num_leaves() > 1) {
        auto pers = leaf_persistences(t);
        int victim = -1;
        double best = kInf;
        for (const auto& [leaf, p] : pers) {
            if (p < best) {  // strict: earlier (leftmost) leaf wins ties
                best = p;
                victim = leaf;
            }
        }
        if (!(best < threshold)) break;

        std::vector<Vertex> verts;
        std::vector<int> remap(t.size(), -1);
        int parent = t.parent(victim);
        for (int v = 0; v < t.size(); ++v) {
            if (v == victim) continue;
            if (v == parent && t.children(v).size() == 2) continue;  // will be spliced
            remap[v] = static_cast<int>(verts.size());
            Vertex nv;
            nv.name = t.name(v);
            nv.height = t.height(v);
            nv.cell = t.vertex(v).cell;
            verts.push_back(std::move(nv));
        }
        int root = t.root();
        std::vector<int> skip_to(t.size());
        for (int v = 0; v < t.size(); ++v) skip_to[v] = v;
        if (t.children(parent).size() == 2) {
            int sibling = -1;
            for (int c : t.children(parent))
                if (c != victim) sibling = c;
            skip_to[parent] = sibling;
            if (parent == root) root = sibling;
        }
        for (int v = 0; v < t.size(); ++v) {
            if (remap[v] < 0) continue;
            for (int c : t.children(v)) {
                int c2 = skip_to[c];
                if (c2 == victim || remap[c2] < 0) continue;
                verts[remap[v]].children.push_back(remap[c2]);
            }
        }
        t = OrderedMergeTree::build(std::move(verts), remap[skip_to[root]]);
    }
    return t;
}

}  // namespace parkview
