#pragma once

// Shared fixtures and generators for the test suites: hand fixtures, random
// ordered trees, exhaustive small tree shapes, and random valid monotone
// interleavings produced through the matching pipeline (so that every
// generated instance is validator-checked by construction).

#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <parkview/decomposition.hpp>
#include <parkview/frechet.hpp>
#include <parkview/interleaving.hpp>
#include <parkview/layout.hpp>
#include <parkview/merge_tree.hpp>
#include <parkview/pipeline.hpp>
#include <parkview/tree_io.hpp>

namespace testutil {

using namespace parkview;

struct Rng {
    std::mt19937 g;
    explicit Rng(unsigned seed) : g(seed) {}
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(g);
    }
    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); }
};

// a(0), b(1) under r(3)
inline OrderedMergeTree two_leaf_tree() {
    return read_tree(R"({"root":"r","nodes":{
        "r":{"height":3,"children":["a","b"]},
        "a":{"height":0},"b":{"height":1}}})");
}

inline OrderedMergeTree one_leaf_tree(double h = 0) {
    using V = OrderedMergeTree::Vertex;
    std::vector<V> verts(1);
    verts[0].name = "c";
    verts[0].height = h;
    return OrderedMergeTree::build(std::move(verts), 0);
}

// Random ordered tree: random shape with bounded fan-out, strictly
// increasing random heights.
inline OrderedMergeTree random_tree(Rng& rng, int leaves, int max_fanout = 4) {
    using V = OrderedMergeTree::Vertex;
    std::vector<V> verts;
    struct Item {
        int vertex;
        int leaves;
    };
    // build top-down: a pending node either becomes a leaf or splits
    std::vector<Item> todo;
    verts.push_back(V{});
    todo.push_back({0, leaves});
    std::vector<std::vector<int>> kids_count;
    while (!todo.empty()) {
        Item it = todo.back();
        todo.pop_back();
        if (it.leaves == 1) {
            verts[it.vertex].name = "l" + std::to_string(it.vertex);
            continue;
        }
        verts[it.vertex].name = "v" + std::to_string(it.vertex);
        int k = rng.pick(2, std::min(it.leaves, max_fanout));
        // split it.leaves into k positive parts
        std::vector<int> parts(k, 1);
        for (int extra = it.leaves - k; extra > 0; --extra) ++parts[rng.pick(0, k - 1)];
        for (int p : parts) {
            int child = static_cast<int>(verts.size());
            verts.push_back(V{});
            verts[it.vertex].children.push_back(child);
            todo.push_back({child, p});
        }
    }
    // heights bottom-up: leaves random, internal above the max child
    std::vector<int> order;
    {
        std::vector<int> stack{0};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            order.push_back(v);
            for (int c : verts[v].children) stack.push_back(c);
        }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int v = *it;
        if (verts[v].children.empty()) {
            verts[v].height = rng.uniform(0.0, 2.0);
        } else {
            double m = -1e300;
            for (int c : verts[v].children) m = std::max(m, verts[c].height);
            verts[v].height = m + rng.uniform(0.05, 1.0);
        }
    }
    return OrderedMergeTree::build(std::move(verts), 0);
}

// ---------------------------------------------------------------------------
// Exhaustive ordered tree shapes (internal degree >= 2) with n leaves.

struct Shape {
    std::vector<Shape> kids;  // empty = leaf
};

inline const std::vector<Shape>& all_shapes(int leaves) {
    static std::vector<std::vector<Shape>> memo;  // memo[n] = shapes with n leaves
    while (static_cast<int>(memo.size()) <= leaves) {
        int n = static_cast<int>(memo.size());
        std::vector<Shape> out;
        if (n == 0) {
            memo.push_back(out);
            continue;
        }
        if (n == 1) {
            out.push_back(Shape{});
            memo.push_back(out);
            continue;
        }
        // compositions of n into k >= 2 positive parts, cartesian product of shapes
        std::vector<int> parts;
        std::function<void(int)> rec = [&](int rest) {
            if (rest == 0) {
                if (parts.size() < 2) return;
                std::vector<size_t> idx(parts.size(), 0);
                while (true) {
                    Shape s;
                    for (size_t i = 0; i < parts.size(); ++i)
                        s.kids.push_back(memo[parts[i]][idx[i]]);
                    out.push_back(std::move(s));
                    size_t i = 0;
                    for (; i < idx.size(); ++i) {
                        if (++idx[i] < memo[parts[i]].size()) break;
                        idx[i] = 0;
                    }
                    if (i == idx.size()) break;
                }
                return;
            }
            for (int first = 1; first <= rest; ++first) {
                if (rest - first == 0 && parts.size() + 1 < 2) continue;
                parts.push_back(first);
                rec(rest - first);
                parts.pop_back();
            }
        };
        rec(n);
        memo.push_back(std::move(out));
    }
    return memo[leaves];
}

inline OrderedMergeTree materialize(const Shape& shape, Rng& rng) {
    using V = OrderedMergeTree::Vertex;
    std::vector<V> verts;
    std::function<int(const Shape&)> rec = [&](const Shape& s) -> int {
        int v = static_cast<int>(verts.size());
        verts.push_back(V{});
        if (s.kids.empty()) {
            verts[v].name = "l" + std::to_string(v);
            verts[v].height = rng.uniform(0.0, 2.0);
            return v;
        }
        verts[v].name = "v" + std::to_string(v);
        double m = -1e300;
        for (const Shape& k : s.kids) {
            int c = rec(k);
            verts[v].children.push_back(c);
            m = std::max(m, verts[c].height);
        }
        verts[v].height = m + rng.uniform(0.05, 1.0);
        return v;
    };
    rec(shape);
    return OrderedMergeTree::build(std::move(verts), 0);
}

// ---------------------------------------------------------------------------
// Random valid monotone interleavings through the matching pipeline.

struct Instance {
    std::unique_ptr<OrderedMergeTree> a, b;
    double delta = 0;
    Interleaving il;
};

inline Instance make_instance(OrderedMergeTree ta, OrderedMergeTree tb, Rng& rng,
                              double slack = 0.5) {
    Instance inst;
    inst.a = std::make_unique<OrderedMergeTree>(std::move(ta));
    inst.b = std::make_unique<OrderedMergeTree>(std::move(tb));
    EulerTourCurve ca = euler_tour(*inst.a);
    EulerTourCurve cb = euler_tour(*inst.b);
    double d = frechet_delta(ca, cb);
    inst.delta = d + 1e-9 + rng.uniform(0.0, slack) * (d > 0 ? d : 0.1);
    auto matching = frechet_matching(ca.heights, cb.heights, inst.delta);
    inst.il = interleaving_from_matching(ca, cb, matching, inst.delta);
    return inst;
}

inline Instance random_instance(Rng& rng, int max_leaves) {
    int la = rng.pick(1, max_leaves);
    int lb = rng.pick(1, max_leaves);
    return make_instance(random_tree(rng, la), random_tree(rng, lb), rng);
}

}  // namespace testutil
