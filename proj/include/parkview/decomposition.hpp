#pragma once

// Path decompositions of a merge tree and the greedy heavy path-branch
// decomposition: at every internal vertex the through edge is a down edge of
// maximum weight, where the weight of an edge is the number of connected
// components of its preimage under the shift map. Ties go to the down edge
// whose active path starts lowest, then to the leftmost child.

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "interleaving.hpp"
#include "merge_tree.hpp"

namespace parkview {

struct PathDecomposition {
    const OrderedMergeTree* tree = nullptr;
    std::vector<Path> paths;        // one per leaf, in leaf order
    std::vector<int> through;       // per internal vertex: chosen child; -1 elsewhere
    std::vector<int> path_of_edge;  // per vertex: path traversing its up edge
};

// Derives the paths of a through-edge assignment.
inline PathDecomposition paths_from_through(const OrderedMergeTree& t, std::vector<int> through) {
    PathDecomposition d;
    d.tree = &t;
    d.through = std::move(through);
    d.path_of_edge.assign(t.size(), -1);
    for (int leaf : t.leaf_order()) {
        Path p;
        p.bottom_leaf = leaf;
        int cur = leaf;
        p.edges.push_back(cur);
        while (true) {
            int v = t.parent(cur);
            if (v < 0) {
                p.top_vertex = -1;  // continues along the root edge to infinity
                break;
            }
            if (d.through[v] == cur) {
                p.edges.push_back(v);
                cur = v;
            } else {
                p.top_vertex = v;
                break;
            }
        }
        for (int e : p.edges) d.path_of_edge[e] = static_cast<int>(d.paths.size());
        d.paths.push_back(std::move(p));
    }
    return d;
}

struct SideDecomposition {
    PathDecomposition paths;       // decomposition of the map's target
    std::vector<Branch> branches;  // B_pi per path, in the map's source
    EdgeWeights weights;
};

// Active path of path i: the top part of pi that its branch maps onto,
// [bottom(B_pi) + delta, f(top of pi)). Returns false for an empty branch.
inline bool active_interval(const SideDecomposition& s, const ShiftMap& m, int i, double& lo,
                            double& hi) {
    const Branch& b = s.branches[i];
    if (b.empty()) return false;
    lo = b.bottom_height + m.delta;
    hi = s.paths.paths[i].top_height(*m.target);
    return true;
}

// Algorithm: one bottom-up pass over the target choosing maximum-weight
// through edges; edge weights precomputed by the simultaneous traversal.
inline SideDecomposition heavy_decomposition(const ShiftMap& m,
                                             const std::vector<TreePoint>& src_img) {
    const OrderedMergeTree& T = *m.target;
    SideDecomposition side;
    side.weights = edge_weights(m, src_img);

    std::vector<int> through(T.size(), -1);
    std::vector<double> arrive_pre(T.size(), kInf);  // branch inf of the path arriving via edge

    std::vector<int> order;  // parents after children
    {
        std::vector<int> stack{T.root()};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            order.push_back(v);
            for (int c : T.children(v)) stack.push_back(c);
        }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int v = *it;
        if (T.is_leaf(v)) {
            arrive_pre[v] = side.weights.min_height[v];
            continue;
        }
        int best = -1;
        for (int c : T.children(v)) {
            if (best < 0 || side.weights.weight[c] > side.weights.weight[best] ||
                (side.weights.weight[c] == side.weights.weight[best] &&
                 arrive_pre[c] < arrive_pre[best]))
                best = c;
        }
        through[v] = best;
        arrive_pre[v] = std::min(arrive_pre[best], side.weights.min_height[v]);
    }

    side.paths = paths_from_through(T, std::move(through));
    side.branches.reserve(side.paths.paths.size());
    for (int i = 0; i < static_cast<int>(side.paths.paths.size()); ++i) {
        Branch b = branch_of_path(m, side.paths.paths[i], src_img);
        b.path_index = i;
        side.branches.push_back(std::move(b));
    }
    return side;
}

inline SideDecomposition heavy_decomposition(const ShiftMap& m) {
    return heavy_decomposition(m, vertex_images(m));
}

struct PathBranchDecomposition {
    SideDecomposition alpha;  // paths in T', branches in T
    SideDecomposition beta;   // paths in T,  branches in T'
};

inline PathBranchDecomposition heavy_path_branch_decomposition(const Interleaving& i) {
    return PathBranchDecomposition{heavy_decomposition(i.alpha), heavy_decomposition(i.beta)};
}

// ---------------------------------------------------------------------------
// Brute-force oracle: every through-edge assignment exactly once.

inline void enumerate_all_decompositions(const OrderedMergeTree& t,
                                         const std::function<void(const PathDecomposition&)>& fn) {
    std::vector<int> internal;
    long long total = 1;
    for (int v = 0; v < t.size(); ++v) {
        if (t.is_leaf(v)) continue;
        internal.push_back(v);
        total *= static_cast<long long>(t.children(v).size());
        if (total > 2'000'000) throw std::invalid_argument("enumerate_all_decompositions: too many assignments");
    }
    if (internal.size() > 12)
        throw std::invalid_argument("enumerate_all_decompositions: more than 12 internal vertices");

    std::vector<size_t> pick(internal.size(), 0);
    while (true) {
        std::vector<int> through(t.size(), -1);
        for (size_t i = 0; i < internal.size(); ++i)
            through[internal[i]] = t.children(internal[i])[pick[i]];
        fn(paths_from_through(t, std::move(through)));
        size_t i = 0;
        for (; i < pick.size(); ++i) {
            if (++pick[i] < t.children(internal[i]).size()) break;
            pick[i] = 0;
        }
        if (i == pick.size()) break;
    }
}

struct DecompositionCost {
    int total_components = 0;
    int max_components_per_path = 0;
};

inline DecompositionCost decomposition_cost(const ShiftMap& m, const PathDecomposition& d,
                                            const std::vector<TreePoint>& src_img) {
    DecompositionCost c;
    for (const Path& p : d.paths) {
        int s = branch_of_path(m, p, src_img).size();
        c.total_components += s;
        c.max_components_per_path = std::max(c.max_components_per_path, s);
    }
    return c;
}

inline DecompositionCost decomposition_cost(const ShiftMap& m, const PathDecomposition& d) {
    return decomposition_cost(m, d, vertex_images(m));
}

// Debug dump: per internal vertex the chosen through edge and all candidate
// weights. Substrate for golden tests.
inline nlohmann::json decomposition_to_json(const SideDecomposition& s) {
    const OrderedMergeTree& t = *s.paths.tree;
    nlohmann::json j;
    nlohmann::json verts = nlohmann::json::object();
    for (int v = 0; v < t.size(); ++v) {
        if (t.is_leaf(v)) continue;
        nlohmann::json e;
        e["through"] = t.name(s.paths.through[v]);
        nlohmann::json cand = nlohmann::json::object();
        for (int c : t.children(v)) cand[t.name(c)] = s.weights.weight[c];
        e["weights"] = cand;
        verts[t.name(v)] = e;
    }
    j["vertices"] = verts;
    nlohmann::json paths = nlohmann::json::array();
    for (const Path& p : s.paths.paths) {
        nlohmann::json pj;
        pj["bottom"] = t.name(p.bottom_leaf);
        pj["top"] = p.top_vertex < 0 ? "inf" : t.name(p.top_vertex);
        paths.push_back(pj);
    }
    j["paths"] = paths;
    return j;
}

}  // namespace parkview
