#pragma once

// Ordered merge trees: rooted trees with scalar heights, strictly increasing
// toward the root, an implicit root edge extending to +infinity, and a total
// leaf order that respects the tree structure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace parkview {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// A point of the tree: (edge, height), where the edge is identified by its
// lower endpoint vertex. The vertex v itself is the point (v, height(v)).
// The root's up edge is unbounded above.
struct TreePoint {
    int edge = -1;
    double height = 0.0;

    friend bool operator==(const TreePoint& a, const TreePoint& b) {
        return a.edge == b.edge && a.height == b.height;
    }
    friend bool operator!=(const TreePoint& a, const TreePoint& b) { return !(a == b); }
};

struct Violation {
    std::string rule;
    std::string detail;
};

class OrderedMergeTree {
public:
    struct Vertex {
        std::string name;
        double height = 0.0;
        std::vector<int> children;  // ordered; order induces the leaf order
        int parent = -1;
        std::optional<std::pair<int, int>> cell;  // grid origin, if built from a field
    };

    OrderedMergeTree() = default;

    // Takes ownership of the vertex list; root is the vertex index with no parent.
    static OrderedMergeTree build(std::vector<Vertex> verts, int root) {
        OrderedMergeTree t;
        t.verts_ = std::move(verts);
        t.root_ = root;
        t.finalize();
        return t;
    }

    int root() const { return root_; }
    int size() const { return static_cast<int>(verts_.size()); }
    const Vertex& vertex(int v) const { return verts_[v]; }
    double height(int v) const { return verts_[v].height; }
    int parent(int v) const { return verts_[v].parent; }
    const std::vector<int>& children(int v) const { return verts_[v].children; }
    bool is_leaf(int v) const { return verts_[v].children.empty(); }
    const std::string& name(int v) const { return verts_[v].name; }

    int vertex_by_name(const std::string& n) const {
        auto it = by_name_.find(n);
        return it == by_name_.end() ? -1 : it->second;
    }

    // Leaves in the order induced by child order (or an explicit override).
    const std::vector<int>& leaf_order() const { return leaf_order_; }
    int num_leaves() const { return static_cast<int>(leaf_order_.size()); }

    // Rank in leaf order of the leftmost leaf below v (v's own rank if leaf).
    int leftmost_leaf_rank(int v) const { return left_rank_[v]; }
    int leaf_rank(int leaf) const { return leaf_pos_[leaf]; }

    // Upper endpoint height of v's up edge (+inf for the root edge).
    double edge_top(int v) const {
        return verts_[v].parent < 0 ? kInf : verts_[verts_[v].parent].height;
    }

    TreePoint point_of(int v) const { return TreePoint{v, verts_[v].height}; }

    bool contains(const TreePoint& p) const {
        if (p.edge < 0 || p.edge >= size()) return false;
        return p.height >= verts_[p.edge].height && p.height < edge_top(p.edge);
    }

    // The unique point at height h on the path from p toward the root.
    TreePoint ancestor_at_height(const TreePoint& p, double h) const {
        if (h < p.height)
            throw std::invalid_argument("ancestor_at_height: h below the query point");
        int v = p.edge;
        for (int k = static_cast<int>(up_.size()) - 1; k >= 0; --k) {
            int a = up_[k][v];
            if (a >= 0 && verts_[a].height <= h) v = a;
        }
        return TreePoint{v, h};
    }

    TreePoint lca(const TreePoint& u, const TreePoint& v) const {
        int a = lca_vertex(u.edge, v.edge);
        if (a == u.edge && a == v.edge) return TreePoint{a, std::max(u.height, v.height)};
        if (a == u.edge) return u;
        if (a == v.edge) return v;
        return point_of(a);
    }

    // All points of the tree at height h, in the <=_h order induced by the
    // leaf order (leftmost descendant leaf).
    std::vector<TreePoint> order_at_height(double h) const {
        std::vector<TreePoint> out;
        for (int v = 0; v < size(); ++v)
            if (verts_[v].height <= h && h < edge_top(v)) out.push_back(TreePoint{v, h});
        std::sort(out.begin(), out.end(), [&](const TreePoint& a, const TreePoint& b) {
            return left_rank_[a.edge] < left_rank_[b.edge];
        });
        return out;
    }

    // Strict order on distinct points at equal height.
    bool before_at_height(const TreePoint& a, const TreePoint& b) const {
        return left_rank_[a.edge] < left_rank_[b.edge];
    }

    std::vector<Violation> validate() const {
        std::vector<Violation> out;
        for (int v = 0; v < size(); ++v) {
            int p = verts_[v].parent;
            if (p >= 0 && !(verts_[p].height > verts_[v].height))
                out.push_back({"strict-increase",
                               "edge " + verts_[v].name + "-" + verts_[p].name +
                                   " does not strictly increase toward the root"});
            if (!verts_[v].children.empty() && verts_[v].children.size() < 2)
                out.push_back({"degree",
                               "internal vertex " + verts_[v].name + " has fewer than 2 children"});
        }
        check_order(out);
        return out;
    }

    // Replaces the leaf order. Used to represent (and detect) orders that are
    // inconsistent with the tree structure; normal construction derives the
    // order from child order and is consistent by construction.
    void override_leaf_order(std::vector<int> order) {
        leaf_order_ = std::move(order);
        index_leaves();
    }

    void set_cell(int v, std::pair<int, int> cell) { verts_[v].cell = cell; }

    // Reorders children in place; recomputes the induced leaf order.
    void reorder_children(int v, std::vector<int> children) {
        verts_[v].children = std::move(children);
        leaf_order_.clear();
        collect_leaves(root_);
        index_leaves();
    }

private:
    std::vector<Vertex> verts_;
    int root_ = -1;
    std::vector<int> leaf_order_;
    std::vector<int> leaf_pos_;   // per vertex: rank if leaf, else -1
    std::vector<int> left_rank_;  // per vertex: rank of leftmost descendant leaf
    std::vector<int> depth_;
    std::vector<std::vector<int>> up_;  // binary lifting
    std::unordered_map<std::string, int> by_name_;

    void finalize() {
        for (int v = 0; v < size(); ++v) verts_[v].parent = -1;
        for (int v = 0; v < size(); ++v)
            for (int c : verts_[v].children) verts_[c].parent = v;
        by_name_.clear();
        for (int v = 0; v < size(); ++v) by_name_[verts_[v].name] = v;
        leaf_order_.clear();
        collect_leaves(root_);
        index_leaves();
        build_lifting();
    }

    void collect_leaves(int v) {
        if (v < 0) return;
        // iterative DFS, left to right
        std::vector<int> stack{v};
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            if (verts_[u].children.empty()) {
                leaf_order_.push_back(u);
            } else {
                for (auto it = verts_[u].children.rbegin(); it != verts_[u].children.rend(); ++it)
                    stack.push_back(*it);
            }
        }
    }

    void index_leaves() {
        leaf_pos_.assign(size(), -1);
        for (int i = 0; i < static_cast<int>(leaf_order_.size()); ++i)
            leaf_pos_[leaf_order_[i]] = i;
        left_rank_.assign(size(), std::numeric_limits<int>::max());
        // bottom-up: leftmost descendant leaf rank
        std::vector<int> order = topo_down();
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            int v = *it;
            if (verts_[v].children.empty()) {
                left_rank_[v] = leaf_pos_[v];
            } else {
                for (int c : verts_[v].children)
                    left_rank_[v] = std::min(left_rank_[v], left_rank_[c]);
            }
        }
    }

    std::vector<int> topo_down() const {
        std::vector<int> order;
        order.reserve(size());
        if (root_ < 0) return order;
        std::vector<int> stack{root_};
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            order.push_back(u);
            for (int c : verts_[u].children) stack.push_back(c);
        }
        return order;
    }

    void build_lifting() {
        depth_.assign(size(), 0);
        for (int v : topo_down())
            depth_[v] = verts_[v].parent < 0 ? 0 : depth_[verts_[v].parent] + 1;
        int levels = 1;
        while ((1 << levels) < std::max(size(), 2)) ++levels;
        up_.assign(levels, std::vector<int>(size(), -1));
        for (int v = 0; v < size(); ++v) up_[0][v] = verts_[v].parent;
        for (int k = 1; k < levels; ++k)
            for (int v = 0; v < size(); ++v)
                up_[k][v] = up_[k - 1][v] < 0 ? -1 : up_[k - 1][up_[k - 1][v]];
    }

    int lca_vertex(int a, int b) const {
        if (depth_[a] < depth_[b]) std::swap(a, b);
        int diff = depth_[a] - depth_[b];
        for (int k = 0; diff; ++k, diff >>= 1)
            if (diff & 1) a = up_[k][a];
        if (a == b) return a;
        for (int k = static_cast<int>(up_.size()) - 1; k >= 0; --k)
            if (up_[k][a] != up_[k][b]) {
                a = up_[k][a];
                b = up_[k][b];
            }
        return up_[0][a];
    }

    // The order condition (for leaves x1 <= x2 <= x3, x2 lies in the subtree of
    // lca(x1, x3)) holds iff every subtree's leaf set is a contiguous block of
    // the leaf order.
    void check_order(std::vector<Violation>& out) const {
        std::vector<int> lo(size(), std::numeric_limits<int>::max());
        std::vector<int> hi(size(), -1);
        std::vector<int> cnt(size(), 0);
        std::vector<int> order = topo_down();
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            int v = *it;
            if (verts_[v].children.empty()) {
                if (leaf_pos_[v] < 0) {
                    out.push_back({"order", "leaf " + verts_[v].name + " missing from leaf order"});
                    return;
                }
                lo[v] = hi[v] = leaf_pos_[v];
                cnt[v] = 1;
            } else {
                for (int c : verts_[v].children) {
                    lo[v] = std::min(lo[v], lo[c]);
                    hi[v] = std::max(hi[v], hi[c]);
                    cnt[v] += cnt[c];
                }
            }
            if (hi[v] - lo[v] + 1 != cnt[v]) {
                // name a witnessing triple: two leaves of the subtree around a gap leaf
                std::vector<bool> inside(leaf_order_.size(), false);
                mark_leaves(v, inside);
                int gap = -1;
                for (int i = lo[v]; i <= hi[v]; ++i)
                    if (!inside[i]) { gap = i; break; }
                int before = gap, after = gap;
                while (!inside[before]) --before;
                while (!inside[after]) ++after;
                out.push_back({"order",
                               "leaf triple (" + verts_[leaf_order_[before]].name + ", " +
                                   verts_[leaf_order_[gap]].name + ", " +
                                   verts_[leaf_order_[after]].name + ") violates the order condition at " +
                                   verts_[v].name});
                return;
            }
        }
    }

    void mark_leaves(int v, std::vector<bool>& inside) const {
        std::vector<int> stack{v};
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            if (verts_[u].children.empty()) {
                if (leaf_pos_[u] >= 0) inside[leaf_pos_[u]] = true;
            } else {
                for (int c : verts_[u].children) stack.push_back(c);
            }
        }
    }
};

}  // namespace parkview
