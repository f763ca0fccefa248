#pragma once

// Monotone delta-shift maps and delta-interleavings between ordered merge
// trees, plus the preimage machinery (branches B_e and B_pi) that drives the
// path-branch decompositions.
//
// A shift map is stored by its leaf images only; the continuous map follows by
// taking ancestors: alpha(x) = ancestor_at_height(img(any leaf below x),
// f(x) + delta). Well-definedness of that extension is one of the validated
// axioms.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "merge_tree.hpp"
#include "tree_io.hpp"

namespace parkview {

struct ShiftMap {
    const OrderedMergeTree* source = nullptr;
    const OrderedMergeTree* target = nullptr;
    double delta = 0.0;
    std::vector<TreePoint> leaf_image;  // indexed by source vertex; valid for leaves

    TreePoint evaluate(const TreePoint& x) const {
        int leaf = source->leaf_order()[source->leftmost_leaf_rank(x.edge)];
        return target->ancestor_at_height(leaf_image[leaf], x.height + delta);
    }
};

struct Interleaving {
    ShiftMap alpha;  // T -> T'
    ShiftMap beta;   // T' -> T
};

inline ShiftMap identity_shift_map(const OrderedMergeTree& t) {
    ShiftMap m{&t, &t, 0.0, std::vector<TreePoint>(t.size())};
    for (int leaf : t.leaf_order()) m.leaf_image[leaf] = t.point_of(leaf);
    return m;
}

inline Interleaving identity_interleaving(const OrderedMergeTree& t) {
    return Interleaving{identity_shift_map(t), identity_shift_map(t)};
}

// ---------------------------------------------------------------------------
// Paths and branches

// A height-monotone path of a path decomposition: starts at a leaf, open at
// its top. Edges are listed bottom-up by their lower endpoint; top_vertex is
// the vertex where the path ends, or -1 for the one path ending at infinity.
struct Path {
    int bottom_leaf = -1;
    std::vector<int> edges;
    int top_vertex = -1;

    double top_height(const OrderedMergeTree& t) const {
        return top_vertex < 0 ? kInf : t.height(top_vertex);
    }
};

struct Interval {
    double lo = 0.0, hi = 0.0;  // half-open [lo, hi); lo_open makes it (lo, hi)
    bool lo_open = false;
};

struct BranchComponent {
    std::vector<std::pair<int, Interval>> edge_spans;  // source edge -> heights
    double bottom = kInf;
    double top = -kInf;
};

struct Branch {
    int path_index = -1;  // index of pi in the target's path decomposition
    std::vector<BranchComponent> components;
    double top_height = -kInf;    // f(top of pi) - delta; +inf for the root path
    double bottom_height = kInf;  // lowest point of B_pi

    bool empty() const { return components.empty(); }
    int size() const { return static_cast<int>(components.size()); }
};

// A contiguous height-monotone piece of the target tree, as a preimage query:
// the point set { (w, t) : member[w], bottom (<|<=) t < top }.
struct TargetSegment {
    std::vector<char> member;
    double bottom = -kInf;
    bool bottom_closed = true;
    double top = kInf;
};

inline TargetSegment segment_of_path(const OrderedMergeTree& target, const Path& pi) {
    TargetSegment s;
    s.member.assign(target.size(), 0);
    for (int e : pi.edges) s.member[e] = 1;
    s.bottom = target.height(pi.bottom_leaf);
    s.bottom_closed = true;
    s.top = pi.top_height(target);
    return s;
}

inline TargetSegment segment_of_edge_interior(const OrderedMergeTree& target, int edge) {
    TargetSegment s;
    s.member.assign(target.size(), 0);
    s.member[edge] = 1;
    s.bottom = target.height(edge);
    s.bottom_closed = false;
    s.top = target.edge_top(edge);
    return s;
}

namespace detail {

struct DisjointSet {
    std::vector<int> p;
    explicit DisjointSet(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace detail

// Images of every source vertex under the continuous extension of m.
inline std::vector<TreePoint> vertex_images(const ShiftMap& m) {
    std::vector<TreePoint> img(m.source->size());
    for (int v = 0; v < m.source->size(); ++v) img[v] = m.evaluate(m.source->point_of(v));
    return img;
}

// Connected components of the preimage of a target segment. Per source edge
// the preimage is a single height interval; intervals of edges meeting at a
// source vertex v are glued exactly when v itself maps into the segment.
inline std::vector<BranchComponent> branch_components(const ShiftMap& m, const TargetSegment& seg,
                                                      const std::vector<TreePoint>& src_img) {
    const OrderedMergeTree& S = *m.source;
    const OrderedMergeTree& T = *m.target;
    const double d = m.delta;

    std::vector<int> piece_of(S.size(), -1);
    std::vector<int> piece_edge;
    std::vector<Interval> piece_iv;

    for (int u = 0; u < S.size(); ++u) {
        double src_lo = S.height(u);
        double src_hi = S.edge_top(u);  // +inf on the root edge
        // quick rejects on the image height range [src_lo + d, src_hi + d)
        if (src_lo + d >= seg.top) continue;
        if (src_hi + d <= seg.bottom) continue;
        // entry height of the image chain into the segment's edge set
        double entry = kInf;
        bool entry_at_vertex = false;
        int cur = src_img[u].edge;
        if (seg.member[cur]) {
            entry = src_img[u].height;
        } else {
            cur = T.parent(cur);
            while (cur >= 0) {
                if (T.height(cur) >= seg.top) break;
                if (seg.member[cur]) {
                    entry = T.height(cur);
                    entry_at_vertex = true;
                    break;
                }
                cur = T.parent(cur);
            }
        }
        if (entry == kInf) continue;

        // lower threshold in target heights and whether it is inclusive
        double lim = std::max(entry, seg.bottom);
        bool lim_closed = (entry > seg.bottom) ? true : (entry < seg.bottom ? seg.bottom_closed
                                                                            : (entry_at_vertex || seg.bottom_closed));
        Interval iv;
        if (lim <= src_lo + d) {
            iv.lo = src_lo;  // bound by the source vertex itself (exact)
            iv.lo_open = (lim == src_lo + d) && !lim_closed;
        } else {
            iv.lo = std::max(lim - d, src_lo);
            iv.lo_open = !lim_closed;
        }
        iv.hi = (seg.top >= src_hi + d) ? src_hi : seg.top - d;
        if (!(iv.lo < iv.hi)) continue;

        piece_of[u] = static_cast<int>(piece_edge.size());
        piece_edge.push_back(u);
        piece_iv.push_back(iv);
    }

    detail::DisjointSet ds(static_cast<int>(piece_edge.size()));
    for (int v = 0; v < S.size(); ++v) {
        int pv = piece_of[v];
        if (pv < 0) continue;
        // v itself is in the preimage iff its up-edge piece starts closed at f(v)
        if (piece_iv[pv].lo_open || piece_iv[pv].lo != S.height(v)) continue;
        for (int c : S.children(v)) {
            int pc = piece_of[c];
            if (pc >= 0 && piece_iv[pc].hi == S.height(v)) ds.unite(pc, pv);
        }
    }

    std::vector<int> comp_id(piece_edge.size(), -1);
    std::vector<BranchComponent> comps;
    for (int i = 0; i < static_cast<int>(piece_edge.size()); ++i) {
        int r = ds.find(i);
        if (comp_id[r] < 0) {
            comp_id[r] = static_cast<int>(comps.size());
            comps.emplace_back();
        }
        BranchComponent& c = comps[comp_id[r]];
        c.edge_spans.emplace_back(piece_edge[i], piece_iv[i]);
        c.bottom = std::min(c.bottom, piece_iv[i].lo);
        c.top = std::max(c.top, piece_iv[i].hi);
    }
    // left-to-right by leftmost source leaf
    std::sort(comps.begin(), comps.end(), [&](const BranchComponent& a, const BranchComponent& b) {
        int ra = S.size(), rb = S.size();
        for (const auto& [e, iv] : a.edge_spans) ra = std::min(ra, S.leftmost_leaf_rank(e));
        for (const auto& [e, iv] : b.edge_spans) rb = std::min(rb, S.leftmost_leaf_rank(e));
        return ra < rb;
    });
    for (auto& c : comps)
        std::sort(c.edge_spans.begin(), c.edge_spans.end(),
                  [&](const auto& a, const auto& b) { return a.first < b.first; });
    return comps;
}

// B_e for the interior of a target edge; .size() is the weight of e.
inline Branch branch_of_edge(const ShiftMap& m, int target_edge) {
    auto img = vertex_images(m);
    Branch b;
    b.components = branch_components(m, segment_of_edge_interior(*m.target, target_edge), img);
    b.top_height = m.target->edge_top(target_edge) - m.delta;
    for (const auto& c : b.components) b.bottom_height = std::min(b.bottom_height, c.bottom);
    return b;
}

// B_pi for a path of a decomposition of the target. The active path interval
// on pi is [bottom_height + delta, f(top of pi)), empty branch meaning none.
inline Branch branch_of_path(const ShiftMap& m, const Path& pi,
                             const std::vector<TreePoint>& src_img) {
    Branch b;
    b.components = branch_components(m, segment_of_path(*m.target, pi), src_img);
    b.top_height = pi.top_height(*m.target) - m.delta;
    for (const auto& c : b.components) b.bottom_height = std::min(b.bottom_height, c.bottom);
    return b;
}

inline Branch branch_of_path(const ShiftMap& m, const Path& pi) {
    return branch_of_path(m, pi, vertex_images(m));
}

// ---------------------------------------------------------------------------
// Edge weights, all edges at once

struct EdgeWeights {
    std::vector<int> weight;        // per target edge (lower endpoint)
    std::vector<double> min_height; // inf of B_e in source heights; +inf if empty
};

// One simultaneous leaf-to-root traversal of both trees. Counts, per target
// edge, the preimage intervals contributed by each source edge; gluings at
// source vertices whose image lies in an edge interior are subtracted.
inline EdgeWeights edge_weights(const ShiftMap& m, const std::vector<TreePoint>& src_img) {
    const OrderedMergeTree& S = *m.source;
    const OrderedMergeTree& T = *m.target;
    const double d = m.delta;

    EdgeWeights w;
    w.weight.assign(T.size(), 0);
    w.min_height.assign(T.size(), kInf);
    std::vector<char> visited(S.size(), 0);

    for (int leaf : S.leaf_order()) {
        int u = leaf;
        TreePoint p = m.leaf_image[leaf];
        while (u >= 0 && !visited[u]) {
            visited[u] = 1;
            double t_lo = S.height(u) + d;
            double t_hi = S.edge_top(u) + d;  // +inf on the source root edge
            int te = p.edge;
            while (true) {
                double te_top = T.edge_top(te);
                double span_lo = std::max(t_lo, T.height(te));
                double span_hi = std::min(t_hi, te_top);
                if (span_hi > span_lo) {
                    ++w.weight[te];
                    w.min_height[te] = std::min(w.min_height[te], span_lo - d);
                }
                if (te_top < t_hi)
                    te = T.parent(te);
                else
                    break;
            }
            u = S.parent(u);
            if (u >= 0) {
                while (T.edge_top(te) <= S.height(u) + d) te = T.parent(te);
                p = TreePoint{te, S.height(u) + d};
            }
        }
    }
    for (int v = 0; v < S.size(); ++v) {
        const TreePoint& iv = src_img[v];
        if (iv.height > T.height(iv.edge))  // strictly inside an edge interior
            w.weight[iv.edge] -= static_cast<int>(S.children(v).size());
    }
    return w;
}

inline EdgeWeights edge_weights(const ShiftMap& m) { return edge_weights(m, vertex_images(m)); }

// ---------------------------------------------------------------------------
// Validation

inline std::vector<Violation> validate_shift_map(const ShiftMap& m) {
    std::vector<Violation> out;
    const OrderedMergeTree& S = *m.source;
    const OrderedMergeTree& T = *m.target;
    const double d = m.delta;

    if (!(d >= 0)) {
        out.push_back({"delta", "delta must be non-negative"});
        return out;
    }

    // exact-delta leaf images
    for (int leaf : S.leaf_order()) {
        const TreePoint& img = m.leaf_image[leaf];
        if (img.edge < 0 || img.edge >= T.size() || !T.contains(img)) {
            out.push_back({"leaf-image", "image of leaf " + S.name(leaf) + " is not a point of the target"});
            continue;
        }
        if (img.height != S.height(leaf) + d)
            out.push_back({"exact-delta",
                           "image of leaf " + S.name(leaf) + " is not exactly delta higher"});
    }
    if (!out.empty()) return out;

    auto img = vertex_images(m);

    // well-definedness of the continuous extension at internal vertices
    for (int v = 0; v < S.size(); ++v) {
        const auto& ch = S.children(v);
        if (ch.size() < 2) continue;
        double h = S.height(v) + d;
        int rep0 = S.leaf_order()[S.leftmost_leaf_rank(ch[0])];
        TreePoint a0 = T.ancestor_at_height(m.leaf_image[rep0], h);
        for (size_t i = 1; i < ch.size(); ++i) {
            int rep = S.leaf_order()[S.leftmost_leaf_rank(ch[i])];
            TreePoint ai = T.ancestor_at_height(m.leaf_image[rep], h);
            if (!(ai == a0)) {
                out.push_back({"well-defined",
                               "leaf images disagree above vertex " + S.name(v)});
                break;
            }
        }
    }

    // monotonicity, checked at all critical heights and midpoints between them
    std::vector<double> hs;
    for (int v = 0; v < S.size(); ++v) hs.push_back(S.height(v));
    for (int v = 0; v < T.size(); ++v) hs.push_back(T.height(v) - d);
    std::sort(hs.begin(), hs.end());
    hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
    std::vector<double> sample = hs;
    for (size_t i = 0; i + 1 < hs.size(); ++i) sample.push_back(0.5 * (hs[i] + hs[i + 1]));
    std::sort(sample.begin(), sample.end());

    // source vertices in global left-to-right order, for order_at_height scans
    std::vector<int> by_rank(S.size());
    std::iota(by_rank.begin(), by_rank.end(), 0);
    std::sort(by_rank.begin(), by_rank.end(),
              [&](int a, int b) { return S.leftmost_leaf_rank(a) < S.leftmost_leaf_rank(b); });

    for (double h : sample) {
        int prev_rank = -1;
        int prev_edge = -1;
        for (int v : by_rank) {
            if (!(S.height(v) <= h && h < S.edge_top(v))) continue;
            int rep = S.leaf_order()[S.leftmost_leaf_rank(v)];
            TreePoint image = T.ancestor_at_height(m.leaf_image[rep], h + d);
            int rank = T.leftmost_leaf_rank(image.edge);
            if (rank < prev_rank) {
                out.push_back({"monotone",
                               "order violated at height " + std::to_string(h) + " between edges " +
                                   S.name(prev_edge) + " and " + S.name(v)});
                break;
            }
            prev_rank = rank;
            prev_edge = v;
        }
        if (!out.empty() && out.back().rule == "monotone" && out.size() > 8) break;
    }
    return out;
}

// Witness set: all vertices plus edge midpoints (the maps are height-linear
// between critical heights, so violations show up at or between them).
inline std::vector<TreePoint> round_trip_witnesses(const OrderedMergeTree& t) {
    std::vector<TreePoint> w;
    for (int v = 0; v < t.size(); ++v) {
        w.push_back(t.point_of(v));
        double top = t.edge_top(v);
        double mid = std::isinf(top) ? t.height(v) + 1.0 : 0.5 * (t.height(v) + top);
        if (mid > t.height(v)) w.push_back(TreePoint{v, mid});
    }
    return w;
}

inline std::vector<Violation> validate_interleaving(const Interleaving& i) {
    std::vector<Violation> out;
    if (i.alpha.delta != i.beta.delta)
        out.push_back({"delta", "alpha and beta have different deltas"});
    const double d = i.alpha.delta;

    auto check_side = [&](const ShiftMap& fwd, const ShiftMap& bwd, const char* tag) {
        const OrderedMergeTree& S = *fwd.source;
        for (const TreePoint& x : round_trip_witnesses(S)) {
            TreePoint round = bwd.evaluate(fwd.evaluate(x));
            TreePoint expect = S.ancestor_at_height(x, (x.height + d) + d);
            if (!(round == expect)) {
                out.push_back({"round-trip",
                               std::string(tag) + ": composition at (" + S.name(x.edge) + ", " +
                                   std::to_string(x.height) + ") is not the ancestor 2*delta higher"});
                if (out.size() > 8) return;
            }
        }
    };
    check_side(i.alpha, i.beta, "beta(alpha(x))");
    check_side(i.beta, i.alpha, "alpha(beta(y))");
    return out;
}

// ---------------------------------------------------------------------------
// Interleaving JSON:
//   {"delta": d, "alpha": {"<leafId>": {"edge": "<id>", "height": h}}, "beta": {...}}

inline Interleaving read_interleaving(const std::string& text, const OrderedMergeTree& a,
                                      const OrderedMergeTree& b) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("interleaving JSON: ") + e.what());
    }
    if (!j.contains("delta") || !j.contains("alpha") || !j.contains("beta"))
        throw ParseError("interleaving JSON: missing delta, alpha, or beta");
    double delta = j.at("delta").get<double>();

    auto read_map = [&](const nlohmann::json& mj, const OrderedMergeTree& src,
                        const OrderedMergeTree& tgt, const char* tag) {
        ShiftMap m{&src, &tgt, delta, std::vector<TreePoint>(src.size())};
        for (int leaf : src.leaf_order()) {
            if (!mj.contains(src.name(leaf)))
                throw ParseError("interleaving JSON: " + std::string(tag) + " misses leaf " +
                                 src.name(leaf));
            const auto& e = mj.at(src.name(leaf));
            int edge = tgt.vertex_by_name(e.at("edge").get<std::string>());
            if (edge < 0)
                throw ParseError("interleaving JSON: unknown edge in image of " + src.name(leaf));
            m.leaf_image[leaf] = TreePoint{edge, e.at("height").get<double>()};
        }
        return m;
    };
    Interleaving i;
    i.alpha = read_map(j.at("alpha"), a, b, "alpha");
    i.beta = read_map(j.at("beta"), b, a, "beta");
    return i;
}

inline std::string write_interleaving(const Interleaving& i) {
    nlohmann::json j;
    j["delta"] = i.alpha.delta;
    auto dump_map = [](const ShiftMap& m) {
        nlohmann::json mj = nlohmann::json::object();
        for (int leaf : m.source->leaf_order()) {
            nlohmann::json e;
            e["edge"] = m.target->name(m.leaf_image[leaf].edge);
            e["height"] = m.leaf_image[leaf].height;
            mj[m.source->name(leaf)] = e;
        }
        return mj;
    };
    j["alpha"] = dump_map(i.alpha);
    j["beta"] = dump_map(i.beta);
    return j.dump(2) + "\n";
}

}  // namespace parkview
