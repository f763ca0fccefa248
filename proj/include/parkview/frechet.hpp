#pragma once

// In-order tours of ordered merge trees and the continuous Fréchet distance
// between the induced 1D polylines: binary search over delta with a
// free-space reachability decision, plus extraction of one monotone matching.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "merge_tree.hpp"

namespace parkview {

struct EulerTourCurve {
    std::vector<double> heights;
    std::vector<int> vertices;  // breakpoint -> tree vertex
    const OrderedMergeTree* tree = nullptr;

    int segments() const { return static_cast<int>(heights.size()) - 1; }
};

// Starts and ends at the root; between consecutive children the tour rises
// back to the internal vertex. k leaves give 2k+1 breakpoints, leaves at the
// odd ones.
inline EulerTourCurve euler_tour(const OrderedMergeTree& t) {
    EulerTourCurve c;
    c.tree = &t;
    auto emit = [&](int v) {
        c.heights.push_back(t.height(v));
        c.vertices.push_back(v);
    };
    emit(t.root());
    // in-order: (child, vertex, child, vertex, ..., child)
    struct Frame {
        int v;
        size_t next = 0;
    };
    std::vector<Frame> stack{{t.root()}};
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (t.is_leaf(f.v)) {
            emit(f.v);
            stack.pop_back();
            continue;
        }
        if (f.next == t.children(f.v).size()) {
            stack.pop_back();
            continue;
        }
        if (f.next > 0) emit(f.v);
        int child = t.children(f.v)[f.next++];
        stack.push_back({child});
    }
    emit(t.root());
    return c;
}

// The leaf supporting tour parameter s: every tour segment has a leaf
// endpoint, and the curve point at s lies on that leaf's root path.
inline int tour_leaf_at(const EulerTourCurve& c, double s) {
    const OrderedMergeTree& t = *c.tree;
    int n = c.segments();
    if (n == 0) return c.vertices[0];
    s = std::clamp(s, 0.0, static_cast<double>(n));
    int i = std::min(static_cast<int>(s), n - 1);
    int leaf = t.is_leaf(c.vertices[i]) ? c.vertices[i] : c.vertices[i + 1];
    if (!t.is_leaf(leaf)) leaf = c.vertices[i];  // degenerate tours
    return leaf;
}

// Tree point at tour parameter s in [0, segments()].
inline TreePoint tour_point_at(const EulerTourCurve& c, double s) {
    const OrderedMergeTree& t = *c.tree;
    int n = c.segments();
    if (n == 0) return t.point_of(c.vertices[0]);
    s = std::clamp(s, 0.0, static_cast<double>(n));
    int i = std::min(static_cast<int>(s), n - 1);
    double u = s - i;
    double h = c.heights[i] + u * (c.heights[i + 1] - c.heights[i]);
    int leaf = tour_leaf_at(c, s);
    h = std::max(h, t.height(leaf));  // guard lerp rounding below the leaf
    return t.ancestor_at_height(t.point_of(leaf), h);
}

namespace detail_frechet {

struct Iv {
    double lo = 1, hi = 0;  // empty by default
    bool empty() const { return lo > hi; }
};

// Parameters t of segment a->b with |lerp(a,b,t) - p| <= delta, within [0,1].
inline Iv free_iv(double a, double b, double p, double delta) {
    Iv iv;
    if (a == b) {
        if (std::abs(a - p) <= delta) {
            iv.lo = 0;
            iv.hi = 1;
        }
        return iv;
    }
    double t1 = (p - delta - a) / (b - a);
    double t2 = (p + delta - a) / (b - a);
    iv.lo = std::max(std::min(t1, t2), 0.0);
    iv.hi = std::min(std::max(t1, t2), 1.0);
    return iv;
}

}  // namespace detail_frechet

inline bool frechet_decision(const std::vector<double>& P, const std::vector<double>& Q,
                             double delta) {
    using detail_frechet::Iv;
    using detail_frechet::free_iv;
    int n = static_cast<int>(P.size()) - 1;
    int m = static_cast<int>(Q.size()) - 1;
    if (std::abs(P.front() - Q.front()) > delta || std::abs(P.back() - Q.back()) > delta)
        return false;
    if (n == 0 || m == 0) {
        for (double p : P)
            for (double q : Q)
                if (std::abs(p - q) > delta) return false;
        return true;
    }

    std::vector<Iv> LR(m);  // reachable left boundary of the current cell column
    {
        double reach = 0;
        bool blocked = false;
        for (int j = 0; j < m; ++j) {
            Iv lf = free_iv(Q[j], Q[j + 1], P[0], delta);
            if (!blocked && !lf.empty() && j + lf.lo <= reach) {
                LR[j] = lf;
                reach = j + lf.hi;
                if (lf.hi < 1) blocked = true;
            } else {
                blocked = true;
            }
        }
    }
    bool bottom_blocked = false;
    double bottom_reach = 0;
    Iv last_top;
    for (int i = 0; i < n; ++i) {
        Iv BR;
        {
            Iv bf = free_iv(P[i], P[i + 1], Q[0], delta);
            if (!bottom_blocked && !bf.empty() && i + bf.lo <= bottom_reach) {
                BR = bf;
                bottom_reach = i + bf.hi;
                if (bf.hi < 1) bottom_blocked = true;
            } else {
                bottom_blocked = true;
            }
        }
        for (int j = 0; j < m; ++j) {
            Iv RF = free_iv(Q[j], Q[j + 1], P[i + 1], delta);
            Iv TF = free_iv(P[i], P[i + 1], Q[j + 1], delta);
            Iv RR, TR;
            if (!BR.empty())
                RR = RF;
            else if (!LR[j].empty()) {
                RR = RF;
                RR.lo = std::max(RR.lo, LR[j].lo);
            }
            if (!LR[j].empty())
                TR = TF;
            else if (!BR.empty()) {
                TR = TF;
                TR.lo = std::max(TR.lo, BR.lo);
            }
            LR[j] = RR;
            BR = TR;
        }
        last_top = BR;
    }
    return (!LR[m - 1].empty() && LR[m - 1].hi >= 1.0) ||
           (!last_top.empty() && last_top.hi >= 1.0);
}

// Smallest delta for which the decision holds, to absolute tolerance 1e-9.
// Returns a feasible value (the upper end of the final bracket); identical
// curves give exactly 0 because the lower bound is tested first.
inline double frechet_delta(const std::vector<double>& P, const std::vector<double>& Q) {
    if (P.empty() || Q.empty()) throw std::invalid_argument("frechet_delta: empty curve");
    double lo = std::max(std::abs(P.front() - Q.front()), std::abs(P.back() - Q.back()));
    if (frechet_decision(P, Q, lo)) return lo;
    double pmin = *std::min_element(P.begin(), P.end());
    double pmax = *std::max_element(P.begin(), P.end());
    double qmin = *std::min_element(Q.begin(), Q.end());
    double qmax = *std::max_element(Q.begin(), Q.end());
    double hi = std::max(std::abs(pmax - qmin), std::abs(qmax - pmin));
    for (int it = 0; it < 200 && hi - lo > 1e-9; ++it) {
        double mid = lo + 0.5 * (hi - lo);
        if (frechet_decision(P, Q, mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

inline double frechet_delta(const EulerTourCurve& a, const EulerTourCurve& b) {
    return frechet_delta(a.heights, b.heights);
}

// One monotone matching at a feasible delta: a polyline of (s, t) parameter
// pairs from (0,0) to (n,m), staying within the free space.
inline std::vector<std::pair<double, double>> frechet_matching(const std::vector<double>& P,
                                                               const std::vector<double>& Q,
                                                               double delta) {
    using detail_frechet::Iv;
    using detail_frechet::free_iv;
    int n = static_cast<int>(P.size()) - 1;
    int m = static_cast<int>(Q.size()) - 1;
    if (!frechet_decision(P, Q, delta))
        throw std::invalid_argument("frechet_matching: delta below the Frechet distance");
    if (n == 0 || m == 0)
        return {{0.0, 0.0}, {static_cast<double>(n), static_cast<double>(m)}};

    // full reachability tables, same recurrences as the decision
    std::vector<Iv> LR(static_cast<size_t>(n + 1) * m);   // boundary x=i, cell row j
    std::vector<Iv> BR(static_cast<size_t>(n) * (m + 1));  // cell col i, boundary y=j
    auto lr = [&](int i, int j) -> Iv& { return LR[static_cast<size_t>(i) * m + j]; };
    auto br = [&](int i, int j) -> Iv& { return BR[static_cast<size_t>(i) * (m + 1) + j]; };

    {
        double reach = 0;
        bool blocked = false;
        for (int j = 0; j < m; ++j) {
            Iv lf = free_iv(Q[j], Q[j + 1], P[0], delta);
            if (!blocked && !lf.empty() && j + lf.lo <= reach) {
                lr(0, j) = lf;
                reach = j + lf.hi;
                if (lf.hi < 1) blocked = true;
            } else {
                blocked = true;
            }
        }
    }
    {
        double reach = 0;
        bool blocked = false;
        for (int i = 0; i < n; ++i) {
            Iv bf = free_iv(P[i], P[i + 1], Q[0], delta);
            if (!blocked && !bf.empty() && i + bf.lo <= reach) {
                br(i, 0) = bf;
                reach = i + bf.hi;
                if (bf.hi < 1) blocked = true;
            } else {
                blocked = true;
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            Iv RF = free_iv(Q[j], Q[j + 1], P[i + 1], delta);
            Iv TF = free_iv(P[i], P[i + 1], Q[j + 1], delta);
            Iv RR, TR;
            if (!br(i, j).empty())
                RR = RF;
            else if (!lr(i, j).empty()) {
                RR = RF;
                RR.lo = std::max(RR.lo, lr(i, j).lo);
            }
            if (!lr(i, j).empty())
                TR = TF;
            else if (!br(i, j).empty()) {
                TR = TF;
                TR.lo = std::max(TR.lo, br(i, j).lo);
            }
            lr(i + 1, j) = RR;
            br(i, j + 1) = TR;
        }
    }

    std::vector<std::pair<double, double>> rev;
    double x = n, y = m;
    rev.push_back({x, y});
    int i = n - 1, j = m - 1;
    while (i >= 0 && j >= 0) {
        const Iv& b = br(i, j);
        const Iv& l = lr(i, j);
        if (!b.empty() && x >= i + b.lo - 1e-12) {
            x = i + b.lo;
            y = j;
            --j;
        } else if (!l.empty() && y >= j + l.lo - 1e-12) {
            x = i;
            y = j + l.lo;
            --i;
        } else {
            throw std::logic_error("frechet_matching: dead end in reachable free space");
        }
        rev.push_back({x, y});
    }
    if (x != 0 || y != 0) rev.push_back({0.0, 0.0});
    std::reverse(rev.begin(), rev.end());
    std::vector<std::pair<double, double>> out;
    for (const auto& p : rev)
        if (out.empty() || out.back() != p) out.push_back(p);
    return out;
}

// The lowest t matched to parameter s along a monotone matching polyline.
inline double matched_param(const std::vector<std::pair<double, double>>& matching, double s) {
    for (size_t k = 0; k + 1 < matching.size(); ++k) {
        auto [x0, y0] = matching[k];
        auto [x1, y1] = matching[k + 1];
        if (s < x0 - 1e-12 || s > x1 + 1e-12) continue;
        if (x1 == x0) return y0;
        double u = std::clamp((s - x0) / (x1 - x0), 0.0, 1.0);
        return y0 + u * (y1 - y0);
    }
    return matching.back().second;
}

}  // namespace parkview
