#pragma once

// End-to-end comparison pipeline: scalar fields to simplified ordered merge
// trees, in-order tours, a Frechet matching between the tours, and an
// interleaving read off the matching. The constructed interleaving is gated
// by the validators; a construction that fails them is an error.

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "decomposition.hpp"
#include "field.hpp"
#include "frechet.hpp"
#include "hilbert.hpp"
#include "interleaving.hpp"
#include "layout.hpp"
#include "merge_tree.hpp"
#include "render.hpp"
#include "tree_io.hpp"

namespace parkview {

// Shift maps from a monotone matching: each leaf's tour parameter is matched
// to a parameter on the other tour, whose tree point is lifted to the leaf's
// height plus delta. Requires delta >= the Frechet distance of the tours.
inline Interleaving interleaving_from_matching(
    const EulerTourCurve& ca, const EulerTourCurve& cb,
    const std::vector<std::pair<double, double>>& matching, double delta) {
    const OrderedMergeTree& A = *ca.tree;
    const OrderedMergeTree& B = *cb.tree;

    std::vector<std::pair<double, double>> swapped;
    for (const auto& [s, t] : matching) swapped.push_back({t, s});

    auto build = [&](const EulerTourCurve& src, const EulerTourCurve& dst,
                     const std::vector<std::pair<double, double>>& match) {
        ShiftMap m;
        m.source = src.tree;
        m.target = dst.tree;
        m.delta = delta;
        m.leaf_image.assign(src.tree->size(), TreePoint{});
        for (int i = 0; i < static_cast<int>(src.vertices.size()); ++i) {
            int v = src.vertices[i];
            if (!src.tree->is_leaf(v) || m.leaf_image[v].edge >= 0) continue;
            double t = matched_param(match, static_cast<double>(i));
            int leaf = tour_leaf_at(dst, t);
            double h = src.tree->height(v) + delta;
            if (dst.tree->height(leaf) > h)
                throw ValidationError(std::vector<Violation>{
                    {"matching", "matched point lies above the shifted leaf height for " +
                                     src.tree->name(v)}});
            m.leaf_image[v] = dst.tree->ancestor_at_height(dst.tree->point_of(leaf), h);
        }
        return m;
    };

    Interleaving il{build(ca, cb, matching), build(cb, ca, swapped)};

    std::vector<Violation> viol = validate_shift_map(il.alpha);
    for (Violation& v : validate_shift_map(il.beta)) viol.push_back(std::move(v));
    if (viol.empty())
        for (Violation& v : validate_interleaving(il)) viol.push_back(std::move(v));
    if (!viol.empty()) throw ValidationError(std::move(viol));
    (void)A;
    (void)B;
    return il;
}

// Owns everything the interleaving and scene point into; not movable.
struct CompareResult {
    OrderedMergeTree tree_a, tree_b;
    EulerTourCurve tour_a, tour_b;
    double frechet = 0, delta = 0;
    Interleaving interleaving;
    PathBranchDecomposition decomposition;
    Scene scene;
    std::string svg;
    nlohmann::json stats;

    CompareResult() = default;
    CompareResult(const CompareResult&) = delete;
    CompareResult& operator=(const CompareResult&) = delete;
};

inline void run_compare(const ScalarField2D& fa, const ScalarField2D& fb, double persistence,
                        int connectivity, const LayoutConfig& lcfg, const RenderConfig& rcfg,
                        CompareResult& out) {
    out.tree_a = order_leaves(simplify(merge_tree_from_field(fa, connectivity), persistence), fa);
    out.tree_b = order_leaves(simplify(merge_tree_from_field(fb, connectivity), persistence), fb);
    {
        std::vector<Violation> v = out.tree_a.validate();
        for (Violation& w : out.tree_b.validate()) v.push_back(std::move(w));
        if (!v.empty()) throw ValidationError(std::move(v));
    }
    out.tour_a = euler_tour(out.tree_a);
    out.tour_b = euler_tour(out.tree_b);
    out.frechet = frechet_delta(out.tour_a, out.tour_b);
    out.delta = out.frechet + 1e-9;  // guarantees decision feasibility
    auto matching = frechet_matching(out.tour_a.heights, out.tour_b.heights, out.delta);
    out.interleaving = interleaving_from_matching(out.tour_a, out.tour_b, matching, out.delta);
    out.decomposition = heavy_path_branch_decomposition(out.interleaving);
    out.scene = build_scene(out.interleaving, out.decomposition, lcfg);
    out.svg = render_svg(out.scene, rcfg);

    auto side_stats = [](const SideDecomposition& s) {
        int active = 0, total = 0, maxc = 0;
        for (const Branch& b : s.branches) {
            if (!b.empty()) ++active;
            total += b.size();
            maxc = std::max(maxc, b.size());
        }
        return nlohmann::json{{"active_paths", active},
                              {"total_branch_components", total},
                              {"max_branch_components_per_path", maxc}};
    };
    out.stats = {{"delta", out.delta},
                 {"frechet_distance", out.frechet},
                 {"leaves_a", out.tree_a.num_leaves()},
                 {"leaves_b", out.tree_b.num_leaves()},
                 {"alpha", side_stats(out.decomposition.alpha)},
                 {"beta", side_stats(out.decomposition.beta)}};
}

}  // namespace parkview
