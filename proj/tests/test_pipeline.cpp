#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

#include <parkview/field.hpp>
#include <parkview/render.hpp>

#include "helpers.hpp"

using namespace parkview;
using testutil::Rng;

namespace {

ScalarField2D random_distinct_field(Rng& rng, int rows, int cols) {
    ScalarField2D f;
    f.rows = rows;
    f.cols = cols;
    f.values.resize(static_cast<size_t>(rows) * cols);
    std::iota(f.values.begin(), f.values.end(), 0.0);
    std::shuffle(f.values.begin(), f.values.end(), rng.g);
    return f;
}

}  // namespace

TEST_CASE("comparing a field with itself yields the floor delta") {
    Rng rng(179);
    ScalarField2D f = random_distinct_field(rng, 12, 12);
    CompareResult res;
    run_compare(f, f, 0.0, 4, LayoutConfig{}, RenderConfig{}, res);
    CHECK(res.frechet == 0.0);
    CHECK(res.delta == 1e-9);
    CHECK(res.stats["leaves_a"] == res.stats["leaves_b"]);
    CHECK(res.stats["alpha"]["active_paths"] == res.tree_a.num_leaves());
    CHECK(res.stats["alpha"]["max_branch_components_per_path"] == 1);
    CHECK(res.stats["beta"]["total_branch_components"] == res.tree_b.num_leaves());
    CHECK(res.svg.find("</svg>") != std::string::npos);
}

TEST_CASE("two minima against a smoothed copy") {
    // the second valley is lifted by 1; the interleaving must absorb it
    ScalarField2D a = read_field("1 5\n0 5 1 5 0.5\n");
    ScalarField2D b = read_field("1 5\n0 5 2 5 0.5\n");
    CompareResult res;
    run_compare(a, b, 0.0, 4, LayoutConfig{}, RenderConfig{}, res);
    CHECK(res.tree_a.num_leaves() == 3);
    CHECK(res.tree_b.num_leaves() == 3);
    CHECK(res.frechet >= 0.5 - 1e-9);   // half the lift, by the midpoint argument
    CHECK(res.frechet <= 1.0 + 1e-9);
    // validators already ran inside; spot-check once more from the outside
    CHECK(validate_shift_map(res.interleaving.alpha).empty());
    CHECK(validate_shift_map(res.interleaving.beta).empty());
    CHECK(validate_interleaving(res.interleaving).empty());
}

TEST_CASE("aggressive persistence threshold degrades to one leaf per side") {
    Rng rng(181);
    ScalarField2D a = random_distinct_field(rng, 9, 9);
    ScalarField2D b = random_distinct_field(rng, 9, 9);
    CompareResult res;
    run_compare(a, b, 1e9, 4, LayoutConfig{}, RenderConfig{}, res);
    CHECK(res.tree_a.num_leaves() == 1);
    CHECK(res.tree_b.num_leaves() == 1);
    CHECK(res.scene.left.columns.size() == 1);
    CHECK(res.scene.right.columns.size() == 1);
    CHECK(res.scene.left.hedges.size() == 1);
    CHECK(res.scene.right.hedges.size() == 1);
}

TEST_CASE("full pipeline is deterministic byte for byte") {
    Rng rng(191);
    ScalarField2D a = random_distinct_field(rng, 10, 14);
    ScalarField2D b = random_distinct_field(rng, 10, 14);
    CompareResult one, two;
    run_compare(a, b, 2.0, 8, LayoutConfig{}, RenderConfig{}, one);
    run_compare(a, b, 2.0, 8, LayoutConfig{}, RenderConfig{}, two);
    CHECK(one.svg == two.svg);
    CHECK(one.stats.dump() == two.stats.dump());
    CHECK(write_tree(one.tree_a) == write_tree(two.tree_a));
}

TEST_CASE("random field pairs run the full pipeline cleanly") {
    Rng rng(193);
    for (int it = 0; it < 8; ++it) {
        ScalarField2D a = random_distinct_field(rng, rng.pick(3, 10), rng.pick(3, 10));
        ScalarField2D b = random_distinct_field(rng, rng.pick(3, 10), rng.pick(3, 10));
        CompareResult res;
        int conn = it % 2 == 0 ? 4 : 8;
        run_compare(a, b, rng.uniform(0.0, 10.0), conn, LayoutConfig{}, RenderConfig{}, res);
        // delta really admits the matching: both trees fit within the tour distance
        CHECK(res.delta > res.frechet);
        CHECK(res.interleaving.alpha.delta == res.delta);
        CHECK(res.interleaving.beta.delta == res.delta);
        // every leaf of A appears within delta of its image height
        const ShiftMap& m = res.interleaving.alpha;
        for (int leaf : res.tree_a.leaf_order())
            CHECK(m.leaf_image[leaf].height == res.tree_a.height(leaf) + res.delta);
        CHECK(res.stats["alpha"]["active_paths"] > 0);
        CHECK(res.stats["beta"]["active_paths"] > 0);
    }
}

TEST_CASE("interleaving_from_matching rejects an infeasible delta") {
    // curves that differ by 2 cannot be matched at delta near 0
    OrderedMergeTree ta = read_tree(R"({"root":"r","nodes":{
        "r":{"height":3,"children":["a","b"]},
        "a":{"height":0},"b":{"height":1}}})");
    OrderedMergeTree tb = read_tree(R"({"root":"r","nodes":{
        "r":{"height":3,"children":["a","b"]},
        "a":{"height":2},"b":{"height":2.5}}})");
    EulerTourCurve ca = euler_tour(ta), cb = euler_tour(tb);
    double tiny = 1e-6;
    auto matching = frechet_matching(ca.heights, cb.heights, frechet_delta(ca, cb) + 1e-9);
    CHECK_THROWS_AS(interleaving_from_matching(ca, cb, matching, tiny), ValidationError);
}
