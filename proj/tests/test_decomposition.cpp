#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>

#include "helpers.hpp"

using namespace parkview;
using testutil::Rng;

namespace {

int count_decompositions(const OrderedMergeTree& t) {
    int n = 0;
    enumerate_all_decompositions(t, [&](const PathDecomposition&) { ++n; });
    return n;
}

// Brute-force minimum (total, max) over all decompositions, with a cache of
// branch sizes per (bottom leaf, top vertex) since the edge chain of a path
// is determined by its endpoints.
std::pair<DecompositionCost, DecompositionCost> brute_minimum(const ShiftMap& m) {
    auto src_img = vertex_images(m);
    std::map<std::pair<int, int>, int> size_cache;
    auto path_size = [&](const Path& p) {
        auto key = std::make_pair(p.bottom_leaf, p.top_vertex);
        auto it = size_cache.find(key);
        if (it != size_cache.end()) return it->second;
        int s = branch_of_path(m, p, src_img).size();
        size_cache[key] = s;
        return s;
    };
    DecompositionCost best_total{1 << 30, 1 << 30}, best_max{1 << 30, 1 << 30};
    enumerate_all_decompositions(*m.target, [&](const PathDecomposition& d) {
        DecompositionCost c;
        for (const Path& p : d.paths) {
            int s = path_size(p);
            c.total_components += s;
            c.max_components_per_path = std::max(c.max_components_per_path, s);
        }
        if (c.total_components < best_total.total_components) best_total = c;
        if (c.max_components_per_path < best_max.max_components_per_path) best_max = c;
    });
    return {best_total, best_max};
}

}  // namespace

TEST_CASE("enumeration counts: 2, 8, and 24 decompositions") {
    CHECK(count_decompositions(testutil::two_leaf_tree()) == 2);

    OrderedMergeTree full_binary = read_tree(R"({"root":"r","nodes":{
        "r":{"height":4,"children":["u","v"]},
        "u":{"height":2,"children":["a","b"]},
        "v":{"height":3,"children":["c","d"]},
        "a":{"height":0},"b":{"height":1},"c":{"height":0.5},"d":{"height":1.5}}})");
    CHECK(count_decompositions(full_binary) == 8);

    // caterpillar with internal down-degrees 2, 2, 2, 3
    OrderedMergeTree caterpillar = read_tree(R"({"root":"v1","nodes":{
        "v1":{"height":8,"children":["v2","x1"]},
        "v2":{"height":6,"children":["v3","x2"]},
        "v3":{"height":4,"children":["v4","x3"]},
        "v4":{"height":2,"children":["a","b","c"]},
        "a":{"height":0},"b":{"height":0.5},"c":{"height":1},
        "x1":{"height":1.2},"x2":{"height":1.4},"x3":{"height":1.6}}})");
    CHECK(count_decompositions(caterpillar) == 24);

    Rng rng(1);
    OrderedMergeTree big = testutil::random_tree(rng, 40);
    CHECK_THROWS_AS(count_decompositions(big), std::invalid_argument);
}

TEST_CASE("identity map: unit weights, tie-break by lowest leaf") {
    OrderedMergeTree t = read_tree(R"({"root":"r","nodes":{
        "r":{"height":6,"children":["u","v"]},
        "u":{"height":3,"children":["a","b"]},
        "v":{"height":4,"children":["c","d"]},
        "a":{"height":1},"b":{"height":0.5},"c":{"height":0.2},"d":{"height":2}}})");
    ShiftMap id = identity_shift_map(t);
    SideDecomposition side = heavy_decomposition(id);
    for (int e = 0; e < t.size(); ++e) CHECK(side.weights.weight[e] == 1);
    // all weights tie; the through edge goes toward the lowest leaf
    int u = t.vertex_by_name("u"), v = t.vertex_by_name("v"), r = t.vertex_by_name("r");
    CHECK(side.paths.through[u] == t.vertex_by_name("b"));
    CHECK(side.paths.through[v] == t.vertex_by_name("c"));
    CHECK(side.paths.through[r] == v);  // c(0.2) is the lowest start overall
    CHECK(static_cast<int>(side.paths.paths.size()) == t.num_leaves());
}

TEST_CASE("identity map costs: (L, 1) for any decomposition") {
    Rng rng(43);
    for (int it = 0; it < 10; ++it) {
        OrderedMergeTree t = testutil::random_tree(rng, rng.pick(2, 7));
        ShiftMap id = identity_shift_map(t);
        enumerate_all_decompositions(t, [&](const PathDecomposition& d) {
            DecompositionCost c = decomposition_cost(id, d);
            CHECK(c.total_components == t.num_leaves());
            CHECK(c.max_components_per_path == 1);
        });
    }
}

TEST_CASE("branch size equals top-edge weight on random instances") {
    Rng rng(47);
    for (int it = 0; it < 30; ++it) {
        testutil::Instance inst = testutil::random_instance(rng, 20);
        for (const ShiftMap* m : {&inst.il.alpha, &inst.il.beta}) {
            SideDecomposition side = heavy_decomposition(*m);
            for (size_t i = 0; i < side.paths.paths.size(); ++i) {
                int top_edge = side.paths.paths[i].edges.back();
                CHECK(side.branches[i].size() == side.weights.weight[top_edge]);
            }
        }
    }
}

TEST_CASE("total cost equals the vertex-weight formulation") {
    // total components == sum of weights of non-through edges + root edge weight
    Rng rng(53);
    for (int it = 0; it < 20; ++it) {
        testutil::Instance inst = testutil::random_instance(rng, 15);
        const ShiftMap& m = inst.il.alpha;
        SideDecomposition side = heavy_decomposition(m);
        const OrderedMergeTree& t = *m.target;
        int by_vertices = side.weights.weight[t.root()];
        for (int v = 0; v < t.size(); ++v) {
            if (t.is_leaf(v)) continue;
            for (int c : t.children(v))
                if (c != side.paths.through[v]) by_vertices += side.weights.weight[c];
        }
        DecompositionCost cost = decomposition_cost(m, side.paths);
        CHECK(cost.total_components == by_vertices);
        int by_branches = 0;
        for (const Branch& b : side.branches) by_branches += b.size();
        CHECK(cost.total_components == by_branches);
    }
}

TEST_CASE("heavy decomposition is optimal on random small instances") {
    Rng rng(59);
    for (int it = 0; it < 25; ++it) {
        testutil::Instance inst = testutil::random_instance(rng, 8);
        for (const ShiftMap* m : {&inst.il.alpha, &inst.il.beta}) {
            SideDecomposition side = heavy_decomposition(*m);
            DecompositionCost heavy = decomposition_cost(*m, side.paths);
            auto [best_total, best_max] = brute_minimum(*m);
            CHECK(heavy.total_components == best_total.total_components);
            CHECK(heavy.max_components_per_path == best_max.max_components_per_path);
        }
    }
}

TEST_CASE("every enumerated decomposition is a partition into leaf paths") {
    Rng rng(61);
    OrderedMergeTree t = testutil::random_tree(rng, 6);
    enumerate_all_decompositions(t, [&](const PathDecomposition& d) {
        REQUIRE(static_cast<int>(d.paths.size()) == t.num_leaves());
        std::vector<int> covered(t.size(), 0);
        for (const Path& p : d.paths)
            for (int e : p.edges) ++covered[e];
        for (int v = 0; v < t.size(); ++v) CHECK(covered[v] == 1);
    });
}

TEST_CASE("decomposition debug dump names through edges and weights") {
    OrderedMergeTree t = testutil::two_leaf_tree();
    SideDecomposition side = heavy_decomposition(identity_shift_map(t));
    nlohmann::json j = decomposition_to_json(side);
    REQUIRE(j["vertices"].contains("r"));
    CHECK(j["vertices"]["r"]["weights"]["a"] == 1);
    CHECK(j["paths"].size() == 2);
}
