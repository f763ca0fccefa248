#pragma once

// Hilbert-curve leaf ordering: leaves carry grid cells; children at every
// internal vertex are sorted by the minimal Hilbert index among descendant
// leaves, which yields a total leaf order consistent with the tree.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "field.hpp"
#include "merge_tree.hpp"

namespace parkview {

// d index of (x, y) on the order-n Hilbert curve (n a power of two).
inline std::uint64_t hilbert_index(std::uint32_t n, std::uint32_t x, std::uint32_t y) {
    std::uint64_t d = 0;
    for (std::uint32_t s = n / 2; s > 0; s /= 2) {
        std::uint32_t rx = (x & s) ? 1 : 0;
        std::uint32_t ry = (y & s) ? 1 : 0;
        d += static_cast<std::uint64_t>(s) * s * ((3 * rx) ^ ry);
        if (ry == 0) {
            if (rx == 1) {
                x = s - 1 - x;
                y = s - 1 - y;
            }
            std::swap(x, y);
        }
    }
    return d;
}

inline std::uint32_t hilbert_order_for(int rows, int cols) {
    std::uint32_t n = 1;
    while (static_cast<int>(n) < std::max(rows, cols)) n *= 2;
    return n;
}

inline OrderedMergeTree order_leaves(const OrderedMergeTree& input, const ScalarField2D& f) {
    std::uint32_t n = hilbert_order_for(f.rows, f.cols);

    std::vector<std::uint64_t> min_idx(input.size(), UINT64_MAX);
    std::vector<int> order;
    {
        std::vector<int> stack{input.root()};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            order.push_back(v);
            for (int c : input.children(v)) stack.push_back(c);
        }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int v = *it;
        if (input.is_leaf(v)) {
            const auto& cell = input.vertex(v).cell;
            if (!cell) throw std::invalid_argument("order_leaves: leaf " + input.name(v) + " has no grid cell");
            min_idx[v] = hilbert_index(n, static_cast<std::uint32_t>(cell->second),
                                       static_cast<std::uint32_t>(cell->first));
        } else {
            for (int c : input.children(v)) min_idx[v] = std::min(min_idx[v], min_idx[c]);
        }
    }

    std::vector<OrderedMergeTree::Vertex> verts;
    for (int v = 0; v < input.size(); ++v) {
        OrderedMergeTree::Vertex nv;
        nv.name = input.name(v);
        nv.height = input.height(v);
        nv.cell = input.vertex(v).cell;
        nv.children = input.children(v);
        std::sort(nv.children.begin(), nv.children.end(),
                  [&](int a, int b) { return min_idx[a] < min_idx[b]; });
        verts.push_back(std::move(nv));
    }
    return OrderedMergeTree::build(std::move(verts), input.root());
}

}  // namespace parkview
