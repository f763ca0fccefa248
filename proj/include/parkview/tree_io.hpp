#pragma once

// Merge-tree JSON:
//   {"root": "<id>", "nodes": {"<id>": {"height": <number>, "children": [...]}}}
// The children array order is the leaf order.

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "merge_tree.hpp"

namespace parkview {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    std::vector<Violation> violations;
    explicit ValidationError(std::vector<Violation> v)
        : std::runtime_error(format(v)), violations(std::move(v)) {}
    static std::string format(const std::vector<Violation>& v) {
        std::string s = "validation failed:";
        for (const auto& viol : v) s += "\n  [" + viol.rule + "] " + viol.detail;
        return s;
    }
};

inline OrderedMergeTree read_tree(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("tree JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("root") || !j.contains("nodes"))
        throw ParseError("tree JSON: missing root or nodes field");

    const auto& nodes = j.at("nodes");
    if (!nodes.is_object()) throw ParseError("tree JSON: nodes must be an object");

    std::vector<OrderedMergeTree::Vertex> verts;
    std::unordered_map<std::string, int> index;
    for (auto it = nodes.begin(); it != nodes.end(); ++it) {
        OrderedMergeTree::Vertex v;
        v.name = it.key();
        if (!it.value().contains("height") || !it.value().at("height").is_number())
            throw ParseError("tree JSON: node " + v.name + " has no numeric height");
        v.height = it.value().at("height").get<double>();
        if (!std::isfinite(v.height))
            throw ParseError("tree JSON: node " + v.name + " has non-finite height");
        index[v.name] = static_cast<int>(verts.size());
        verts.push_back(std::move(v));
    }
    for (auto it = nodes.begin(); it != nodes.end(); ++it) {
        auto& v = verts[index[it.key()]];
        if (it.value().contains("children")) {
            for (const auto& c : it.value().at("children")) {
                std::string cn = c.get<std::string>();
                auto ci = index.find(cn);
                if (ci == index.end())
                    throw ParseError("tree JSON: unknown child " + cn + " of " + it.key());
                v.children.push_back(ci->second);
            }
        }
    }
    std::string root_name = j.at("root").get<std::string>();
    auto ri = index.find(root_name);
    if (ri == index.end()) throw ParseError("tree JSON: unknown root " + root_name);

    // reject cycles / forests: every vertex must be reachable from the root
    std::vector<int> seen;
    {
        std::vector<bool> vis(verts.size(), false);
        std::vector<int> stack{ri->second};
        vis[ri->second] = true;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            seen.push_back(u);
            for (int c : verts[u].children) {
                if (vis[c]) throw ParseError("tree JSON: vertex " + verts[c].name + " has two parents");
                vis[c] = true;
                stack.push_back(c);
            }
        }
        if (seen.size() != verts.size())
            throw ParseError("tree JSON: nodes not reachable from the root");
    }

    OrderedMergeTree t = OrderedMergeTree::build(std::move(verts), ri->second);
    auto violations = t.validate();
    if (!violations.empty()) throw ValidationError(std::move(violations));
    return t;
}

inline std::string write_tree(const OrderedMergeTree& t) {
    nlohmann::json nodes = nlohmann::json::object();
    for (int v = 0; v < t.size(); ++v) {
        nlohmann::json n;
        n["height"] = t.height(v);
        auto ch = nlohmann::json::array();
        for (int c : t.children(v)) ch.push_back(t.name(c));
        n["children"] = ch;
        nodes[t.name(v)] = n;
    }
    nlohmann::json j;
    j["root"] = t.name(t.root());
    j["nodes"] = nodes;
    return j.dump(2) + "\n";
}

}  // namespace parkview
