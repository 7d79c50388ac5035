// Copyright (c) flowwalks contributors.
// SPDX-License-Identifier: Apache-2.0
#include "flowwalks/safety.hpp"

#include <algorithm>

namespace flowwalks {

namespace {

// Nearest marked strict ancestor for every vertex, computed with one pass
// down the tree (children lists derived from parent pointers).
std::vector<Vertex> nearest_marked_ancestor(const DominatorTree& tree,
                                            const std::vector<char>& marked, int n) {
    std::vector<std::vector<Vertex>> children(n);
    for (Vertex v = 0; v < n; ++v)
        if (tree.contains(v) && tree.parent[v] != -1) children[tree.parent[v]].push_back(v);
    std::vector<Vertex> nearest(n, -1);
    std::vector<std::pair<Vertex, Vertex>> stack{{tree.root, -1}};
    while (!stack.empty()) {
        auto [v, above] = stack.back();
        stack.pop_back();
        nearest[v] = above;
        Vertex next_above = marked[v] ? v : above;
        for (Vertex w : children[v]) stack.emplace_back(w, next_above);
    }
    return nearest;
}

}  // namespace

BlueTrees build_blue_trees(const Graph& g, const std::vector<Vertex>& c) {
    if (c.empty()) throw SafetyError(SafetyErrorCode::EmptyC, "C must be non-empty");

    BlueTrees bt;
    bt.s_tree = build_s_dominator_tree(g);
    bt.t_tree = build_t_dominator_tree(g);
    const int n = g.vertex_count();

    bt.blue.assign(n, 0);
    for (Vertex v : c) {
        if (!bt.s_tree.contains(v) || !bt.t_tree.contains(v))
            throw SafetyError(SafetyErrorCode::UnreachableCVertex,
                              "C vertex outside the s-t core: " + g.name(v));
        bt.blue[v] = 1;
    }

    // Relevant = every vertex on the extension of a blue vertex, i.e. the
    // ancestors of blue vertices in either tree. Climbs stop at already
    // marked vertices, so the total work is linear.
    bt.relevant.assign(n, 0);
    auto mark_ancestors = [&](const DominatorTree& tree, std::vector<char>& mask) {
        for (Vertex v = 0; v < n; ++v) {
            if (!bt.blue[v]) continue;
            Vertex cur = v;
            while (cur != -1 && !mask[cur]) {
                mask[cur] = 1;
                cur = tree.parent[cur];
            }
        }
    };
    std::vector<char> rel_s(n, 0), rel_t(n, 0);
    mark_ancestors(bt.s_tree, rel_s);
    mark_ancestors(bt.t_tree, rel_t);
    for (Vertex v = 0; v < n; ++v) bt.relevant[v] = rel_s[v] || rel_t[v];

    // Restricted trees: parent = nearest relevant strict ancestor.
    auto near_s = nearest_marked_ancestor(bt.s_tree, bt.relevant, n);
    auto near_t = nearest_marked_ancestor(bt.t_tree, bt.relevant, n);
    bt.s_parent.assign(n, -1);
    bt.t_parent.assign(n, -1);
    bt.s_children.assign(n, {});
    bt.t_children.assign(n, {});
    for (Vertex v = 0; v < n; ++v) {
        if (!bt.relevant[v]) continue;
        bt.s_parent[v] = near_s[v];
        bt.t_parent[v] = near_t[v];
        if (near_s[v] != -1) bt.s_children[near_s[v]].push_back(v);
        if (near_t[v] != -1) bt.t_children[near_t[v]].push_back(v);
    }

    // Nearest blue strict ancestor in each tree (blue vertices are relevant,
    // so these ancestors lie in the restricted trees as well).
    auto blue_s = nearest_marked_ancestor(bt.s_tree, bt.blue, n);
    auto blue_t = nearest_marked_ancestor(bt.t_tree, bt.blue, n);

    // A link u -> w means (u,w) are adjacent on a C-univocal path: w is u's
    // blue-parent in the t-tree, u is w's blue-parent in the s-tree, and both
    // connecting restricted-tree paths are single-child chains (the top
    // vertex of each path included, the bottom one not).
    auto chain_clear = [&](const std::vector<Vertex>& parent,
                           const std::vector<std::vector<Vertex>>& children, Vertex from,
                           Vertex to) {
        for (Vertex x = parent[from]; x != -1; x = parent[x]) {
            if (children[x].size() != 1) return false;
            if (x == to) return true;
        }
        return false;
    };
    std::vector<Vertex> up_link(n, -1);
    std::vector<char> has_down_link(n, 0);
    for (Vertex u = 0; u < n; ++u) {
        if (!bt.blue[u]) continue;
        Vertex w = blue_t[u];
        if (w == -1) continue;
        if (blue_s[w] != u) continue;
        if (!chain_clear(bt.t_parent, bt.t_children, u, w)) continue;
        if (!chain_clear(bt.s_parent, bt.s_children, w, u)) continue;
        up_link[u] = w;
        has_down_link[w] = 1;
    }

    // Chains run from the t-deepest member (the representative) upward; by
    // the disjointness lemma they never share vertices.
    std::vector<char> leaf_ok(n, 0);
    for (Vertex rep = 0; rep < n; ++rep) {
        if (!bt.blue[rep] || has_down_link[rep]) continue;
        Vertex top = rep;
        std::vector<Vertex> stored;
        while (up_link[top] != -1) {
            Vertex next = up_link[top];
            for (Vertex x = bt.t_parent[top]; x != next; x = bt.t_parent[x]) stored.push_back(x);
            stored.push_back(next);
            top = next;
        }
        if (!stored.empty()) bt.collapsed.emplace(rep, std::move(stored));
        // After collapse the representative's t-children are those of the
        // t-deepest member and its s-children those of the s-deepest (= top).
        if (bt.t_children[rep].empty() && bt.s_children[top].empty()) leaf_ok[rep] = 1;
    }
    for (Vertex v = 0; v < n; ++v)
        if (leaf_ok[v]) bt.leaves.push_back(v);
    std::sort(bt.leaves.begin(), bt.leaves.end(),
              [&g](Vertex a, Vertex b) { return g.name(a) < g.name(b); });
    return bt;
}

std::vector<VertexSafeSequence> maximal_safe_sequences(const Graph& g, const BlueTrees& bt) {
    std::vector<VertexSafeSequence> out;
    out.reserve(bt.leaves.size());
    for (Vertex leaf : bt.leaves)
        out.push_back({extension(bt.s_tree, bt.t_tree, leaf), leaf});
    (void)g;
    return out;
}

std::vector<EdgeSafeSequence> edge_safe_sequences(const Graph& g, const std::vector<EdgeId>& c) {
    if (c.empty()) throw SafetyError(SafetyErrorCode::EmptyC, "C must be non-empty");
    MidpointTransform mt = midpoint_transform(g, c);

    std::vector<Vertex> blue;
    blue.reserve(c.size());
    for (EdgeId e : c) blue.push_back(mt.midpoint_of_edge[e]);

    BlueTrees bt = build_blue_trees(mt.graph, blue);
    auto vertex_sequences = maximal_safe_sequences(mt.graph, bt);

    std::vector<EdgeSafeSequence> out;
    out.reserve(vertex_sequences.size());
    for (const auto& vs : vertex_sequences) {
        EdgeSafeSequence es;
        es.anchor = mt.edge_of_midpoint.at(vs.anchor);
        for (Vertex v : vs.vertices) {
            auto mid = mt.edge_of_midpoint.find(v);
            if (mid != mt.edge_of_midpoint.end())
                es.edges.push_back(mid->second);
            else
                es.vertex_seq.push_back(mt.original_vertex[v]);
        }
        out.push_back(std::move(es));
    }
    std::sort(out.begin(), out.end(), [&g](const EdgeSafeSequence& a, const EdgeSafeSequence& b) {
        return g.edge_label(a.anchor) < g.edge_label(b.anchor);
    });
    return out;
}

CoveringWeights longest_covering_sequence(const Graph& g,
                                          const std::vector<EdgeSafeSequence>& seqs) {
    CoveringWeights cw;
    cw.weight.assign(g.edge_count(), 0);
    cw.witness.assign(g.edge_count(), -1);
    for (size_t i = 0; i < seqs.size(); ++i) {
        Weight len = static_cast<Weight>(seqs[i].edges.size());
        for (EdgeId e : seqs[i].edges) {
            if (len > cw.weight[e]) {
                cw.weight[e] = len;
                cw.witness[e] = static_cast<int>(i);
            }
        }
    }
    return cw;
}

}  // namespace flowwalks
