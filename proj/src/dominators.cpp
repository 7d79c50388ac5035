// Copyright (c) flowwalks contributors.
// SPDX-License-Identifier: Apache-2.0
#include "flowwalks/dominators.hpp"

#include <algorithm>
#include <sstream>

namespace flowwalks {

namespace {

// Adjacency restricted to a vertex mask, in forward or reverse orientation.
struct Restricted {
    const Graph& g;
    const std::vector<char>& core;
    bool reversed;

    template <typename F>
    void for_each_pred(Vertex v, F&& f) const {
        const auto& edges = reversed ? g.out_edges(v) : g.in_edges(v);
        for (EdgeId e : edges) {
            Vertex u = reversed ? g.edge(e).head : g.edge(e).tail;
            if (u != v && core[u]) f(u);  // self-loops never affect dominance
        }
    }
    template <typename F>
    void for_each_succ(Vertex v, F&& f) const {
        const auto& edges = reversed ? g.in_edges(v) : g.out_edges(v);
        for (EdgeId e : edges) {
            Vertex w = reversed ? g.edge(e).tail : g.edge(e).head;
            if (w != v && core[w]) f(w);
        }
    }
};

std::vector<char> reachable_mask(const Graph& g, Vertex start, bool reversed) {
    std::vector<char> seen(g.vertex_count(), 0);
    std::vector<Vertex> queue{start};
    seen[start] = 1;
    while (!queue.empty()) {
        Vertex v = queue.back();
        queue.pop_back();
        const auto& edges = reversed ? g.in_edges(v) : g.out_edges(v);
        for (EdgeId e : edges) {
            Vertex w = reversed ? g.edge(e).tail : g.edge(e).head;
            if (!seen[w]) {
                seen[w] = 1;
                queue.push_back(w);
            }
        }
    }
    return seen;
}

// Semi-NCA: DFS + semidominators via path-compressed eval, then the NCA
// sweep. Near-linear; dominator construction is never the bottleneck here.
DominatorTree build_tree(const Graph& g, Vertex root, bool reversed) {
    const int n = g.vertex_count();
    DominatorTree tree;
    tree.root = root;
    tree.parent.assign(n, -1);
    tree.depth.assign(n, -1);

    auto fwd = reachable_mask(g, g.source(), false);
    auto bwd = reachable_mask(g, g.sink(), true);
    std::vector<char> core(n, 0);
    for (Vertex v = 0; v < n; ++v) {
        core[v] = fwd[v] && bwd[v];
        if (!core[v]) tree.pruned.push_back(v);
    }
    Restricted adj{g, core, reversed};

    std::vector<int> pre(n, -1);
    std::vector<Vertex> order;
    order.reserve(n);
    std::vector<Vertex> dfs_parent(n, -1);
    {
        std::vector<std::pair<Vertex, size_t>> stack{{root, 0}};
        pre[root] = 0;
        order.push_back(root);
        while (!stack.empty()) {
            auto& [v, i] = stack.back();
            const auto& edges = reversed ? g.in_edges(v) : g.out_edges(v);
            bool descended = false;
            while (i < edges.size()) {
                EdgeId e = edges[i];
                ++i;
                Vertex w = reversed ? g.edge(e).tail : g.edge(e).head;
                if (w == v || !core[w] || pre[w] != -1) continue;
                pre[w] = static_cast<int>(order.size());
                order.push_back(w);
                dfs_parent[w] = v;
                stack.emplace_back(w, 0);
                descended = true;
                break;
            }
            if (!descended) stack.pop_back();
        }
    }

    const int reached = static_cast<int>(order.size());
    std::vector<int> semi(n, 0), label(n, 0);
    std::vector<Vertex> ancestor(n, -1);
    for (Vertex v : order) {
        semi[v] = pre[v];
        label[v] = v;
    }

    // eval with iterative path compression: returns the vertex with minimum
    // semi on the path from v up to, but excluding, the root of its tree in
    // the link forest.
    auto eval = [&](Vertex v) -> Vertex {
        if (ancestor[v] == -1) return v;
        std::vector<Vertex> path;
        Vertex u = v;
        while (ancestor[ancestor[u]] != -1) {
            path.push_back(u);
            u = ancestor[u];
        }
        for (auto it = path.rbegin(); it != path.rend(); ++it) {
            Vertex x = *it;
            if (semi[label[ancestor[x]]] < semi[label[x]]) label[x] = label[ancestor[x]];
            ancestor[x] = ancestor[ancestor[x]];
        }
        return label[v];
    };

    for (int i = reached - 1; i >= 1; --i) {
        Vertex w = order[i];
        adj.for_each_pred(w, [&](Vertex u) {
            if (pre[u] == -1) return;
            Vertex x = eval(u);
            semi[w] = std::min(semi[w], semi[x]);
        });
        ancestor[w] = dfs_parent[w];
    }

    std::vector<Vertex> idom(n, -1);
    for (int i = 1; i < reached; ++i) {
        Vertex w = order[i];
        idom[w] = dfs_parent[w];
        while (pre[idom[w]] > semi[w]) idom[w] = idom[idom[w]];
    }

    tree.depth[root] = 0;
    for (int i = 1; i < reached; ++i) {
        Vertex w = order[i];
        tree.parent[w] = idom[w];
        tree.depth[w] = tree.depth[idom[w]] + 1;
    }
    return tree;
}

}  // namespace

Vertex DominatorTree::dom_k(Vertex v, int k) const {
    if (v < 0 || v >= static_cast<int>(depth.size()) || !contains(v))
        throw DominatorError(DominatorErrorCode::VertexNotInTree, "vertex not in dominator tree");
    Vertex cur = v;
    while (k > 0 && parent[cur] != -1) {
        cur = parent[cur];
        --k;
    }
    return cur;
}

bool DominatorTree::is_ancestor(Vertex anc, Vertex v) const {
    if (!contains(anc) || !contains(v)) return false;
    Vertex cur = v;
    while (cur != -1) {
        if (cur == anc) return true;
        cur = parent[cur];
    }
    return false;
}

DominatorTree build_s_dominator_tree(const Graph& g) {
    return build_tree(g, g.source(), false);
}

DominatorTree build_t_dominator_tree(const Graph& g) {
    return build_tree(g, g.sink(), true);
}

std::vector<Vertex> extension(const DominatorTree& s_tree, const DominatorTree& t_tree, Vertex v) {
    if (!s_tree.contains(v) || !t_tree.contains(v))
        throw DominatorError(DominatorErrorCode::VertexNotInTree,
                             "vertex not present in both dominator trees");
    std::vector<Vertex> seq;
    for (Vertex cur = v; cur != -1; cur = s_tree.parent[cur]) seq.push_back(cur);
    std::reverse(seq.begin(), seq.end());
    for (Vertex cur = t_tree.parent[v]; cur != -1; cur = t_tree.parent[cur]) seq.push_back(cur);
    return seq;
}

std::string dominator_tree_to_dot(const Graph& g, const DominatorTree& tree,
                                  const std::string& label) {
    std::ostringstream out;
    out << "digraph \"" << label << "\" {\n";
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (!tree.contains(v) || tree.parent[v] == -1) continue;
        out << "  \"" << g.name(tree.parent[v]) << "\" -> \"" << g.name(v) << "\";\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace flowwalks
