// Copyright (c) flowwalks contributors.
// SPDX-License-Identifier: Apache-2.0
#include "flowwalks/widths.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace flowwalks {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

// Dinic with int64 capacities.
class MaxFlow {
  public:
    explicit MaxFlow(int n) : adj_(n), level_(n), iter_(n) {}

    int add_edge(int from, int to, std::int64_t cap) {
        int id = static_cast<int>(edges_.size());
        edges_.push_back({to, cap});
        edges_.push_back({from, 0});
        adj_[from].push_back(id);
        adj_[to].push_back(id + 1);
        return id;
    }

    std::int64_t flow_on(int id) const { return edges_[id + 1].cap; }

    std::int64_t run(int s, int t) {
        std::int64_t total = 0;
        while (bfs(s, t)) {
            std::fill(iter_.begin(), iter_.end(), 0);
            while (std::int64_t pushed = dfs(s, t, kInf)) total += pushed;
        }
        return total;
    }

    // After run(): vertices reachable from s in the residual network.
    std::vector<char> source_side(int s) const {
        std::vector<char> seen(adj_.size(), 0);
        std::vector<int> queue{s};
        seen[s] = 1;
        while (!queue.empty()) {
            int v = queue.back();
            queue.pop_back();
            for (int id : adj_[v]) {
                const auto& e = edges_[id];
                if (e.cap > 0 && !seen[e.to]) {
                    seen[e.to] = 1;
                    queue.push_back(e.to);
                }
            }
        }
        return seen;
    }

  private:
    struct E {
        int to;
        std::int64_t cap;
    };

    bool bfs(int s, int t) {
        std::fill(level_.begin(), level_.end(), -1);
        std::queue<int> q;
        level_[s] = 0;
        q.push(s);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int id : adj_[v]) {
                const auto& e = edges_[id];
                if (e.cap > 0 && level_[e.to] == -1) {
                    level_[e.to] = level_[v] + 1;
                    q.push(e.to);
                }
            }
        }
        return level_[t] >= 0;
    }

    std::int64_t dfs(int v, int t, std::int64_t limit) {
        if (v == t) return limit;
        for (size_t& i = iter_[v]; i < adj_[v].size(); ++i) {
            int id = adj_[v][i];
            auto& e = edges_[id];
            if (e.cap <= 0 || level_[e.to] != level_[v] + 1) continue;
            std::int64_t pushed = dfs(e.to, t, std::min(limit, e.cap));
            if (pushed > 0) {
                e.cap -= pushed;
                edges_[id ^ 1].cap += pushed;
                return pushed;
            }
        }
        return 0;
    }

    std::vector<E> edges_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> level_;
    std::vector<size_t> iter_;
};

// Minimum flow with lower bounds on a DAG, from src to snk, infinite
// capacities. `feasible` must carry a flow meeting the lower bounds; it is
// reduced by a max flow from src to snk in the reduction network (forward
// arcs can give back slack above the lower bound, reverse arcs can raise
// flow). Returns the min flow value and fills `tight_cut` with the gadget
// edges crossing the canonical source-side cut (those are mutually
// unreachable and carry exactly their lower bound).
struct EdgeRef {
    int tail;
    int head;
    std::int64_t lower;
};

std::int64_t min_flow_with_lower_bounds(int node_count, const std::vector<EdgeRef>& edges,
                                        const std::vector<std::int64_t>& feasible, int src,
                                        int snk, std::vector<char>* crossing = nullptr) {
    MaxFlow mf(node_count);
    std::vector<int> fwd(edges.size());
    std::int64_t value = 0;
    for (size_t i = 0; i < edges.size(); ++i) {
        fwd[i] = mf.add_edge(edges[i].tail, edges[i].head, feasible[i] - edges[i].lower);
        mf.add_edge(edges[i].head, edges[i].tail, kInf);
        if (edges[i].tail == src) value += feasible[i];
        if (edges[i].head == src) value -= feasible[i];
    }
    value -= mf.run(src, snk);
    if (crossing) {
        auto side = mf.source_side(src);
        crossing->assign(edges.size(), 0);
        for (size_t i = 0; i < edges.size(); ++i)
            (*crossing)[i] = side[edges[i].tail] && !side[edges[i].head];
    }
    return value;
}

}  // namespace

GadgetDag build_gadget_dag(const Graph& g, const Condensation& cond,
                           const std::vector<Weight>& edge_weight,
                           const std::vector<char>& allowed) {
    auto is_allowed = [&allowed](EdgeId e) { return allowed.empty() || allowed[e]; };

    GadgetDag dag;
    dag.comp_in.assign(cond.component_count, -1);
    dag.comp_out.assign(cond.component_count, -1);
    int next = 0;
    for (int comp = 0; comp < cond.component_count; ++comp) {
        if (cond.is_trivial[comp]) {
            dag.comp_in[comp] = dag.comp_out[comp] = next++;
        } else {
            dag.comp_in[comp] = next++;
            dag.comp_out[comp] = next++;
        }
    }
    dag.core_node_count = next;

    for (int comp = 0; comp < cond.component_count; ++comp) {
        if (cond.is_trivial[comp]) continue;
        Weight best = 0;
        EdgeId witness = -1;
        for (Vertex v : cond.members[comp]) {
            for (EdgeId e : g.out_edges(v)) {
                if (cond.scc_id[g.edge(e).head] != comp || !is_allowed(e)) continue;
                if (witness == -1 || edge_weight[e] > best) {
                    best = edge_weight[e];
                    witness = e;
                }
            }
        }
        dag.edges.push_back({dag.comp_in[comp], dag.comp_out[comp],
                             witness == -1 ? 0 : best, 0, GadgetDag::EdgeKind::SccGadget,
                             witness, comp});
    }
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        const Edge& ed = g.edge(e);
        int cu = cond.scc_id[ed.tail], cv = cond.scc_id[ed.head];
        if (cu == cv) continue;
        int private_vertex = next++;
        dag.edges.push_back({dag.comp_out[cu], private_vertex,
                             is_allowed(e) ? edge_weight[e] : 0, 0,
                             GadgetDag::EdgeKind::InterFirst, e, -1});
        dag.edges.push_back({private_vertex, dag.comp_in[cv], 0, 0,
                             GadgetDag::EdgeKind::InterSecond, -1, -1});
    }
    dag.node_count = next;
    dag.source_node = dag.comp_in[cond.scc_id[g.source()]];
    dag.sink_node = dag.comp_out[cond.scc_id[g.sink()]];
    return dag;
}

namespace {

// Max antichain weight via min flow on the gadget DAG augmented with a super
// source/sink reaching every node, so edges off s-t paths participate too.
// The optimal antichain equals the gadget edges crossing the canonical cut.
std::int64_t antichain_flow(const GadgetDag& dag, std::vector<char>* crossing) {
    int sigma = dag.node_count;
    int tau = dag.node_count + 1;
    std::vector<EdgeRef> edges;
    std::vector<std::int64_t> feasible;
    edges.reserve(dag.edges.size() * 3);
    for (const auto& ge : dag.edges) {
        edges.push_back({ge.tail, ge.head, ge.weight});
        feasible.push_back(ge.weight);
        edges.push_back({sigma, ge.tail, 0});
        feasible.push_back(ge.weight);
        edges.push_back({ge.head, tau, 0});
        feasible.push_back(ge.weight);
    }
    std::vector<char> cross_all;
    std::int64_t value = min_flow_with_lower_bounds(dag.node_count + 2, edges, feasible, sigma,
                                                    tau, crossing ? &cross_all : nullptr);
    if (crossing) {
        crossing->assign(dag.edges.size(), 0);
        for (size_t i = 0; i < dag.edges.size(); ++i) (*crossing)[i] = cross_all[3 * i];
    }
    return value;
}

std::int64_t max_antichain_weight_masked(const Graph& g, const Condensation& cond,
                                         const std::vector<Weight>& w,
                                         const std::vector<char>& allowed) {
    GadgetDag dag = build_gadget_dag(g, cond, w, allowed);
    return antichain_flow(dag, nullptr);
}

}  // namespace

Antichain max_weight_antichain(const Graph& g, const std::vector<Weight>& edge_weight) {
    Condensation cond = condense(g);
    GadgetDag dag = build_gadget_dag(g, cond, edge_weight);
    std::int64_t best = antichain_flow(dag, nullptr);

    Antichain result;
    result.total_weight = best;
    if (best == 0) return result;

    // Greedy lexicographic refinement: commit the smallest-labelled edge that
    // still admits a maximum-weight antichain, restricting the candidate pool
    // to edges incomparable with everything committed so far.
    ReachabilityIndex reach(g);
    auto comparable = [&](EdgeId a, EdgeId b) {
        return reach.edge_reaches(g.edge(a), g.edge(b)) ||
               reach.edge_reaches(g.edge(b), g.edge(a));
    };

    std::vector<EdgeId> candidates;
    for (EdgeId e = 0; e < g.edge_count(); ++e)
        if (edge_weight[e] > 0) candidates.push_back(e);
    std::sort(candidates.begin(), candidates.end(),
              [&g](EdgeId a, EdgeId b) { return g.edge_label(a) < g.edge_label(b); });

    std::vector<char> allowed(g.edge_count(), 0);
    for (EdgeId e : candidates) allowed[e] = 1;
    Weight committed = 0;
    for (EdgeId e : candidates) {
        if (committed >= best) break;
        if (!allowed[e]) continue;
        std::vector<char> next_allowed = allowed;
        next_allowed[e] = 0;
        for (EdgeId f : candidates)
            if (next_allowed[f] && comparable(e, f)) next_allowed[f] = 0;
        std::int64_t rest = max_antichain_weight_masked(g, cond, edge_weight, next_allowed);
        if (committed + edge_weight[e] + rest == best) {
            result.edges.push_back(e);
            committed += edge_weight[e];
            allowed = next_allowed;
        } else {
            allowed[e] = 0;
        }
    }
    return result;
}

int min_walk_cover_size(const Graph& g, const std::vector<EdgeId>& eprime) {
    if (eprime.empty())
        throw WidthsError(WidthsErrorCode::EmptyEdgeSet, "E' must be non-empty");

    ReachabilityIndex reach(g);
    for (EdgeId e : eprime) {
        if (!reach.reaches(g.source(), g.edge(e).tail) ||
            !reach.reaches(g.edge(e).head, g.sink()))
            throw WidthsError(WidthsErrorCode::UncoverableEdge,
                              "edge on no s-t walk: " + g.edge_label(e));
    }

    Condensation cond = condense(g);
    std::vector<Weight> unit(g.edge_count(), 0);
    GadgetDag dag = build_gadget_dag(g, cond, unit);

    std::vector<char> required(dag.edges.size(), 0);
    {
        std::vector<char> comp_required(cond.component_count, 0);
        std::vector<char> inter_required(g.edge_count(), 0);
        for (EdgeId e : eprime) {
            const Edge& ed = g.edge(e);
            if (cond.scc_id[ed.tail] == cond.scc_id[ed.head])
                comp_required[cond.scc_id[ed.tail]] = 1;
            else
                inter_required[e] = 1;
        }
        for (size_t i = 0; i < dag.edges.size(); ++i) {
            const auto& ge = dag.edges[i];
            if (ge.kind == GadgetDag::EdgeKind::SccGadget && comp_required[ge.comp])
                required[i] = 1;
            else if (ge.kind == GadgetDag::EdgeKind::InterFirst && inter_required[ge.back])
                required[i] = 1;
        }
    }

    // Feasible flow: route one unit through each required edge along a
    // source-to-edge and edge-to-sink path in the gadget DAG.
    int nodes = dag.node_count;
    std::vector<std::vector<std::pair<int, int>>> out(nodes), in(nodes);
    for (size_t i = 0; i < dag.edges.size(); ++i) {
        out[dag.edges[i].tail].emplace_back(dag.edges[i].head, static_cast<int>(i));
        in[dag.edges[i].head].emplace_back(dag.edges[i].tail, static_cast<int>(i));
    }
    auto bfs_parents = [nodes](const std::vector<std::vector<std::pair<int, int>>>& adj,
                               int start) {
        std::vector<int> via(nodes, -1);
        std::vector<char> seen(nodes, 0);
        std::queue<int> q;
        q.push(start);
        seen[start] = 1;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (auto [w, idx] : adj[v]) {
                if (!seen[w]) {
                    seen[w] = 1;
                    via[w] = idx;
                    q.push(w);
                }
            }
        }
        return via;
    };
    auto from_src = bfs_parents(out, dag.source_node);
    auto to_snk = bfs_parents(in, dag.sink_node);

    std::vector<EdgeRef> edges;
    std::vector<std::int64_t> feasible(dag.edges.size(), 0);
    for (size_t i = 0; i < dag.edges.size(); ++i)
        edges.push_back({dag.edges[i].tail, dag.edges[i].head, required[i] ? 1 : 0});
    for (size_t i = 0; i < dag.edges.size(); ++i) {
        if (!required[i]) continue;
        feasible[i] += 1;
        for (int v = dag.edges[i].tail; v != dag.source_node;) {
            int idx = from_src[v];
            feasible[idx] += 1;
            v = dag.edges[idx].tail;
        }
        for (int v = dag.edges[i].head; v != dag.sink_node;) {
            int idx = to_snk[v];
            feasible[idx] += 1;
            v = dag.edges[idx].head;
        }
    }

    std::int64_t value = min_flow_with_lower_bounds(nodes, edges, feasible, dag.source_node,
                                                    dag.sink_node);
    return static_cast<int>(value);
}

}  // namespace flowwalks
