// Copyright (c) flowwalks contributors.
// SPDX-License-Identifier: Apache-2.0
#include "flowwalks/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace flowwalks {

namespace {

std::int64_t pair_key(Vertex tail, Vertex head) {
    return (static_cast<std::int64_t>(tail) << 32) | static_cast<std::uint32_t>(head);
}

}  // namespace

Graph Graph::from_edges(const WeightedEdgeList& edges, const std::string& source,
                        const std::string& sink,
                        const std::vector<std::string>& extra_vertices) {
    Graph g;
    auto intern = [&g](const std::string& name) -> Vertex {
        auto it = g.name_to_id_.find(name);
        if (it != g.name_to_id_.end()) return it->second;
        Vertex v = static_cast<Vertex>(g.names_.size());
        g.names_.push_back(name);
        g.name_to_id_.emplace(name, v);
        return v;
    };

    if (source == sink)
        throw GraphError(GraphErrorCode::SourceEqualsSink, "source and sink must differ");
    g.source_ = intern(source);
    g.sink_ = intern(sink);
    for (const auto& v : extra_vertices) intern(v);
    for (const auto& [tail, head, weight] : edges) {
        intern(tail);
        intern(head);
    }

    g.out_.resize(g.names_.size());
    g.in_.resize(g.names_.size());
    for (const auto& [tail_name, head_name, weight] : edges) {
        Vertex tail = g.name_to_id_.at(tail_name);
        Vertex head = g.name_to_id_.at(head_name);
        if (weight < 0)
            throw GraphError(GraphErrorCode::NegativeWeight,
                             "negative weight on edge " + tail_name + ">" + head_name);
        if (head == g.source_)
            throw GraphError(GraphErrorCode::SourceHasInEdge,
                             "edge into source: " + tail_name + ">" + head_name);
        if (tail == g.sink_)
            throw GraphError(GraphErrorCode::SinkHasOutEdge,
                             "edge out of sink: " + tail_name + ">" + head_name);
        auto key = pair_key(tail, head);
        if (g.edge_index_.count(key))
            throw GraphError(GraphErrorCode::DuplicateEdge,
                             "duplicate edge " + tail_name + ">" + head_name);
        EdgeId e = static_cast<EdgeId>(g.edges_.size());
        g.edges_.push_back({tail, head, weight});
        g.edge_index_.emplace(key, e);
        g.out_[tail].push_back(e);
        g.in_[head].push_back(e);
    }
    g.aux_.assign(g.edges_.size(), 0);
    return g;
}

Vertex Graph::vertex(const std::string& name) const {
    auto it = name_to_id_.find(name);
    if (it == name_to_id_.end())
        throw GraphError(GraphErrorCode::UnknownVertex, "unknown vertex " + name);
    return it->second;
}

std::optional<Vertex> Graph::find_vertex(const std::string& name) const {
    auto it = name_to_id_.find(name);
    if (it == name_to_id_.end()) return std::nullopt;
    return it->second;
}

std::optional<EdgeId> Graph::find_edge(Vertex tail, Vertex head) const {
    auto it = edge_index_.find(pair_key(tail, head));
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
}

EdgeId Graph::edge_id(const std::string& tail, const std::string& head) const {
    auto e = find_edge(vertex(tail), vertex(head));
    if (!e)
        throw GraphError(GraphErrorCode::EdgeNotInGraph, "no edge " + tail + ">" + head);
    return *e;
}

std::string Graph::edge_label(EdgeId e) const {
    return names_[edges_[e].tail] + ">" + names_[edges_[e].head];
}

Condensation condense(const Graph& g) {
    const int n = g.vertex_count();
    Condensation c;
    c.scc_id.assign(n, -1);

    // Iterative Tarjan.
    std::vector<int> index(n, -1), low(n, 0), on_stack(n, 0);
    std::vector<Vertex> stack;
    std::vector<std::pair<Vertex, size_t>> call;
    int next_index = 0;
    std::vector<std::vector<Vertex>> raw_components;

    for (Vertex start = 0; start < n; ++start) {
        if (index[start] != -1) continue;
        call.emplace_back(start, 0);
        while (!call.empty()) {
            auto& [v, ei] = call.back();
            if (ei == 0) {
                index[v] = low[v] = next_index++;
                stack.push_back(v);
                on_stack[v] = 1;
            }
            bool descended = false;
            const auto& outs = g.out_edges(v);
            while (ei < outs.size()) {
                Vertex w = g.edge(outs[ei]).head;
                ++ei;
                if (index[w] == -1) {
                    call.emplace_back(w, 0);
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], index[w]);
            }
            if (descended) continue;
            if (low[v] == index[v]) {
                raw_components.emplace_back();
                Vertex w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    raw_components.back().push_back(w);
                } while (w != v);
            }
            Vertex done = v;
            call.pop_back();
            if (!call.empty()) {
                Vertex parent = call.back().first;
                low[parent] = std::min(low[parent], low[done]);
            }
        }
    }

    // Tarjan emits components in reverse topological order; renumber so that
    // component ids increase along the DAG.
    int m = static_cast<int>(raw_components.size());
    c.component_count = m;
    c.members.resize(m);
    for (int i = 0; i < m; ++i) {
        int id = m - 1 - i;
        c.members[id] = raw_components[i];
        for (Vertex v : raw_components[i]) c.scc_id[v] = id;
    }

    c.is_trivial.assign(m, 1);
    c.dag_out.assign(m, {});
    std::vector<int> seen(m, -1);
    for (int comp = 0; comp < m; ++comp) {
        for (Vertex v : c.members[comp]) {
            for (EdgeId e : g.out_edges(v)) {
                int to = c.scc_id[g.edge(e).head];
                if (to == comp) {
                    c.is_trivial[comp] = 0;
                } else if (seen[to] != comp) {
                    seen[to] = comp;
                    c.dag_out[comp].push_back(to);
                }
            }
        }
        std::sort(c.dag_out[comp].begin(), c.dag_out[comp].end());
    }
    c.topo_order.resize(m);
    for (int i = 0; i < m; ++i) c.topo_order[i] = i;
    return c;
}

ReachabilityIndex::ReachabilityIndex(const Graph& g) {
    Condensation c = condense(g);
    int m = c.component_count;
    scc_of_ = c.scc_id;
    words_ = static_cast<size_t>((m + 63) / 64);
    bits_.assign(static_cast<size_t>(m) * words_, 0);
    // Component ids are topologically ordered, so a reverse sweep sees all
    // successors before each component.
    for (int comp = m - 1; comp >= 0; --comp) {
        auto* row = &bits_[static_cast<size_t>(comp) * words_];
        row[comp >> 6] |= (1ull << (comp & 63));
        for (int succ : c.dag_out[comp]) {
            const auto* srow = &bits_[static_cast<size_t>(succ) * words_];
            for (size_t w = 0; w < words_; ++w) row[w] |= srow[w];
        }
    }
}

ReachabilityIndex reachability(const Graph& g) { return ReachabilityIndex(g); }

MidpointTransform midpoint_transform(const Graph& g, const std::vector<EdgeId>& c) {
    std::vector<char> in_c(g.edge_count(), 0);
    for (EdgeId e : c) {
        if (e < 0 || e >= g.edge_count())
            throw GraphError(GraphErrorCode::EdgeNotInGraph, "edge id out of range");
        in_c[e] = 1;
    }

    auto midpoint_name = [&g](EdgeId e) {
        std::string base = "mid:" + g.edge_label(e);
        while (g.find_vertex(base)) base += "'";
        return base;
    };

    WeightedEdgeList edges;
    std::vector<std::pair<EdgeId, std::string>> midpoints;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        const Edge& ed = g.edge(e);
        if (!in_c[e]) {
            edges.emplace_back(g.name(ed.tail), g.name(ed.head), ed.weight);
            continue;
        }
        std::string mid = midpoint_name(e);
        edges.emplace_back(g.name(ed.tail), mid, ed.weight);
        edges.emplace_back(mid, g.name(ed.head), 0);
        midpoints.emplace_back(e, mid);
    }

    MidpointTransform result{Graph::from_edges(edges, g.name(g.source()), g.name(g.sink())),
                             std::vector<Vertex>(g.edge_count(), -1),
                             {},
                             {}};
    result.original_vertex.assign(result.graph.vertex_count(), -1);
    for (Vertex v = 0; v < result.graph.vertex_count(); ++v) {
        if (auto orig = g.find_vertex(result.graph.name(v))) result.original_vertex[v] = *orig;
    }
    for (const auto& [e, mid] : midpoints) {
        Vertex mv = result.graph.vertex(mid);
        result.midpoint_of_edge[e] = mv;
        result.edge_of_midpoint.emplace(mv, e);
        result.original_vertex[mv] = -1;
    }
    return result;
}

CompactedGraph compact_unitigs(const Graph& g, const std::vector<std::string>& keep) {
    std::vector<char> protected_vertex(g.vertex_count(), 0);
    for (const auto& name : keep) {
        if (auto v = g.find_vertex(name)) protected_vertex[*v] = 1;
    }
    auto internal = [&](Vertex v) {
        if (protected_vertex[v]) return false;
        if (g.in_edges(v).size() != 1 || g.out_edges(v).size() != 1) return false;
        // A self-loop makes both degree counts 1 but the vertex is a real
        // branch point for walks.
        return g.edge(g.in_edges(v)[0]).tail != v;
    };

    WeightedEdgeList edges;
    std::vector<std::vector<std::string>> expansion;
    std::vector<char> consumed(g.edge_count(), 0);
    auto chain_from = [&](EdgeId e) {
        std::vector<std::string> path{g.name(g.edge(e).tail)};
        Vertex start = g.edge(e).tail;
        EdgeId cur = e;
        Weight w = g.edge(e).weight;
        while (true) {
            consumed[cur] = 1;
            path.push_back(g.name(g.edge(cur).head));
            Vertex head = g.edge(cur).head;
            if (!internal(head) || head == start) break;
            EdgeId next = g.out_edges(head)[0];
            if (consumed[next]) break;
            cur = next;
        }
        edges.emplace_back(path.front(), path.back(), w);
        expansion.push_back(std::move(path));
    };
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (consumed[e] || internal(g.edge(e).tail)) continue;
        chain_from(e);
    }
    // Cycles made entirely of internal vertices have no chain start; break
    // each at an arbitrary edge, yielding a self-loop.
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (!consumed[e]) chain_from(e);
    }

    CompactedGraph cg{Graph::from_edges(edges, g.name(g.source()), g.name(g.sink())), {}};
    // from_edges preserves input edge order.
    cg.expansion = std::move(expansion);
    return cg;
}

std::vector<std::string> expand_walk(const CompactedGraph& cg, const std::vector<Vertex>& walk) {
    std::vector<std::string> out;
    if (walk.empty()) return out;
    out.push_back(cg.graph.name(walk[0]));
    for (size_t i = 0; i + 1 < walk.size(); ++i) {
        auto e = cg.graph.find_edge(walk[i], walk[i + 1]);
        if (!e)
            throw GraphError(GraphErrorCode::EdgeNotInGraph,
                             "walk step is not an edge of the compacted graph");
        const auto& path = cg.expansion[*e];
        out.insert(out.end(), path.begin() + 1, path.end());
    }
    return out;
}

NormalizedGraph normalize_sources_sinks(const WeightedEdgeList& edges,
                                        const std::vector<std::string>& starts,
                                        const std::vector<std::string>& ends) {
    if (starts.empty()) throw GraphError(GraphErrorCode::EmptyStartSet, "empty start set");
    if (ends.empty()) throw GraphError(GraphErrorCode::EmptyEndSet, "empty end set");

    std::unordered_map<std::string, char> used;
    for (const auto& [tail, head, w] : edges) {
        used[tail] = 1;
        used[head] = 1;
    }
    for (const auto& v : starts) used[v] = 1;
    for (const auto& v : ends) used[v] = 1;
    auto fresh = [&used](std::string base) {
        while (used.count(base)) base += "_";
        used[base] = 1;
        return base;
    };
    NormalizedGraph result;
    result.source_name = fresh("__source__");
    result.sink_name = fresh("__sink__");

    WeightedEdgeList all = edges;
    size_t first_aux = all.size();
    std::vector<std::string> sorted_starts = starts, sorted_ends = ends;
    std::sort(sorted_starts.begin(), sorted_starts.end());
    sorted_starts.erase(std::unique(sorted_starts.begin(), sorted_starts.end()),
                        sorted_starts.end());
    std::sort(sorted_ends.begin(), sorted_ends.end());
    sorted_ends.erase(std::unique(sorted_ends.begin(), sorted_ends.end()), sorted_ends.end());
    for (const auto& v : sorted_starts) all.emplace_back(result.source_name, v, 0);
    for (const auto& v : sorted_ends) all.emplace_back(v, result.sink_name, 0);

    result.graph = Graph::from_edges(all, result.source_name, result.sink_name);
    for (EdgeId e = static_cast<EdgeId>(first_aux); e < result.graph.edge_count(); ++e) {
        result.graph.mark_auxiliary(e);
        result.auxiliary_edges.push_back(e);
    }
    return result;
}

Graph parse_graph_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    WeightedEdgeList edges;
    std::string source, sink;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ls(line);
            std::string tag, value;
            ls >> tag >> value;
            if (tag == "#source") source = value;
            else if (tag == "#sink") sink = value;
            continue;
        }
        size_t t1 = line.find('\t');
        size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t2 == std::string::npos)
            throw GraphError(GraphErrorCode::ParseError,
                             "line " + std::to_string(lineno) + ": expected tail<TAB>head<TAB>weight");
        std::string tail = line.substr(0, t1);
        std::string head = line.substr(t1 + 1, t2 - t1 - 1);
        std::string wstr = line.substr(t2 + 1);
        Weight w = 0;
        try {
            size_t pos = 0;
            w = std::stoll(wstr, &pos);
            if (pos != wstr.size()) throw std::invalid_argument(wstr);
        } catch (const std::exception&) {
            throw GraphError(GraphErrorCode::ParseError,
                             "line " + std::to_string(lineno) + ": bad weight '" + wstr + "'");
        }
        edges.emplace_back(tail, head, w);
    }
    if (source.empty() || sink.empty())
        throw GraphError(GraphErrorCode::ParseError, "missing #source or #sink header");
    return Graph::from_edges(edges, source, sink);
}

Graph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphError(GraphErrorCode::ParseError, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_graph_text(buf.str());
}

std::string graph_to_text(const Graph& g) {
    std::ostringstream out;
    out << "#source " << g.name(g.source()) << "\n";
    out << "#sink " << g.name(g.sink()) << "\n";
    for (const Edge& e : g.edges())
        out << g.name(e.tail) << "\t" << g.name(e.head) << "\t" << e.weight << "\n";
    return out.str();
}

}  // namespace flowwalks
