// Copyright (c) flowwalks contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Directed s-t graphs with non-negative integer edge weights, plus the
// structural transformations the rest of the library builds on: SCC
// condensation, reachability queries, edge midpoint insertion, unitig
// compaction and multi-source/sink normalization.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace flowwalks {

using Vertex = int;
using EdgeId = int;
using Weight = std::int64_t;

enum class GraphErrorCode {
    DuplicateEdge,
    SourceHasInEdge,
    SinkHasOutEdge,
    NegativeWeight,
    SourceEqualsSink,
    UnknownVertex,
    EdgeNotInGraph,
    EmptyStartSet,
    EmptyEndSet,
    ParseError,
};

class GraphError : public std::runtime_error {
  public:
    GraphError(GraphErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    GraphErrorCode code() const { return code_; }

  private:
    GraphErrorCode code_;
};

struct Edge {
    Vertex tail;
    Vertex head;
    Weight weight;
};

using WeightedEdgeList = std::vector<std::tuple<std::string, std::string, Weight>>;

// Immutable after construction; safe to share across threads.
class Graph {
  public:
    // Validates the s-t graph invariants: no parallel edges, s has no
    // in-edges, t has no out-edges, weights >= 0. Self-loops are allowed
    // except at s or t (where they would violate the degree constraints).
    static Graph from_edges(const WeightedEdgeList& edges, const std::string& source,
                            const std::string& sink,
                            const std::vector<std::string>& extra_vertices = {});

    int vertex_count() const { return static_cast<int>(names_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    Vertex source() const { return source_; }
    Vertex sink() const { return sink_; }

    const std::string& name(Vertex v) const { return names_[v]; }
    Vertex vertex(const std::string& name) const;
    std::optional<Vertex> find_vertex(const std::string& name) const;

    const Edge& edge(EdgeId e) const { return edges_[e]; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::optional<EdgeId> find_edge(Vertex tail, Vertex head) const;
    EdgeId edge_id(const std::string& tail, const std::string& head) const;

    const std::vector<EdgeId>& out_edges(Vertex v) const { return out_[v]; }
    const std::vector<EdgeId>& in_edges(Vertex v) const { return in_[v]; }

    // Edges introduced by normalize_sources_sinks; they carry weight 0 and
    // are excluded from objective edge sets.
    bool is_auxiliary(EdgeId e) const { return aux_[e]; }
    void mark_auxiliary(EdgeId e) { aux_[e] = true; }

    std::string edge_label(EdgeId e) const;

  private:
    Graph() = default;

    std::vector<std::string> names_;
    std::unordered_map<std::string, Vertex> name_to_id_;
    std::vector<Edge> edges_;
    std::vector<std::vector<EdgeId>> out_;
    std::vector<std::vector<EdgeId>> in_;
    std::vector<char> aux_;
    std::unordered_map<std::int64_t, EdgeId> edge_index_;
    Vertex source_ = -1;
    Vertex sink_ = -1;
};

struct Condensation {
    std::vector<int> scc_id;                     // per vertex of G
    int component_count = 0;
    std::vector<char> is_trivial;                // component has no internal edge
    std::vector<std::vector<Vertex>> members;    // per component
    std::vector<std::vector<int>> dag_out;       // component adjacency, merged edges
    std::vector<int> topo_order;                 // components in topological order

    bool same_component(Vertex u, Vertex v) const { return scc_id[u] == scc_id[v]; }
    bool is_inter_scc(const Edge& e) const { return scc_id[e.tail] != scc_id[e.head]; }
};

// Tarjan SCCs; component ids are assigned in topological order of the
// condensation DAG. Linear time.
Condensation condense(const Graph& g);

// Dense transitive closure over the condensation, bitset per component.
// Built once, queried many times; reaches() is reflexive and transitive.
class ReachabilityIndex {
  public:
    explicit ReachabilityIndex(const Graph& g);

    bool reaches(Vertex u, Vertex v) const {
        int a = scc_of_[u], b = scc_of_[v];
        return (bits_[static_cast<size_t>(a) * words_ + (b >> 6)] >> (b & 63)) & 1u;
    }
    // Edge e can precede edge f on a walk: head(e) reaches tail(f).
    bool edge_reaches(const Edge& e, const Edge& f) const { return reaches(e.head, f.tail); }

  private:
    std::vector<int> scc_of_;
    size_t words_ = 0;
    std::vector<std::uint64_t> bits_;
};

ReachabilityIndex reachability(const Graph& g);

struct MidpointTransform {
    Graph graph;
    std::vector<Vertex> midpoint_of_edge;     // per original EdgeId, -1 if not in C
    std::unordered_map<Vertex, EdgeId> edge_of_midpoint;
    std::vector<Vertex> original_vertex;      // per transformed vertex, -1 for midpoints
};

// Replaces every edge uv in C by u -> v_e -> v with the weight carried on the
// first half. The midpoint <-> edge mapping is a bijection on C.
MidpointTransform midpoint_transform(const Graph& g, const std::vector<EdgeId>& c);

struct CompactedGraph {
    Graph graph;
    // Per compacted EdgeId: the full original vertex path it stands for
    // (length >= 2; plain copied edges have length 2).
    std::vector<std::vector<std::string>> expansion;
};

// Contracts unitigs: maximal paths whose internal vertices have in-degree and
// out-degree exactly 1 and no self-loop. Vertices listed in `keep` are never
// treated as internal. The compacted edge inherits the first edge's weight.
CompactedGraph compact_unitigs(const Graph& g, const std::vector<std::string>& keep = {});

// Expands a walk over a compacted graph back to original vertex names.
std::vector<std::string> expand_walk(const CompactedGraph& cg, const std::vector<Vertex>& walk);

struct NormalizedGraph {
    Graph graph;
    std::vector<EdgeId> auxiliary_edges;
    std::string source_name;
    std::string sink_name;
};

// Wraps a multi-source/multi-sink edge list with a fresh global source s and
// sink t: s -> each start, each end -> t, all with weight 0 and flagged
// auxiliary.
NormalizedGraph normalize_sources_sinks(const WeightedEdgeList& edges,
                                        const std::vector<std::string>& starts,
                                        const std::vector<std::string>& ends);

// Text format: one `tail<TAB>head<TAB>weight` record per line, plus
// `#source <id>` and `#sink <id>` header lines. Other `#` lines are ignored.
Graph parse_graph_text(const std::string& text);
Graph load_graph_file(const std::string& path);
std::string graph_to_text(const Graph& g);

}  // namespace flowwalks
