// Copyright (c) flowwalks contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Maximum-weight edge antichains in general graphs via the SCC-gadget
// reduction to a DAG, solved as a minimum flow with lower bounds, plus the
// minimum walk-cover size used to pick k.

#include <string>
#include <vector>

#include "flowwalks/graph.hpp"

namespace flowwalks {

enum class WidthsErrorCode { EmptyEdgeSet, UncoverableEdge };

class WidthsError : public std::runtime_error {
  public:
    WidthsError(WidthsErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    WidthsErrorCode code() const { return code_; }

  private:
    WidthsErrorCode code_;
};

struct Antichain {
    std::vector<EdgeId> edges;  // pairwise unreachable, positive weight
    Weight total_weight = 0;
};

struct GadgetDag {
    enum class EdgeKind { SccGadget, InterFirst, InterSecond };
    struct GEdge {
        int tail;
        int head;
        Weight weight;
        int lower;
        EdgeKind kind;
        // SccGadget: a maximum-weight internal edge of the component (-1 if
        // none allowed); InterFirst: the original inter-SCC edge; InterSecond:
        // -1.
        EdgeId back;
        int comp;  // SccGadget only, else -1
    };

    int node_count = 0;
    int core_node_count = 0;  // in/out + trivial nodes only; <= 2|V|
    std::vector<GEdge> edges;
    std::vector<int> comp_in, comp_out;  // per component of the condensation
    int source_node = -1;                // node of scc(s)
    int sink_node = -1;                  // node of scc(t)
};

// Builds the acyclic reduction: every non-trivial SCC becomes a single
// gadget edge weighted by its heaviest internal edge; every inter-SCC edge
// becomes a 2-edge path through a private vertex with the weight on the
// first half. `allowed` (optional, per EdgeId) masks edges out of the weight
// computation. Linear time.
GadgetDag build_gadget_dag(const Graph& g, const Condensation& cond,
                           const std::vector<Weight>& edge_weight,
                           const std::vector<char>& allowed = {});

// Maximum-weight antichain of edges, weights >= 0. Ties between optimal
// antichains are broken toward the lexicographically smallest edge set under
// vertex-name order. Zero-weight edges are never members.
Antichain max_weight_antichain(const Graph& g, const std::vector<Weight>& edge_weight);

// Minimum number of s-t walks covering every edge of eprime. Throws
// UncoverableEdge if some edge of eprime lies on no s-t walk.
int min_walk_cover_size(const Graph& g, const std::vector<EdgeId>& eprime);

}  // namespace flowwalks
