// Copyright (c) flowwalks contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Enumeration of all maximal C-safe sequences of walk covers. Vertices of C
// are marked blue in both dominator trees, the trees are restricted to the
// vertices appearing on extensions of blue vertices, C-univocal paths are
// collapsed, and every vertex that is a leaf in both collapsed trees yields
// one maximal sequence. Edge sets are handled through the midpoint transform.

#include <string>
#include <unordered_map>
#include <vector>

#include "flowwalks/dominators.hpp"
#include "flowwalks/graph.hpp"

namespace flowwalks {

enum class SafetyErrorCode { EmptyC, UnreachableCVertex };

class SafetyError : public std::runtime_error {
  public:
    SafetyError(SafetyErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    SafetyErrorCode code() const { return code_; }

  private:
    SafetyErrorCode code_;
};

struct BlueTrees {
    DominatorTree s_tree;  // full trees over the s-t core
    DominatorTree t_tree;
    std::vector<char> blue;      // per vertex
    std::vector<char> relevant;  // lies on the extension of some blue vertex

    // Restricted-tree structure over relevant vertices.
    std::vector<Vertex> s_parent, t_parent;
    std::vector<std::vector<Vertex>> s_children, t_children;

    // Collapsed C-univocal paths: representative (deepest member in the
    // t-tree) -> ordered stored sequence of the vertices above it on the
    // original t-tree path, up to and including the shallowest member.
    std::unordered_map<Vertex, std::vector<Vertex>> collapsed;
    std::vector<Vertex> leaves;  // common leaves of the collapsed trees
};

BlueTrees build_blue_trees(const Graph& g, const std::vector<Vertex>& c);

struct VertexSafeSequence {
    std::vector<Vertex> vertices;
    Vertex anchor;  // the blue vertex whose extension generated the sequence
};

// One maximal C-safe sequence per common leaf; no duplicates; output sorted
// by anchor name. O(m + total output length) after tree construction.
std::vector<VertexSafeSequence> maximal_safe_sequences(const Graph& g, const BlueTrees& bt);

struct EdgeSafeSequence {
    std::vector<EdgeId> edges;        // ordered, possibly with one repeat each
    EdgeId anchor;
    std::vector<Vertex> vertex_seq;   // guaranteed vertices flanking the edges
};

// C-safe sequences for an edge set C, via the midpoint-vertex route: every
// edge of C gets a midpoint vertex, vertex-level sequences are computed for
// the midpoints, and each extension is projected onto its midpoints.
std::vector<EdgeSafeSequence> edge_safe_sequences(const Graph& g, const std::vector<EdgeId>& c);

struct CoveringWeights {
    std::vector<Weight> weight;   // per EdgeId: length of a longest sequence containing it
    std::vector<int> witness;     // per EdgeId: index into the sequence list, -1 if none
};

CoveringWeights longest_covering_sequence(const Graph& g,
                                          const std::vector<EdgeSafeSequence>& seqs);

}  // namespace flowwalks
