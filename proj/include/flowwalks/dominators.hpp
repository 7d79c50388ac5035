// Copyright (c) flowwalks contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// s- and t-dominator trees (semi-NCA construction) and the extension
// machinery on top of them: dom_k ancestor lookup and ext(v), the
// concatenation of the s-tree root path with the t-tree root path.

#include <string>
#include <vector>

#include "flowwalks/graph.hpp"

namespace flowwalks {

enum class DominatorErrorCode { VertexNotInTree };

class DominatorError : public std::runtime_error {
  public:
    DominatorError(DominatorErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    DominatorErrorCode code() const { return code_; }

  private:
    DominatorErrorCode code_;
};

// Immutable after construction. Vertices outside the s-t core (not reachable
// from s or not reaching t) are pruned before construction and reported;
// dominance is undefined for them and they cannot lie on any s-t walk.
struct DominatorTree {
    Vertex root = -1;
    std::vector<Vertex> parent;   // immediate dominator, -1 for root and pruned
    std::vector<int> depth;       // -1 for pruned vertices
    std::vector<Vertex> pruned;   // vertices outside the s-t core

    bool contains(Vertex v) const { return depth[v] >= 0; }
    // k-th ancestor, clamped at the root when k exceeds the strict-dominator
    // count.
    Vertex dom_k(Vertex v, int k) const;
    bool is_ancestor(Vertex anc, Vertex v) const;
};

DominatorTree build_s_dominator_tree(const Graph& g);
DominatorTree build_t_dominator_tree(const Graph& g);

// Root-to-v path in the s-tree followed by the v-to-root path in the t-tree;
// v itself appears once. Starts at s, ends at t, no vertex occurs three times.
std::vector<Vertex> extension(const DominatorTree& s_tree, const DominatorTree& t_tree, Vertex v);

std::string dominator_tree_to_dot(const Graph& g, const DominatorTree& tree,
                                  const std::string& label);

}  // namespace flowwalks
