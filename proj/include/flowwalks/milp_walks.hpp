// Copyright (c) flowwalks contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// MILP building blocks shared by every decomposition model: the per-walk
// encoding (integer traversal counts x, tree indicators y, distance-like
// variables d), power-of-two product linearization, subset constraints, and
// the safety-driven variable fixing derived from a maximum-weight antichain
// of safe sequences.

#include <optional>
#include <string>
#include <vector>

#include "flowwalks/graph.hpp"
#include "flowwalks/safety.hpp"
#include "flowwalks/solver.hpp"
#include "flowwalks/widths.hpp"

namespace flowwalks {

enum class FixingErrorCode { AntichainLargerThanK, ConflictingFix, InvalidBound, EmptySubset };

class FixingError : public std::runtime_error {
  public:
    FixingError(FixingErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    FixingErrorCode code() const { return code_; }

  private:
    FixingErrorCode code_;
};

// Variables of one walk block; indices are per EdgeId / Vertex.
struct WalkBlock {
    int walk_index = 0;
    std::vector<milp::VarId> x;  // traversal counts, range [0, B(uv)]
    std::vector<milp::VarId> y;  // reachability-tree indicators
    std::vector<milp::VarId> d;  // distance-like, range [0, |V|]
};

// Emits for walk i: flow conservation (net -1 at s, +1 at t, 0 elsewhere),
// y <= x, in-sum <= M1 * in-y with M1 = indeg(v) * max B, at most one
// selected in-edge per vertex, and d_v >= d_u + 1 - M2 (1 - y_uv) with
// M2 = |V|. Feasibility of the block is equivalent to x encoding an s-t walk.
WalkBlock add_walk_block(milp::Model& model, const Graph& g, int walk_index,
                         const std::vector<Weight>& traversal_bound);

// Cached power-of-two bit expansions, one per x variable.
class BitExpansion {
  public:
    // x = sum 2^j b_j. A variable with upper bound 1 acts as its own bit;
    // a variable fixed to 0 has no bits at all.
    const std::vector<milp::VarId>& bits_for(milp::Model& model, milp::VarId x);

  private:
    std::unordered_map<milp::VarId, std::vector<milp::VarId>> cache_;
};

// Linearized product x * y where y ranges over [y_lo, y_hi]: per bit b_j a
// product variable z_j with the four sandwich constraints; returns
// sum 2^j z_j. Fixed-to-zero x yields an empty expression and binary x skips
// the bit expansion entirely.
milp::LinExpr linearize_product(milp::Model& model, BitExpansion& bits, milp::VarId x,
                                milp::VarId y, Weight y_lo, Weight y_hi);

// Subset constraints: for every S_j there must be a walk containing all of
// its edges. Presence binaries p <= x <= M3 p, indicators s_ij with
// sum_{uv in S_j} p >= |S_j| s_ij and sum_i s_ij >= 1.
void add_subset_constraints(milp::Model& model, const Graph& g,
                            const std::vector<WalkBlock>& blocks,
                            const std::vector<std::vector<EdgeId>>& subsets, Weight max_bound);

struct FixingPlan {
    struct FixOne {
        EdgeId edge;
        int walk;
        Weight count;  // occurrence count in the witness sequence
        bool exact;    // inter-SCC edges: exactly once
    };
    struct FixZero {
        EdgeId edge;
        int walk;
    };
    std::vector<FixOne> fix_one;
    std::vector<FixZero> fix_zero;
};

// Assigns the witness sequence of the i-th antichain edge to walk i: its
// edges are pinned to exactly 1 (inter-SCC) or at least their occurrence
// count (intra-SCC); every edge that could lie neither before, after, nor
// between consecutive sequence edges is fixed to 0 for that walk. Edges
// incident to an auxiliary source/sink are never fixed to 0.
FixingPlan plan_fixing(const Graph& g, const Condensation& cond, const ReachabilityIndex& reach,
                       const Antichain& antichain, const std::vector<EdgeSafeSequence>& seqs,
                       const std::vector<int>& witness, int k);

// Applies a plan to built walk blocks and tightens every inter-SCC x to a
// binary domain. Call before creating linearizations so that fixed-to-zero
// variables never grow bits.
void apply_fixing(milp::Model& model, const Graph& g, const Condensation& cond,
                  const std::vector<WalkBlock>& blocks, const FixingPlan& plan);

}  // namespace flowwalks
