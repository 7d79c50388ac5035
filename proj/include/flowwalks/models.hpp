// Copyright (c) flowwalks contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// The three decomposition problems over s-t walks: k-FlowDecomposition
// (exact weighted cover of E'), k-LeastAbsErrors (minimize total absolute
// deviation) and k-MinPathError (per-walk slacks bounding deviations),
// assembled from the walk blocks with optional safety-based variable fixing.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "flowwalks/milp_walks.hpp"

namespace flowwalks {

enum class ModelKind { FD, LAE, MPE };

enum class ModelErrorCode { NotAWalkMultiset, InfeasibleCover };

class ModelError : public std::runtime_error {
  public:
    ModelError(ModelErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ModelErrorCode code() const { return code_; }

  private:
    ModelErrorCode code_;
};

struct DecompositionSpec {
    Graph graph;
    std::vector<EdgeId> eprime;                 // objective edge set E'
    std::vector<std::vector<EdgeId>> subsets;   // family S, possibly empty
    ModelKind kind = ModelKind::FD;
    std::optional<int> k;                       // empty = AUTO
    bool safety_enabled = true;
    bool strict_positive_weights = false;       // LAE/MPE: force w_i >= 1
    bool keep_zero_weight_walks = false;
    Weight traversal_cap = 8;                   // LAE/MPE per-edge bound cap
    double time_limit_seconds = 300.0;
    double rel_gap = 0.0;
    std::string solver;                         // "" = FLOWWALKS_SOLVER / highs
};

enum class SolutionStatus { Optimal, Feasible, Infeasible, TimedOut };

struct SolutionStats {
    int fixed_one = 0;
    int fixed_zero = 0;
    int antichain_size = 0;
    double prep_seconds = 0.0;
    double solve_seconds = 0.0;
    int k = 0;
    bool bound_hit = false;  // some traversal count reached its cap
};

struct Solution {
    SolutionStatus status = SolutionStatus::Infeasible;
    std::vector<std::vector<Vertex>> walks;  // each s -> t
    std::vector<Weight> weights;
    std::vector<Weight> slacks;  // MPE only
    std::int64_t objective = 0;
    SolutionStats stats;
};

Solution solve_k_fd(const DecompositionSpec& spec);
Solution solve_k_lae(const DecompositionSpec& spec);
Solution solve_k_mpe(const DecompositionSpec& spec);

// Smallest k for which k-FD is feasible, iterating upward from the
// walk-cover lower bound over {e in E' : f(e) > 0}.
Solution solve_min_flow_decomp(const DecompositionSpec& spec);

// Dispatch on spec.kind, honoring AUTO k (FD iterates; LAE/MPE use the
// minimum walk-cover size of E').
Solution solve(const DecompositionSpec& spec);

// Orders an edge multiset into an s-t walk (Euler-style traversal consuming
// each edge exactly counts[e] times). Throws NotAWalkMultiset when the
// multiset violates the conservation or s-reachability conditions.
std::vector<Vertex> extract_walk(const Graph& g, const std::vector<Weight>& counts);

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> violations;
    std::vector<std::pair<EdgeId, std::int64_t>> residuals;  // per E' edge

    void fail(std::string msg) {
        ok = false;
        violations.push_back(std::move(msg));
    }
};

// Recomputes every constraint from the walks alone, ignoring solver
// variables: walk validity, the per-model objective/feasibility conditions on
// E', and subset coverage.
ValidationReport validate_solution(const DecompositionSpec& spec, const Solution& sol);

nlohmann::json solution_to_json(const Graph& g, const Solution& sol);

}  // namespace flowwalks
