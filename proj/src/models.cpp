// Copyright (c) flowwalks contributors.
// SPDX-License-Identifier: Apache-2.0
#include "flowwalks/models.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace flowwalks {

using milp::LinExpr;
using milp::Model;
using milp::Rel;
using milp::Sense;
using milp::SolveStatus;
using milp::VarId;
using milp::VarType;

namespace {

struct Clock {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

Weight max_eprime_flow(const DecompositionSpec& spec) {
    Weight m = 0;
    for (EdgeId e : spec.eprime) m = std::max(m, spec.graph.edge(e).weight);
    return m;
}

// Safety cover set: FD and MPE solutions must cover exactly the E' edges
// with positive flow (zero-flow edges need no walk); LAE solutions are only
// forced through the subset-constraint edges.
std::vector<EdgeId> safety_cover_set(const DecompositionSpec& spec) {
    std::vector<EdgeId> c;
    if (spec.kind == ModelKind::LAE) {
        std::vector<char> seen(spec.graph.edge_count(), 0);
        for (const auto& subset : spec.subsets)
            for (EdgeId e : subset)
                if (!seen[e]) {
                    seen[e] = 1;
                    c.push_back(e);
                }
    } else {
        for (EdgeId e : spec.eprime)
            if (spec.graph.edge(e).weight > 0) c.push_back(e);
    }
    return c;
}

struct Prep {
    Condensation cond;
    std::optional<ReachabilityIndex> reach;
    std::vector<EdgeSafeSequence> seqs;
    CoveringWeights cw;
    Antichain antichain;
    double seconds = 0.0;
    bool cover_infeasible = false;  // a must-cover edge lies on no s-t walk
};

Prep prepare(const DecompositionSpec& spec) {
    Prep prep;
    Clock clock;
    prep.cond = condense(spec.graph);
    prep.reach.emplace(spec.graph);

    std::vector<EdgeId> c = safety_cover_set(spec);
    for (EdgeId e : c) {
        const Edge& ed = spec.graph.edge(e);
        if (!prep.reach->reaches(spec.graph.source(), ed.tail) ||
            !prep.reach->reaches(ed.head, spec.graph.sink())) {
            prep.cover_infeasible = true;
            prep.seconds = clock.seconds();
            return prep;
        }
    }
    if (spec.safety_enabled && !c.empty()) {
        prep.seqs = edge_safe_sequences(spec.graph, c);
        prep.cw = longest_covering_sequence(spec.graph, prep.seqs);
        prep.antichain = max_weight_antichain(spec.graph, prep.cw.weight);
    }
    prep.seconds = clock.seconds();
    return prep;
}

std::vector<Weight> traversal_bounds(const DecompositionSpec& spec) {
    const Graph& g = spec.graph;
    Weight def = std::min<Weight>(std::max<Weight>(1, max_eprime_flow(spec)),
                                  std::max<Weight>(1, spec.traversal_cap));
    std::vector<Weight> bound(g.edge_count(), def);
    if (spec.kind == ModelKind::FD) {
        for (EdgeId e : spec.eprime) bound[e] = std::max<Weight>(1, g.edge(e).weight);
    }
    return bound;
}

struct BuiltModel {
    Model model;
    std::vector<WalkBlock> blocks;
    std::vector<VarId> weight_vars;
    std::vector<VarId> slack_vars;
    std::vector<VarId> error_vars;
    std::vector<Weight> bounds;
};

BuiltModel build_model(const DecompositionSpec& spec, int k, const Prep& prep,
                       const FixingPlan* plan) {
    const Graph& g = spec.graph;
    BuiltModel built;
    built.bounds = traversal_bounds(spec);
    Model& model = built.model;
    model.params.time_limit_seconds = spec.time_limit_seconds;
    model.params.rel_gap = spec.rel_gap;

    for (int i = 0; i < k; ++i)
        built.blocks.push_back(add_walk_block(model, g, i, built.bounds));
    if (plan) apply_fixing(model, g, prep.cond, built.blocks, *plan);

    Weight weight_ub = max_eprime_flow(spec) + 1;
    Weight weight_lb = (spec.kind == ModelKind::FD || spec.strict_positive_weights) ? 1 : 0;
    for (int i = 0; i < k; ++i)
        built.weight_vars.push_back(model.add_var("w_" + std::to_string(i), VarType::Integer,
                                                  static_cast<double>(weight_lb),
                                                  static_cast<double>(weight_ub)));
    if (spec.kind == ModelKind::MPE) {
        for (int i = 0; i < k; ++i)
            built.slack_vars.push_back(model.add_var("rho_" + std::to_string(i),
                                                     VarType::Integer, 0,
                                                     static_cast<double>(weight_ub)));
    }

    BitExpansion bits;
    for (EdgeId e : spec.eprime) {
        Weight f = g.edge(e).weight;
        LinExpr covered;  // sum_i x_{e,i} * w_i
        for (int i = 0; i < k; ++i)
            covered.add(linearize_product(model, bits, built.blocks[i].x[e],
                                          built.weight_vars[i], weight_lb, weight_ub));
        std::string label = "e" + std::to_string(e);
        switch (spec.kind) {
            case ModelKind::FD:
                model.add_constr("fd_" + label, covered, Rel::EQ, static_cast<double>(f));
                break;
            case ModelKind::LAE: {
                VarId z = model.add_var("err_" + label, VarType::Integer, 0,
                                        static_cast<double>(f) +
                                            static_cast<double>(weight_ub) * k *
                                                static_cast<double>(built.bounds[e]));
                built.error_vars.push_back(z);
                LinExpr upper = covered;  // f - covered <= z
                upper.add(z, 1.0);
                model.add_constr("lae_hi_" + label, upper, Rel::GE, static_cast<double>(f));
                LinExpr lower = covered;  // covered - f <= z
                lower.add(z, -1.0);
                model.add_constr("lae_lo_" + label, lower, Rel::LE, static_cast<double>(f));
                break;
            }
            case ModelKind::MPE: {
                LinExpr slack;  // sum_i x_{e,i} * rho_i
                for (int i = 0; i < k; ++i)
                    slack.add(linearize_product(model, bits, built.blocks[i].x[e],
                                                built.slack_vars[i], 0, weight_ub));
                LinExpr upper = covered;  // f - covered <= slack
                upper.add(slack);
                model.add_constr("mpe_hi_" + label, upper, Rel::GE, static_cast<double>(f));
                LinExpr lower = covered;  // covered - f <= slack
                lower.add(slack, -1.0);
                model.add_constr("mpe_lo_" + label, lower, Rel::LE, static_cast<double>(f));
                break;
            }
        }
    }

    if (!spec.subsets.empty()) {
        Weight m3 = 1;
        for (Weight b : built.bounds) m3 = std::max(m3, b);
        add_subset_constraints(model, g, built.blocks, spec.subsets, m3);
    }

    LinExpr objective;
    if (spec.kind == ModelKind::LAE) {
        for (VarId z : built.error_vars) objective.add(z, 1.0);
    } else if (spec.kind == ModelKind::MPE) {
        for (VarId rho : built.slack_vars) objective.add(rho, 1.0);
    }
    model.set_objective(Sense::Minimize, objective);
    return built;
}

Solution infeasible_solution(const Prep& prep, int k) {
    Solution sol;
    sol.status = SolutionStatus::Infeasible;
    sol.stats.prep_seconds = prep.seconds;
    sol.stats.antichain_size = static_cast<int>(prep.antichain.edges.size());
    sol.stats.k = k;
    return sol;
}

Solution solve_with_k(const DecompositionSpec& spec, int k, const Prep& prep) {
    const Graph& g = spec.graph;
    if (prep.cover_infeasible)
        return infeasible_solution(prep, k);

    std::optional<FixingPlan> plan;
    if (spec.safety_enabled && !prep.antichain.edges.empty()) {
        if (static_cast<int>(prep.antichain.edges.size()) > k) {
            // More mutually unreachable must-cover edges than walks: the
            // model is infeasible regardless of fixing.
            return infeasible_solution(prep, k);
        }
        plan = plan_fixing(g, prep.cond, *prep.reach, prep.antichain, prep.seqs,
                           prep.cw.witness, k);
    }

    BuiltModel built = build_model(spec, k, prep, plan ? &*plan : nullptr);
    milp::SolveResult res = milp::shared_backend(spec.solver).solve(built.model);

    Solution sol;
    sol.stats.prep_seconds = prep.seconds;
    sol.stats.solve_seconds = res.wall_seconds;
    sol.stats.antichain_size = static_cast<int>(prep.antichain.edges.size());
    sol.stats.k = k;
    if (plan) {
        sol.stats.fixed_one = static_cast<int>(plan->fix_one.size());
        sol.stats.fixed_zero = static_cast<int>(plan->fix_zero.size());
    }

    switch (res.status) {
        case SolveStatus::Infeasible: sol.status = SolutionStatus::Infeasible; return sol;
        case SolveStatus::TimedOut: sol.status = SolutionStatus::TimedOut; return sol;
        case SolveStatus::Unbounded:
            throw milp::SolverError("decomposition model reported unbounded");
        case SolveStatus::Optimal:
        case SolveStatus::Feasible: break;
    }
    sol.status = res.status == SolveStatus::Optimal ? SolutionStatus::Optimal
                                                    : SolutionStatus::Feasible;

    std::vector<size_t> order;
    std::vector<std::vector<Vertex>> walks(k);
    std::vector<Weight> weights(k), slacks(k, 0);
    for (int i = 0; i < k; ++i) {
        std::vector<Weight> counts(g.edge_count(), 0);
        for (EdgeId e = 0; e < g.edge_count(); ++e) {
            counts[e] = res.value_int(built.blocks[i].x[e]);
            if (counts[e] == built.bounds[e] && built.bounds[e] > 1) sol.stats.bound_hit = true;
        }
        walks[i] = extract_walk(g, counts);
        weights[i] = res.value_int(built.weight_vars[i]);
        if (spec.kind == ModelKind::MPE) slacks[i] = res.value_int(built.slack_vars[i]);
        order.push_back(i);
    }

    // Drop parked walks (weight 0, and for MPE slack 0) unless asked to keep.
    if (spec.kind != ModelKind::FD && !spec.keep_zero_weight_walks) {
        order.erase(std::remove_if(order.begin(), order.end(),
                                   [&](size_t i) {
                                       return weights[i] == 0 &&
                                              (spec.kind != ModelKind::MPE || slacks[i] == 0);
                                   }),
                    order.end());
    }
    auto name_seq = [&](size_t i) {
        std::vector<std::string> names;
        for (Vertex v : walks[i]) names.push_back(g.name(v));
        return names;
    };
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (weights[a] != weights[b]) return weights[a] > weights[b];
        return name_seq(a) < name_seq(b);
    });
    for (size_t i : order) {
        sol.walks.push_back(walks[i]);
        sol.weights.push_back(weights[i]);
        if (spec.kind == ModelKind::MPE) sol.slacks.push_back(slacks[i]);
    }

    // Recompute the objective in exact integer arithmetic from the walks.
    std::int64_t objective = 0;
    if (spec.kind == ModelKind::LAE) {
        for (EdgeId e : spec.eprime) {
            std::int64_t covered = 0;
            for (size_t i = 0; i < sol.walks.size(); ++i) {
                std::int64_t uses = 0;
                for (size_t j = 0; j + 1 < sol.walks[i].size(); ++j)
                    if (g.edge(e).tail == sol.walks[i][j] && g.edge(e).head == sol.walks[i][j + 1])
                        ++uses;
                covered += uses * sol.weights[i];
            }
            objective += std::abs(g.edge(e).weight - covered);
        }
    } else if (spec.kind == ModelKind::MPE) {
        for (Weight rho : sol.slacks) objective += rho;
    }
    sol.objective = objective;
    if (std::abs(static_cast<double>(objective) - res.objective) > 1e-4)
        throw milp::SolverError("objective mismatch between solver and recomputation");
    return sol;
}

int auto_k(const DecompositionSpec& spec, const Prep& prep) {
    // LAE/MPE: the minimum number of walks needed to cover E' (restricted to
    // edges that lie on some s-t walk).
    std::vector<EdgeId> coverable;
    for (EdgeId e : spec.eprime) {
        const Edge& ed = spec.graph.edge(e);
        if (prep.reach->reaches(spec.graph.source(), ed.tail) &&
            prep.reach->reaches(ed.head, spec.graph.sink()))
            coverable.push_back(e);
    }
    if (coverable.empty()) return 1;
    return std::max(1, min_walk_cover_size(spec.graph, coverable));
}

}  // namespace

Solution solve_k_fd(const DecompositionSpec& spec) {
    if (!spec.k) return solve_min_flow_decomp(spec);
    Prep prep = prepare(spec);
    return solve_with_k(spec, *spec.k, prep);
}

Solution solve_min_flow_decomp(const DecompositionSpec& spec) {
    Prep prep = prepare(spec);
    if (prep.cover_infeasible) return infeasible_solution(prep, 0);

    std::vector<EdgeId> must_cover;
    for (EdgeId e : spec.eprime)
        if (spec.graph.edge(e).weight > 0) must_cover.push_back(e);
    int lower = must_cover.empty() ? 1 : min_walk_cover_size(spec.graph, must_cover);
    // Any feasible instance decomposes into at most one walk per positive E'
    // edge; past that the search is hopeless and the instance is reported
    // infeasible.
    int upper = std::max(lower, static_cast<int>(must_cover.size()) + 1);

    Solution last;
    for (int k = lower; k <= upper; ++k) {
        last = solve_with_k(spec, k, prep);
        if (last.status != SolutionStatus::Infeasible) return last;
    }
    return last;
}

Solution solve_k_lae(const DecompositionSpec& spec) {
    Prep prep = prepare(spec);
    int k = spec.k ? *spec.k : auto_k(spec, prep);
    return solve_with_k(spec, k, prep);
}

Solution solve_k_mpe(const DecompositionSpec& spec) {
    Prep prep = prepare(spec);
    int k = spec.k ? *spec.k : auto_k(spec, prep);
    return solve_with_k(spec, k, prep);
}

Solution solve(const DecompositionSpec& spec) {
    switch (spec.kind) {
        case ModelKind::FD: return solve_k_fd(spec);
        case ModelKind::LAE: return solve_k_lae(spec);
        case ModelKind::MPE: return solve_k_mpe(spec);
    }
    throw std::logic_error("unknown model kind");
}

std::vector<Vertex> extract_walk(const Graph& g, const std::vector<Weight>& counts) {
    const int n = g.vertex_count();
    std::int64_t total = 0;
    for (Vertex v = 0; v < n; ++v) {
        std::int64_t net = 0;
        for (EdgeId e : g.in_edges(v)) net += counts[e];
        for (EdgeId e : g.out_edges(v)) net -= counts[e];
        std::int64_t expect = v == g.source() ? -1 : (v == g.sink() ? 1 : 0);
        if (net != expect)
            throw ModelError(ModelErrorCode::NotAWalkMultiset,
                             "conservation violated at " + g.name(v));
    }
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (counts[e] < 0)
            throw ModelError(ModelErrorCode::NotAWalkMultiset, "negative count");
        total += counts[e];
    }

    std::vector<Weight> remaining = counts;
    std::vector<size_t> cursor(n, 0);
    std::vector<Vertex> stack{g.source()}, walk;
    while (!stack.empty()) {
        Vertex v = stack.back();
        const auto& outs = g.out_edges(v);
        while (cursor[v] < outs.size() && remaining[outs[cursor[v]]] == 0) ++cursor[v];
        if (cursor[v] == outs.size()) {
            walk.push_back(v);
            stack.pop_back();
        } else {
            EdgeId e = outs[cursor[v]];
            --remaining[e];
            stack.push_back(g.edge(e).head);
        }
    }
    std::reverse(walk.begin(), walk.end());
    if (static_cast<std::int64_t>(walk.size()) != total + 1)
        throw ModelError(ModelErrorCode::NotAWalkMultiset,
                         "multiset is not connected to the source");
    if (walk.back() != g.sink())
        throw ModelError(ModelErrorCode::NotAWalkMultiset, "walk does not end at the sink");
    return walk;
}

ValidationReport validate_solution(const DecompositionSpec& spec, const Solution& sol) {
    const Graph& g = spec.graph;
    ValidationReport report;
    if (sol.status != SolutionStatus::Optimal && sol.status != SolutionStatus::Feasible) {
        report.fail("no solution to validate");
        return report;
    }

    std::vector<std::vector<Weight>> walk_counts;
    for (size_t i = 0; i < sol.walks.size(); ++i) {
        const auto& walk = sol.walks[i];
        std::vector<Weight> counts(g.edge_count(), 0);
        if (walk.empty() || walk.front() != g.source() || walk.back() != g.sink())
            report.fail("walk " + std::to_string(i) + " is not an s-t walk");
        for (size_t j = 0; j + 1 < walk.size(); ++j) {
            auto e = g.find_edge(walk[j], walk[j + 1]);
            if (!e) {
                report.fail("walk " + std::to_string(i) + " uses a non-edge");
                break;
            }
            ++counts[*e];
        }
        walk_counts.push_back(std::move(counts));
    }

    if (spec.kind == ModelKind::FD) {
        for (Weight w : sol.weights)
            if (w < 1) report.fail("flow decomposition weight below 1");
    }
    if (spec.strict_positive_weights) {
        for (Weight w : sol.weights)
            if (w < 1) report.fail("weight below 1 with strict positive weights");
    }

    std::int64_t lae_total = 0, slack_total = 0;
    for (EdgeId e : spec.eprime) {
        std::int64_t covered = 0, slack_cap = 0;
        for (size_t i = 0; i < walk_counts.size(); ++i) {
            covered += walk_counts[i][e] * sol.weights[i];
            if (spec.kind == ModelKind::MPE)
                slack_cap += walk_counts[i][e] * sol.slacks[i];
        }
        std::int64_t residual = g.edge(e).weight - covered;
        report.residuals.emplace_back(e, residual);
        switch (spec.kind) {
            case ModelKind::FD:
                if (residual != 0)
                    report.fail("flow mismatch on " + g.edge_label(e) + ": residual " +
                                std::to_string(residual));
                break;
            case ModelKind::LAE: lae_total += std::abs(residual); break;
            case ModelKind::MPE:
                if (std::abs(residual) > slack_cap)
                    report.fail("slack bound violated on " + g.edge_label(e));
                break;
        }
    }
    if (spec.kind == ModelKind::LAE && lae_total != sol.objective)
        report.fail("objective " + std::to_string(sol.objective) +
                    " does not match recomputed " + std::to_string(lae_total));
    if (spec.kind == ModelKind::MPE) {
        for (Weight rho : sol.slacks) slack_total += rho;
        if (slack_total != sol.objective)
            report.fail("objective does not match total slack");
    }

    for (size_t j = 0; j < spec.subsets.size(); ++j) {
        bool covered = false;
        for (const auto& counts : walk_counts) {
            bool all = true;
            for (EdgeId e : spec.subsets[j]) all &= counts[e] >= 1;
            covered |= all;
        }
        if (!covered) report.fail("subset constraint " + std::to_string(j) + " uncovered");
    }
    return report;
}

nlohmann::json solution_to_json(const Graph& g, const Solution& sol) {
    nlohmann::json out;
    switch (sol.status) {
        case SolutionStatus::Optimal: out["status"] = "optimal"; break;
        case SolutionStatus::Feasible: out["status"] = "feasible"; break;
        case SolutionStatus::Infeasible: out["status"] = "infeasible"; break;
        case SolutionStatus::TimedOut: out["status"] = "timeout"; break;
    }
    out["objective"] = sol.objective;
    auto walks = nlohmann::json::array();
    for (const auto& walk : sol.walks) {
        auto names = nlohmann::json::array();
        for (Vertex v : walk) names.push_back(g.name(v));
        walks.push_back(std::move(names));
    }
    out["walks"] = walks;
    out["weights"] = sol.weights;
    if (!sol.slacks.empty()) out["slacks"] = sol.slacks;
    out["stats"] = {{"fixedOne", sol.stats.fixed_one},
                    {"fixedZero", sol.stats.fixed_zero},
                    {"antichain", sol.stats.antichain_size},
                    {"prepSeconds", sol.stats.prep_seconds},
                    {"solveSeconds", sol.stats.solve_seconds},
                    {"k", sol.stats.k},
                    {"boundHit", sol.stats.bound_hit}};
    return out;
}

}  // namespace flowwalks
