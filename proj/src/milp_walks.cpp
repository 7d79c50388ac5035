// Copyright (c) flowwalks contributors.
// SPDX-License-Identifier: Apache-2.0
#include "flowwalks/milp_walks.hpp"

#include <algorithm>
#include <cmath>

namespace flowwalks {

using milp::LinExpr;
using milp::Model;
using milp::Rel;
using milp::VarId;
using milp::VarType;

WalkBlock add_walk_block(Model& model, const Graph& g, int walk_index,
                         const std::vector<Weight>& traversal_bound) {
    const int n = g.vertex_count();
    const int m = g.edge_count();
    Weight max_bound = 1;
    for (EdgeId e = 0; e < m; ++e) {
        if (traversal_bound[e] < 1)
            throw FixingError(FixingErrorCode::InvalidBound,
                              "traversal bound must be >= 1 on " + g.edge_label(e));
        max_bound = std::max(max_bound, traversal_bound[e]);
    }

    WalkBlock block;
    block.walk_index = walk_index;
    block.x.resize(m);
    block.y.resize(m);
    block.d.resize(n);
    std::string suffix = "_w" + std::to_string(walk_index);
    for (EdgeId e = 0; e < m; ++e) {
        block.x[e] = model.add_var("x_e" + std::to_string(e) + suffix, VarType::Integer, 0,
                                   static_cast<double>(traversal_bound[e]));
        block.y[e] = model.add_var("y_e" + std::to_string(e) + suffix, VarType::Binary, 0, 1);
    }
    for (Vertex v = 0; v < n; ++v) {
        double ub = v == g.source() ? 0 : static_cast<double>(n);
        block.d[v] = model.add_var("d_v" + std::to_string(v) + suffix, VarType::Integer, 0, ub);
    }

    for (Vertex v = 0; v < n; ++v) {
        LinExpr net;
        for (EdgeId e : g.in_edges(v)) net.add(block.x[e], 1.0);
        for (EdgeId e : g.out_edges(v)) net.add(block.x[e], -1.0);
        double rhs = v == g.source() ? -1.0 : (v == g.sink() ? 1.0 : 0.0);
        model.add_constr("conserve_v" + std::to_string(v) + suffix, net, Rel::EQ, rhs);
    }

    for (EdgeId e = 0; e < m; ++e) {
        LinExpr expr;
        expr.add(block.y[e], 1.0).add(block.x[e], -1.0);
        model.add_constr("tree_needs_use_e" + std::to_string(e) + suffix, expr, Rel::LE, 0);
    }

    for (Vertex v = 0; v < n; ++v) {
        if (g.in_edges(v).empty()) continue;
        double m1 = static_cast<double>(g.in_edges(v).size()) * static_cast<double>(max_bound);
        LinExpr big_m;
        LinExpr one;
        for (EdgeId e : g.in_edges(v)) {
            big_m.add(block.x[e], 1.0).add(block.y[e], -m1);
            one.add(block.y[e], 1.0);
        }
        model.add_constr("selected_has_tree_v" + std::to_string(v) + suffix, big_m, Rel::LE, 0);
        model.add_constr("tree_in_at_most_one_v" + std::to_string(v) + suffix, one, Rel::LE, 1);
    }

    double m2 = static_cast<double>(n);
    for (EdgeId e = 0; e < m; ++e) {
        const Edge& ed = g.edge(e);
        LinExpr expr;  // d_v - d_u + M2 (1 - y) >= 1
        expr.add(block.d[ed.head], 1.0).add(block.d[ed.tail], -1.0).add(block.y[e], -m2);
        model.add_constr("tree_acyclic_e" + std::to_string(e) + suffix, expr, Rel::GE, 1 - m2);
    }
    return block;
}

const std::vector<VarId>& BitExpansion::bits_for(Model& model, VarId x) {
    auto it = cache_.find(x);
    if (it != cache_.end()) return it->second;

    const auto& var = model.vars()[x];
    std::vector<VarId> bits;
    if (var.ub <= 0) {
        // fixed to zero: no bits, product contributions vanish
    } else if (var.ub <= 1) {
        bits.push_back(x);  // already binary
    } else {
        int t = static_cast<int>(std::floor(std::log2(var.ub)));
        LinExpr sum;
        for (int j = 0; j <= t; ++j) {
            VarId b = model.add_var(var.name + "_b" + std::to_string(j), VarType::Binary, 0, 1);
            bits.push_back(b);
            sum.add(b, static_cast<double>(1ll << j));
        }
        sum.add(x, -1.0);
        model.add_constr(var.name + "_bits", sum, Rel::EQ, 0);
    }
    return cache_.emplace(x, std::move(bits)).first->second;
}

LinExpr linearize_product(Model& model, BitExpansion& bits, VarId x, VarId y, Weight y_lo,
                          Weight y_hi) {
    if (y_lo < 0)
        throw FixingError(FixingErrorCode::InvalidBound, "negative lower bound in product");
    const auto& xbits = bits.bits_for(model, x);
    LinExpr product;
    double lo = static_cast<double>(y_lo), hi = static_cast<double>(y_hi);
    for (size_t j = 0; j < xbits.size(); ++j) {
        VarId b = xbits[j];
        VarId z = model.add_var(model.vars()[x].name + "_z" + std::to_string(j) + "_" +
                                    model.vars()[y].name,
                                VarType::Integer, 0, hi);
        // z = b * y via the four sandwich constraints.
        LinExpr e1;
        e1.add(z, 1.0).add(b, -hi);
        model.add_constr("", e1, Rel::LE, 0);
        LinExpr e2;
        e2.add(z, 1.0).add(b, -lo);
        model.add_constr("", e2, Rel::GE, 0);
        LinExpr e3;  // z <= y - lo (1 - b)
        e3.add(z, 1.0).add(y, -1.0).add(b, -lo);
        model.add_constr("", e3, Rel::LE, -lo);
        LinExpr e4;  // z >= y - hi (1 - b)
        e4.add(z, 1.0).add(y, -1.0).add(b, -hi);
        model.add_constr("", e4, Rel::GE, -hi);
        product.add(z, static_cast<double>(1ll << j));
    }
    return product;
}

void add_subset_constraints(Model& model, const Graph& g, const std::vector<WalkBlock>& blocks,
                            const std::vector<std::vector<EdgeId>>& subsets, Weight max_bound) {
    if (subsets.empty()) return;
    const int k = static_cast<int>(blocks.size());
    double m3 = static_cast<double>(max_bound);

    // Presence binaries are shared across subsets, created on demand.
    std::unordered_map<std::int64_t, VarId> presence;
    auto presence_var = [&](EdgeId e, int i) {
        std::int64_t key = static_cast<std::int64_t>(e) * k + i;
        auto it = presence.find(key);
        if (it != presence.end()) return it->second;
        VarId p = model.add_var("p_e" + std::to_string(e) + "_w" + std::to_string(i),
                                VarType::Binary, 0, 1);
        LinExpr le;  // p <= x
        le.add(p, 1.0).add(blocks[i].x[e], -1.0);
        model.add_constr("", le, Rel::LE, 0);
        LinExpr ge;  // x <= M3 p
        ge.add(blocks[i].x[e], 1.0).add(p, -m3);
        model.add_constr("", ge, Rel::LE, 0);
        presence.emplace(key, p);
        return p;
    };

    for (size_t j = 0; j < subsets.size(); ++j) {
        const auto& subset = subsets[j];
        if (subset.empty())
            throw FixingError(FixingErrorCode::EmptySubset,
                              "subset constraint " + std::to_string(j) + " is empty");
        for (EdgeId e : subset)
            if (e < 0 || e >= g.edge_count())
                throw GraphError(GraphErrorCode::EdgeNotInGraph, "subset edge out of range");
        LinExpr covered;
        for (int i = 0; i < k; ++i) {
            VarId s = model.add_var("s_" + std::to_string(i) + "_" + std::to_string(j),
                                    VarType::Binary, 0, 1);
            LinExpr all_present;  // sum p >= |S_j| s
            for (EdgeId e : subset) all_present.add(presence_var(e, i), 1.0);
            all_present.add(s, -static_cast<double>(subset.size()));
            model.add_constr("", all_present, Rel::GE, 0);
            covered.add(s, 1.0);
        }
        model.add_constr("subset_covered_" + std::to_string(j), covered, Rel::GE, 1);
    }
}

FixingPlan plan_fixing(const Graph& g, const Condensation& cond, const ReachabilityIndex& reach,
                       const Antichain& antichain, const std::vector<EdgeSafeSequence>& seqs,
                       const std::vector<int>& witness, int k) {
    if (static_cast<int>(antichain.edges.size()) > k)
        throw FixingError(FixingErrorCode::AntichainLargerThanK,
                          "antichain needs " + std::to_string(antichain.edges.size()) +
                              " walks but k = " + std::to_string(k));

    FixingPlan plan;
    for (size_t i = 0; i < antichain.edges.size(); ++i) {
        EdgeId anchor = antichain.edges[i];
        const EdgeSafeSequence& seq = seqs[witness[anchor]];
        int walk = static_cast<int>(i);

        std::unordered_map<EdgeId, Weight> count;
        std::vector<EdgeId> ordered;
        for (EdgeId e : seq.edges)
            if (++count[e] == 1) ordered.push_back(e);
        for (EdgeId e : ordered)
            plan.fix_one.push_back({e, walk, count[e], cond.is_inter_scc(g.edge(e))});

        Vertex first = g.edge(seq.edges.front()).tail;
        Vertex last = g.edge(seq.edges.back()).head;
        for (EdgeId e = 0; e < g.edge_count(); ++e) {
            if (count.count(e)) continue;
            const Edge& ed = g.edge(e);
            if (g.is_auxiliary(e)) continue;
            if (reach.reaches(ed.head, first)) continue;        // before the sequence
            if (reach.reaches(last, ed.tail)) continue;         // after the sequence
            bool between = false;
            for (size_t a = 0; a + 1 < seq.edges.size() && !between; ++a) {
                Vertex gap_from = g.edge(seq.edges[a]).head;
                Vertex gap_to = g.edge(seq.edges[a + 1]).tail;
                between = reach.reaches(gap_from, ed.tail) && reach.reaches(ed.head, gap_to);
            }
            if (between) continue;
            plan.fix_zero.push_back({e, walk});
        }
    }
    return plan;
}

void apply_fixing(Model& model, const Graph& g, const Condensation& cond,
                  const std::vector<WalkBlock>& blocks, const FixingPlan& plan) {
    // Any x on an edge between different SCCs can be tightened to binary.
    for (const auto& block : blocks) {
        for (EdgeId e = 0; e < g.edge_count(); ++e) {
            if (!cond.is_inter_scc(g.edge(e))) continue;
            const auto& var = model.vars()[block.x[e]];
            model.set_var_bounds(block.x[e], var.lb, std::min(var.ub, 1.0));
        }
    }

    std::unordered_map<std::int64_t, char> pinned;
    auto key = [&g](EdgeId e, int walk) {
        return static_cast<std::int64_t>(e) * 1'000'003 + walk;
    };
    for (const auto& fix : plan.fix_one) {
        pinned[key(fix.edge, fix.walk)] = 1;
        VarId x = blocks[fix.walk].x[fix.edge];
        if (fix.exact) {
            if (fix.count != 1)
                throw FixingError(FixingErrorCode::ConflictingFix,
                                  "inter-SCC edge repeated in a safe sequence");
            model.fix(x, 1.0);
        } else {
            model.tighten_lower(x, static_cast<double>(fix.count));
        }
    }
    for (const auto& fix : plan.fix_zero) {
        if (pinned.count(key(fix.edge, fix.walk)))
            throw FixingError(FixingErrorCode::ConflictingFix,
                              "edge both pinned and zeroed for walk " +
                                  std::to_string(fix.walk));
        VarId x = blocks[fix.walk].x[fix.edge];
        model.set_var_bounds(x, 0.0, 0.0);
    }
}

}  // namespace flowwalks
