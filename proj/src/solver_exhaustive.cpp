// Copyright (c) flowwalks contributors.
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include "flowwalks/solver.hpp"

namespace flowwalks::milp {

namespace {

constexpr double kEps = 1e-6;

struct NormRow {
    std::vector<LinTerm> terms;
    double lo, hi;
};

struct SearchState {
    std::vector<NormRow> rows;
    std::vector<double> lo, hi;
    std::uint64_t nodes = 0;
    std::uint64_t node_limit = 0;

    bool propagate() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& row : rows) {
                double minact = 0, maxact = 0;
                for (const auto& t : row.terms) {
                    if (t.coef >= 0) {
                        minact += t.coef * lo[t.var];
                        maxact += t.coef * hi[t.var];
                    } else {
                        minact += t.coef * hi[t.var];
                        maxact += t.coef * lo[t.var];
                    }
                }
                if (minact > row.hi + kEps || maxact < row.lo - kEps) return false;
                for (const auto& t : row.terms) {
                    if (t.coef == 0.0 || lo[t.var] == hi[t.var]) continue;
                    double own_min = t.coef >= 0 ? t.coef * lo[t.var] : t.coef * hi[t.var];
                    double own_max = t.coef >= 0 ? t.coef * hi[t.var] : t.coef * lo[t.var];
                    double rest_min = minact - own_min;
                    double rest_max = maxact - own_max;
                    // t.coef * x <= row.hi - rest_min and >= row.lo - rest_max
                    double ub_val = (row.hi - rest_min) / t.coef;
                    double lb_val = (row.lo - rest_max) / t.coef;
                    if (t.coef < 0) std::swap(ub_val, lb_val);
                    double new_hi = std::floor(ub_val + kEps);
                    double new_lo = std::ceil(lb_val - kEps);
                    if (new_hi < hi[t.var] - kEps) {
                        hi[t.var] = new_hi;
                        changed = true;
                    }
                    if (new_lo > lo[t.var] + kEps) {
                        lo[t.var] = new_lo;
                        changed = true;
                    }
                    if (lo[t.var] > hi[t.var] + kEps) return false;
                }
            }
        }
        return true;
    }

    void tick() {
        if (++nodes > node_limit)
            throw SolverError("exhaustive backend: model too large (node limit exceeded)");
    }
};

SearchState make_state(const Model& model, std::uint64_t node_limit) {
    SearchState st;
    st.node_limit = node_limit;
    st.lo.resize(model.var_count());
    st.hi.resize(model.var_count());
    for (int v = 0; v < model.var_count(); ++v) {
        const auto& var = model.vars()[v];
        if (var.type == VarType::Continuous && var.lb != var.ub)
            throw SolverError("exhaustive backend handles all-integer models only: " + var.name);
        st.lo[v] = std::ceil(var.lb - kEps);
        st.hi[v] = std::floor(var.ub + kEps);
    }
    for (const auto& row : model.rows()) {
        NormRow nr;
        // Merge duplicate terms so propagation treats each variable once.
        std::vector<double> coef(model.var_count(), 0.0);
        std::vector<VarId> order;
        for (const auto& t : row.expr.terms) {
            if (coef[t.var] == 0.0) order.push_back(t.var);
            coef[t.var] += t.coef;
        }
        for (VarId v : order)
            if (coef[v] != 0.0) nr.terms.push_back({v, coef[v]});
        switch (row.rel) {
            case Rel::LE: nr.lo = -1e30; nr.hi = row.rhs; break;
            case Rel::GE: nr.lo = row.rhs; nr.hi = 1e30; break;
            case Rel::EQ: nr.lo = nr.hi = row.rhs; break;
        }
        st.rows.push_back(std::move(nr));
    }
    return st;
}

int first_unfixed(const SearchState& st, const std::vector<VarId>& order) {
    for (size_t i = 0; i < order.size(); ++i)
        if (st.lo[order[i]] != st.hi[order[i]]) return static_cast<int>(i);
    return -1;
}

// Depth-first over `order`; returns true as soon as one full feasible
// assignment of those variables exists.
bool satisfiable(SearchState& st, const std::vector<VarId>& order) {
    int pick = first_unfixed(st, order);
    if (pick < 0) return true;
    VarId v = order[pick];
    auto lo_copy = st.lo, hi_copy = st.hi;
    for (double val = lo_copy[v]; val <= hi_copy[v]; ++val) {
        st.tick();
        st.lo[v] = st.hi[v] = val;
        if (st.propagate() && satisfiable(st, order)) return true;
        st.lo = lo_copy;
        st.hi = hi_copy;
    }
    return false;
}

}  // namespace

SolveResult ExhaustiveBackend::solve(const Model& model) {
    SearchState st = make_state(model, 200'000'000);
    std::vector<VarId> order(model.var_count());
    for (int v = 0; v < model.var_count(); ++v) order[v] = v;

    double sign = model.sense() == Sense::Minimize ? 1.0 : -1.0;
    LinExpr obj = model.objective();

    SolveResult best;
    best.status = SolveStatus::Infeasible;
    double best_val = 0.0;

    // DFS with objective-bound pruning against the incumbent.
    auto obj_min = [&](const SearchState& s) {
        double acc = obj.constant * sign;
        for (const auto& t : obj.terms) {
            double c = t.coef * sign;
            acc += c >= 0 ? c * s.lo[t.var] : c * s.hi[t.var];
        }
        return acc;
    };
    std::vector<std::pair<std::vector<double>, std::vector<double>>> stack;
    if (st.propagate()) stack.push_back({st.lo, st.hi});
    while (!stack.empty()) {
        auto [lo, hi] = std::move(stack.back());
        stack.pop_back();
        st.lo = std::move(lo);
        st.hi = std::move(hi);
        if (best.status == SolveStatus::Optimal && obj_min(st) >= best_val - kEps) continue;
        int pick = first_unfixed(st, order);
        if (pick < 0) {
            double val = obj_min(st);
            if (best.status != SolveStatus::Optimal || val < best_val) {
                best_val = val;
                best.status = SolveStatus::Optimal;
                best.values = st.lo;
                best.objective = val * sign;
            }
            continue;
        }
        VarId v = order[pick];
        auto lo_copy = st.lo, hi_copy = st.hi;
        // Push descending so the smallest value is explored first.
        for (double val = hi_copy[v]; val >= lo_copy[v]; --val) {
            st.tick();
            st.lo = lo_copy;
            st.hi = hi_copy;
            st.lo[v] = st.hi[v] = val;
            if (st.propagate()) stack.push_back({st.lo, st.hi});
        }
    }
    return best;
}

std::set<std::vector<std::int64_t>> ExhaustiveBackend::enumerate_feasible(
    const Model& model, const std::vector<VarId>& projection, std::uint64_t node_limit) {
    SearchState st = make_state(model, node_limit);
    std::vector<VarId> rest;
    {
        std::vector<char> in_proj(model.var_count(), 0);
        for (VarId v : projection) in_proj[v] = 1;
        for (int v = 0; v < model.var_count(); ++v)
            if (!in_proj[v]) rest.push_back(v);
    }

    std::set<std::vector<std::int64_t>> out;
    auto record = [&]() {
        std::vector<std::int64_t> tuple;
        tuple.reserve(projection.size());
        for (VarId v : projection) tuple.push_back(static_cast<std::int64_t>(st.lo[v]));
        out.insert(std::move(tuple));
    };

    // Branch the projection variables exhaustively; for each complete
    // projection assignment search the remaining variables for one witness.
    auto recurse = [&](auto&& self) -> void {
        int pick = first_unfixed(st, projection);
        if (pick < 0) {
            auto lo_copy = st.lo, hi_copy = st.hi;
            if (satisfiable(st, rest)) {
                st.lo = lo_copy;
                st.hi = hi_copy;
                record();
            } else {
                st.lo = lo_copy;
                st.hi = hi_copy;
            }
            return;
        }
        VarId v = projection[pick];
        auto lo_copy = st.lo, hi_copy = st.hi;
        for (double val = lo_copy[v]; val <= hi_copy[v]; ++val) {
            st.tick();
            st.lo = lo_copy;
            st.hi = hi_copy;
            st.lo[v] = st.hi[v] = val;
            if (st.propagate()) self(self);
        }
        st.lo = lo_copy;
        st.hi = hi_copy;
    };
    if (st.propagate()) recurse(recurse);
    return out;
}

}  // namespace flowwalks::milp
