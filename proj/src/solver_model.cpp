// Copyright (c) flowwalks contributors.
// SPDX-License-Identifier: Apache-2.0
#include "flowwalks/solver.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace flowwalks::milp {

LinExpr& LinExpr::add(const LinExpr& other, double scale) {
    for (const auto& t : other.terms) terms.push_back({t.var, t.coef * scale});
    constant += other.constant * scale;
    return *this;
}

std::int64_t SolveResult::value_int(VarId v) const {
    double x = values.at(v);
    double r = std::round(x);
    if (std::abs(x - r) > 1e-6)
        throw SolverError("solution value " + std::to_string(x) + " is not integral");
    return static_cast<std::int64_t>(r);
}

VarId Model::add_var(const std::string& name, VarType type, double lb, double ub) {
    if (type != VarType::Continuous && (!std::isfinite(lb) || !std::isfinite(ub)))
        throw SolverError("integer variable " + name + " needs finite bounds");
    if (type == VarType::Binary) {
        lb = std::max(lb, 0.0);
        ub = std::min(ub, 1.0);
    }
    vars_.push_back({name, type, lb, ub});
    return static_cast<VarId>(vars_.size()) - 1;
}

void Model::set_var_bounds(VarId v, double lb, double ub) {
    vars_[v].lb = lb;
    vars_[v].ub = ub;
}

void Model::tighten_lower(VarId v, double lb) { vars_[v].lb = std::max(vars_[v].lb, lb); }

void Model::add_constr(const std::string& name, const LinExpr& expr, Rel rel, double rhs) {
    for (const auto& t : expr.terms)
        if (t.var < 0 || t.var >= var_count())
            throw SolverError("constraint " + name + " references undeclared variable");
    rows_.push_back({name, expr, rel, rhs - expr.constant});
    rows_.back().expr.constant = 0.0;
}

void Model::set_objective(Sense sense, const LinExpr& expr) {
    sense_ = sense;
    objective_ = expr;
}

namespace {

std::string num(double x) {
    if (x == static_cast<std::int64_t>(x)) return std::to_string(static_cast<std::int64_t>(x));
    std::ostringstream out;
    out.precision(12);
    out << x;
    return out.str();
}

void write_expr(std::ostringstream& out, const LinExpr& expr, const Model& m) {
    // Coefficients are merged per variable in first-appearance order so that
    // re-exporting a model is byte-identical.
    std::vector<VarId> order;
    std::vector<double> coef(m.var_count(), 0.0);
    std::vector<char> seen(m.var_count(), 0);
    for (const auto& t : expr.terms) {
        if (!seen[t.var]) {
            seen[t.var] = 1;
            order.push_back(t.var);
        }
        coef[t.var] += t.coef;
    }
    bool first = true;
    for (VarId v : order) {
        double c = coef[v];
        if (c == 0.0) continue;
        if (first) {
            if (c < 0) out << "- ";
            first = false;
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        double a = std::abs(c);
        if (a != 1.0) out << num(a) << " ";
        out << m.vars()[v].name;
    }
    if (first) out << "0 " << m.vars()[0].name;
}

}  // namespace

std::string export_lp_text(const Model& model) {
    std::ostringstream out;
    out << (model.sense() == Sense::Minimize ? "Minimize" : "Maximize") << "\n obj: ";
    write_expr(out, model.objective(), model);
    out << "\nSubject To\n";
    for (int i = 0; i < model.constr_count(); ++i) {
        const auto& row = model.rows()[i];
        out << " " << (row.name.empty() ? "c" + std::to_string(i) : row.name) << ": ";
        write_expr(out, row.expr, model);
        switch (row.rel) {
            case Rel::LE: out << " <= "; break;
            case Rel::GE: out << " >= "; break;
            case Rel::EQ: out << " = "; break;
        }
        out << num(row.rhs) << "\n";
    }
    out << "Bounds\n";
    for (const auto& v : model.vars()) out << " " << num(v.lb) << " <= " << v.name << " <= " << num(v.ub) << "\n";
    bool any_int = false;
    for (const auto& v : model.vars()) any_int |= v.type != VarType::Continuous;
    if (any_int) {
        out << "Generals\n";
        for (const auto& v : model.vars())
            if (v.type != VarType::Continuous) out << " " << v.name;
        out << "\n";
    }
    out << "End\n";
    return out.str();
}

std::unique_ptr<SolverBackend> make_backend(const std::string& name) {
    std::string pick = name;
    if (pick.empty()) {
        const char* env = std::getenv("FLOWWALKS_SOLVER");
        pick = env ? env : "highs";
    }
    if (pick == "highs") return std::make_unique<HighsBackend>();
    if (pick == "exhaustive") return std::make_unique<ExhaustiveBackend>();
    throw SolverError("unknown solver backend: " + pick);
}

SolverBackend& shared_backend(const std::string& name) {
    thread_local std::string cached_name;
    thread_local std::unique_ptr<SolverBackend> cached;
    if (!cached || cached_name != name) {
        cached = make_backend(name);
        cached_name = name;
    }
    return *cached;
}

}  // namespace flowwalks::milp
