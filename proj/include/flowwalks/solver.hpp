// Copyright (c) flowwalks contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Backend-neutral MILP layer. Model building code never talks to a solver
// directly; it fills a Model and hands it to a SolverBackend. Two backends
// ship: "highs" (the default, HiGHS driven through a persistent worker
// process) and "exhaustive" (depth-first search with bounds propagation,
// usable as an independent oracle on small all-integer models).

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace flowwalks::milp {

using VarId = int;

enum class VarType { Continuous, Integer, Binary };

struct LinTerm {
    VarId var;
    double coef;
};

struct LinExpr {
    std::vector<LinTerm> terms;
    double constant = 0.0;

    LinExpr() = default;
    LinExpr(VarId v) { terms.push_back({v, 1.0}); }  // NOLINT: implicit by design
    LinExpr& add(VarId v, double coef) {
        terms.push_back({v, coef});
        return *this;
    }
    LinExpr& add(const LinExpr& other, double scale = 1.0);
};

enum class Rel { LE, GE, EQ };
enum class Sense { Minimize, Maximize };

enum class SolveStatus { Optimal, Feasible, Infeasible, Unbounded, TimedOut };

struct SolveResult {
    SolveStatus status = SolveStatus::Infeasible;
    std::vector<double> values;  // per VarId; present iff Optimal or Feasible
    double objective = 0.0;
    double wall_seconds = 0.0;

    bool has_values() const {
        return status == SolveStatus::Optimal || status == SolveStatus::Feasible;
    }
    std::int64_t value_int(VarId v) const;
};

struct SolverParams {
    double time_limit_seconds = 300.0;  // mirrors the benchmark protocol
    double rel_gap = 0.0;
    int threads = 1;
};

class SolverError : public std::runtime_error {
  public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

class Model {
  public:
    VarId add_var(const std::string& name, VarType type, double lb, double ub);
    void set_var_bounds(VarId v, double lb, double ub);
    void tighten_lower(VarId v, double lb);
    void fix(VarId v, double value) { set_var_bounds(v, value, value); }

    void add_constr(const std::string& name, const LinExpr& expr, Rel rel, double rhs);
    void set_objective(Sense sense, const LinExpr& expr);

    int var_count() const { return static_cast<int>(vars_.size()); }
    int constr_count() const { return static_cast<int>(rows_.size()); }

    struct Var {
        std::string name;
        VarType type;
        double lb, ub;
    };
    struct Row {
        std::string name;
        LinExpr expr;
        Rel rel;
        double rhs;
    };

    const std::vector<Var>& vars() const { return vars_; }
    const std::vector<Row>& rows() const { return rows_; }
    Sense sense() const { return sense_; }
    const LinExpr& objective() const { return objective_; }

    SolverParams params;

  private:
    std::vector<Var> vars_;
    std::vector<Row> rows_;
    Sense sense_ = Sense::Minimize;
    LinExpr objective_;
};

// Deterministic CPLEX-LP-format text; identical models export byte-identical
// text.
std::string export_lp_text(const Model& model);

class SolverBackend {
  public:
    virtual ~SolverBackend() = default;
    virtual SolveResult solve(const Model& model) = 0;
    virtual std::string name() const = 0;
};

// Exact search over all-integer models. Branches in declaration order with
// bounds propagation to a fixpoint after every assignment; practical for
// models with roughly <= 20 free integer variables of small range (more when
// propagation fixes most of them).
class ExhaustiveBackend : public SolverBackend {
  public:
    SolveResult solve(const Model& model) override;
    std::string name() const override { return "exhaustive"; }

    // All feasible assignments projected onto `projection`, deduplicated.
    std::set<std::vector<std::int64_t>> enumerate_feasible(const Model& model,
                                                           const std::vector<VarId>& projection,
                                                           std::uint64_t node_limit = 200'000'000);
};

// Runs HiGHS in a persistent helper process (scipy.optimize.milp); one
// instance per thread of use. Throws SolverError if the helper cannot start.
class HighsBackend : public SolverBackend {
  public:
    HighsBackend();
    ~HighsBackend() override;
    SolveResult solve(const Model& model) override;
    std::string name() const override { return "highs"; }

  private:
    struct Proc;
    std::unique_ptr<Proc> proc_;
};

// Env var FLOWWALKS_SOLVER ("highs" | "exhaustive") picks the default.
std::unique_ptr<SolverBackend> make_backend(const std::string& name = "");

// Thread-local cached backend, so repeated solves reuse one helper process.
SolverBackend& shared_backend(const std::string& name = "");

}  // namespace flowwalks::milp
