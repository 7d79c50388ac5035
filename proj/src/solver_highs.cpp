// Copyright (c) flowwalks contributors.
// SPDX-License-Identifier: Apache-2.0

// HiGHS backend. The environment provides HiGHS through scipy.optimize.milp,
// so the backend keeps one helper process alive and exchanges one JSON line
// per solve. Model data is all integral; values are rounded on the way out
// with a 1e-6 integrality check at the call sites that need integers.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <csignal>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "flowwalks/solver.hpp"

namespace flowwalks::milp {

namespace {

constexpr double kInfSentinel = 1e30;

const char* kWorkerScript = R"PY(
import sys, json
import numpy as np
from scipy import sparse
from scipy.optimize import milp, LinearConstraint, Bounds

def norm(v):
    if v >= 1e29: return np.inf
    if v <= -1e29: return -np.inf
    return v

def run(req):
    n = req["n"]
    c = np.zeros(n)
    for v, coef in req["obj"]:
        c[v] += coef
    if req["sense"] == "max":
        c = -c
    integrality = np.array(req["integrality"])
    lb = np.array([norm(v) for v in req["lb"]], dtype=float)
    ub = np.array([norm(v) for v in req["ub"]], dtype=float)
    rows = req["rows"]
    constraints = []
    if rows:
        data, ri, ci, rlo, rhi = [], [], [], [], []
        for i, r in enumerate(rows):
            for v, a in zip(r["idx"], r["coef"]):
                ri.append(i); ci.append(v); data.append(a)
            rlo.append(norm(r["lo"])); rhi.append(norm(r["hi"]))
        A = sparse.csr_matrix((data, (ri, ci)), shape=(len(rows), n))
        constraints = [LinearConstraint(A, rlo, rhi)]
    opts = {"presolve": True}
    if req.get("time_limit", 0) > 0:
        opts["time_limit"] = req["time_limit"]
    if req.get("gap", 0) > 0:
        opts["mip_rel_gap"] = req["gap"]
    res = milp(c=c, constraints=constraints, integrality=integrality,
               bounds=Bounds(lb, ub), options=opts)
    out = {"status": int(res.status)}
    if res.status == 0 and res.x is not None:
        out["x"] = [float(v) for v in res.x]
        obj = float(res.fun)
        out["obj"] = -obj if req["sense"] == "max" else obj
    return out

sys.stdout.write("ready\n")
sys.stdout.flush()
for line in sys.stdin:
    line = line.strip()
    if not line:
        continue
    try:
        out = run(json.loads(line))
    except Exception as exc:
        out = {"error": repr(exc)}
    sys.stdout.write(json.dumps(out) + "\n")
    sys.stdout.flush()
)PY";

}  // namespace

struct HighsBackend::Proc {
    pid_t pid = -1;
    FILE* to_child = nullptr;
    FILE* from_child = nullptr;

    ~Proc() {
        if (to_child) fclose(to_child);
        if (from_child) fclose(from_child);
        if (pid > 0) {
            kill(pid, SIGTERM);
            int status = 0;
            waitpid(pid, &status, 0);
        }
    }

    std::string request(const std::string& line) {
        if (fputs(line.c_str(), to_child) == EOF || fputc('\n', to_child) == EOF ||
            fflush(to_child) != 0)
            throw SolverError("solver helper process is gone (write failed)");
        return read_line();
    }

    std::string read_line() {
        std::string out;
        int ch;
        while ((ch = fgetc(from_child)) != EOF && ch != '\n') out.push_back(static_cast<char>(ch));
        if (out.empty() && ch == EOF)
            throw SolverError("solver helper process is gone (no response)");
        return out;
    }
};

HighsBackend::HighsBackend() : proc_(std::make_unique<Proc>()) {
    signal(SIGPIPE, SIG_IGN);
    int to_pipe[2], from_pipe[2];
    if (pipe(to_pipe) != 0 || pipe(from_pipe) != 0)
        throw SolverError("backend unavailable: cannot create pipes");
    pid_t pid = fork();
    if (pid < 0) throw SolverError("backend unavailable: fork failed");
    if (pid == 0) {
        dup2(to_pipe[0], STDIN_FILENO);
        dup2(from_pipe[1], STDOUT_FILENO);
        close(to_pipe[0]);
        close(to_pipe[1]);
        close(from_pipe[0]);
        close(from_pipe[1]);
        execlp("python3", "python3", "-c", kWorkerScript, static_cast<char*>(nullptr));
        perror("flowwalks: exec python3");
        _exit(127);
    }
    close(to_pipe[0]);
    close(from_pipe[1]);
    proc_->pid = pid;
    proc_->to_child = fdopen(to_pipe[1], "w");
    proc_->from_child = fdopen(from_pipe[0], "r");
    if (!proc_->to_child || !proc_->from_child)
        throw SolverError("backend unavailable: fdopen failed");
    std::string hello = proc_->read_line();
    if (hello != "ready")
        throw SolverError("backend unavailable: helper did not start (" + hello + ")");
}

HighsBackend::~HighsBackend() = default;

SolveResult HighsBackend::solve(const Model& model) {
    nlohmann::json req;
    req["n"] = model.var_count();
    req["sense"] = model.sense() == Sense::Minimize ? "min" : "max";
    auto obj = nlohmann::json::array();
    for (const auto& t : model.objective().terms)
        obj.push_back({t.var, t.coef});
    req["obj"] = obj;
    {
        std::vector<int> integrality(model.var_count());
        std::vector<double> lb(model.var_count()), ub(model.var_count());
        for (int v = 0; v < model.var_count(); ++v) {
            const auto& var = model.vars()[v];
            integrality[v] = var.type == VarType::Continuous ? 0 : 1;
            lb[v] = std::isfinite(var.lb) ? var.lb : -kInfSentinel;
            ub[v] = std::isfinite(var.ub) ? var.ub : kInfSentinel;
        }
        req["integrality"] = integrality;
        req["lb"] = lb;
        req["ub"] = ub;
    }
    auto rows = nlohmann::json::array();
    for (const auto& row : model.rows()) {
        nlohmann::json r;
        std::vector<int> idx;
        std::vector<double> coef;
        for (const auto& t : row.expr.terms) {
            idx.push_back(t.var);
            coef.push_back(t.coef);
        }
        r["idx"] = idx;
        r["coef"] = coef;
        r["lo"] = row.rel == Rel::LE ? -kInfSentinel : row.rhs;
        r["hi"] = row.rel == Rel::GE ? kInfSentinel : row.rhs;
        rows.push_back(std::move(r));
    }
    req["rows"] = rows;
    req["time_limit"] = model.params.time_limit_seconds;
    req["gap"] = model.params.rel_gap;

    auto start = std::chrono::steady_clock::now();
    std::string response = proc_->request(req.dump());
    auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);

    nlohmann::json res;
    try {
        res = nlohmann::json::parse(response);
    } catch (const std::exception&) {
        throw SolverError("malformed helper response: " + response.substr(0, 200));
    }
    if (res.contains("error"))
        throw SolverError("malformed model: " + res["error"].get<std::string>());

    SolveResult out;
    out.wall_seconds = elapsed.count();
    int status = res["status"].get<int>();
    switch (status) {
        case 0: out.status = SolveStatus::Optimal; break;
        case 1: out.status = SolveStatus::TimedOut; break;
        case 2: out.status = SolveStatus::Infeasible; break;
        case 3: out.status = SolveStatus::Unbounded; break;
        default:
            throw SolverError("solver reported unexpected status " + std::to_string(status));
    }
    if (out.status == SolveStatus::Optimal) {
        out.values = res["x"].get<std::vector<double>>();
        out.objective = res["obj"].get<double>() + model.objective().constant;
    }
    return out;
}

}  // namespace flowwalks::milp
