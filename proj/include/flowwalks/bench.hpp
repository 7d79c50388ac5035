// Copyright (c) flowwalks contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Benchmark harness: solves every instance with and without the safety
// preprocessing under equal time limits, asserts objective equality on rows
// where both solved, and aggregates the speed-up with timeouts counted at
// the full limit.

#include <string>
#include <vector>

#include <json.hpp>

#include "flowwalks/generator.hpp"
#include "flowwalks/models.hpp"

namespace flowwalks {

enum class EprimePolicy { AllEdges, Percentile25 };

struct BenchRow {
    std::string id;
    int n = 0, m = 0;
    double prep_seconds = 0.0;
    double solve_no_safety = 0.0;
    double solve_safety = 0.0;
    bool solved_no_safety = false;
    bool solved_safety = false;
    int fixed_one = 0, fixed_zero = 0;
    std::int64_t objective_no_safety = 0;
    std::int64_t objective_safety = 0;
    bool objective_equal = true;  // on rows where both solved
};

struct BenchReport {
    std::vector<BenchRow> rows;
    double mean_speedup = 1.0;    // per-row ratio, timeouts at the limit
    double median_no_safety = 0.0;
    double median_safety = 0.0;
    int solved_no_safety = 0;
    int solved_safety = 0;
};

struct BenchOptions {
    ModelKind kind = ModelKind::FD;
    EprimePolicy eprime = EprimePolicy::AllEdges;
    double time_limit_seconds = 300.0;
    int parallel = 1;
    std::string solver;
};

DecompositionSpec spec_for_instance(const Instance& inst, ModelKind kind, EprimePolicy policy);

BenchReport run_benchmark(const std::vector<Instance>& instances, const BenchOptions& opts);

std::string bench_report_csv(const BenchReport& report);
nlohmann::json bench_report_json(const BenchReport& report);

}  // namespace flowwalks
