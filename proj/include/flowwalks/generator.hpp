// Copyright (c) flowwalks contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Synthetic instance generator: random genomes with injected repeats, cut
// into windows, turned into edge-centric de Bruijn graphs with lognormal
// abundances, unitig-compacted, wrapped with a global source/sink, optionally
// Poisson-perturbed. Only graphs containing a cycle are kept. Simulated
// reads become subset constraints.

#include <cstdint>
#include <string>
#include <vector>

#include "flowwalks/graph.hpp"

namespace flowwalks {

struct GeneratorConfig {
    int genome_count = 8;
    int genome_length = 3000;
    int window_length = 1000;  // l
    int kmer_size = 15;        // k
    bool poisson_noise = false;
    int reads_per_window = 5;
    int read_length = 150;
    int repeats_per_window = 1;  // injected 3k-length repeats, to force cycles
    std::uint64_t seed = 1;
};

struct Instance {
    std::string id;
    Graph graph;  // compacted, wrapped, weights possibly Poisson-perturbed
    std::vector<std::vector<EdgeId>> subset_constraints;
    std::vector<std::vector<std::string>> truth_walks;  // compacted vertex names, s..t
    std::vector<Weight> truth_weights;                  // per genome abundance
};

class GeneratorError : public std::runtime_error {
  public:
    explicit GeneratorError(const std::string& what) : std::runtime_error(what) {}
};

// Deterministic for a fixed config (including seed).
std::vector<Instance> generate_instances(const GeneratorConfig& config);

// Objective edge set helpers: all non-auxiliary edges, or those with weight
// strictly above the p-th percentile of non-auxiliary edge weights
// (nearest-rank).
std::vector<EdgeId> all_real_edges(const Graph& g);
std::vector<EdgeId> edges_above_percentile(const Graph& g, double percentile);

}  // namespace flowwalks
