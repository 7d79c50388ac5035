// Copyright (c) flowwalks contributors.
// SPDX-License-Identifier: Apache-2.0
#include "flowwalks/generator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace flowwalks {

namespace {

std::string random_genome(std::mt19937_64& rng, int length) {
    static const char bases[] = "ACGT";
    std::string genome(length, 'A');
    std::uniform_int_distribution<int> base(0, 3);
    for (char& c : genome) c = bases[base(rng)];
    return genome;
}

// Copies a 3k-length substring to another location inside every window
// region, so the window's de Bruijn graph contains a repeat and hence a
// cycle.
void inject_repeats(std::mt19937_64& rng, std::string& genome, const GeneratorConfig& cfg) {
    int rep_len = 3 * cfg.kmer_size;
    for (int start = 0; start + cfg.window_length <= static_cast<int>(genome.size());
         start += cfg.window_length) {
        for (int r = 0; r < cfg.repeats_per_window; ++r) {
            if (cfg.window_length < 3 * rep_len) break;
            std::uniform_int_distribution<int> pos(0, cfg.window_length - rep_len);
            int from = start + pos(rng);
            int to = start + pos(rng);
            genome.replace(to, rep_len, genome.substr(from, rep_len));
        }
    }
}

struct WindowGraph {
    // ordered node names per genome walk, plus per-edge flow
    std::vector<std::vector<std::string>> walks;
    std::map<std::pair<std::string, std::string>, Weight> flow;
};

}  // namespace

std::vector<Instance> generate_instances(const GeneratorConfig& cfg) {
    if (cfg.kmer_size < 2) throw GeneratorError("k must be >= 2");
    if (cfg.window_length < cfg.kmer_size) throw GeneratorError("window shorter than k");
    if (cfg.genome_count < 1 || cfg.genome_length < cfg.window_length)
        throw GeneratorError("need at least one genome of at least one window");

    std::mt19937_64 rng(cfg.seed);
    std::vector<std::string> genomes;
    std::vector<Weight> abundance;
    std::lognormal_distribution<double> lognormal(1.0, 1.0);
    for (int i = 0; i < cfg.genome_count; ++i) {
        std::string genome = random_genome(rng, cfg.genome_length);
        inject_repeats(rng, genome, cfg);
        genomes.push_back(std::move(genome));
        abundance.push_back(static_cast<Weight>(std::ceil(lognormal(rng) * 10.0)));
    }

    const int k = cfg.kmer_size;
    int window_count = cfg.genome_length / cfg.window_length;
    std::vector<Instance> instances;

    for (int win = 0; win < window_count; ++win) {
        WindowGraph wg;
        for (int gi = 0; gi < cfg.genome_count; ++gi) {
            int begin = win * cfg.window_length;
            int end = std::min<int>(begin + cfg.window_length,
                                    static_cast<int>(genomes[gi].size()));
            if (end - begin < k) {
                wg.walks.emplace_back();
                continue;
            }
            std::vector<std::string> walk;
            for (int p = begin; p + k - 1 <= end; ++p)
                walk.push_back(genomes[gi].substr(p, k - 1));
            for (size_t j = 0; j + 1 < walk.size(); ++j)
                wg.flow[{walk[j], walk[j + 1]}] += abundance[gi];
            wg.walks.push_back(std::move(walk));
        }

        // Window-start/end nodes stay addressable through compaction; they
        // are the S/T sets of the wrap and the endpoints of the ground truth.
        std::vector<std::string> starts, ends, protected_nodes;
        for (const auto& walk : wg.walks) {
            if (walk.empty()) continue;
            starts.push_back(walk.front());
            ends.push_back(walk.back());
            protected_nodes.push_back(walk.front());
            protected_nodes.push_back(walk.back());
        }
        if (starts.empty()) continue;

        // The raw window graph has no unique source/sink, so compaction runs
        // on a temporary wrap and auxiliary chains are kept intact by
        // protecting the start/end nodes.
        WeightedEdgeList raw_edges;
        for (const auto& [key, f] : wg.flow) raw_edges.emplace_back(key.first, key.second, f);
        NormalizedGraph wrapped = normalize_sources_sinks(raw_edges, starts, ends);
        protected_nodes.push_back(wrapped.source_name);
        protected_nodes.push_back(wrapped.sink_name);
        CompactedGraph compacted = compact_unitigs(wrapped.graph, protected_nodes);

        Graph& graph = compacted.graph;
        for (EdgeId e = 0; e < graph.edge_count(); ++e) {
            const Edge& ed = graph.edge(e);
            if (graph.name(ed.tail) == wrapped.source_name ||
                graph.name(ed.head) == wrapped.sink_name)
                graph.mark_auxiliary(e);
        }

        // Keep cyclic graphs only.
        {
            Condensation cond = condense(graph);
            bool cyclic = false;
            for (char trivial : cond.is_trivial) cyclic |= !trivial;
            if (!cyclic) continue;
        }

        // Ground truth in compacted coordinates.
        Instance inst{
            "seed" + std::to_string(cfg.seed) + "_win" + std::to_string(win),
            Graph(graph),
            {},
            {},
            {}};

        // Map every raw node that survived compaction to its vertex; walk
        // translation drops interior nodes that were compacted away.
        auto translate = [&](const std::vector<std::string>& raw_walk) {
            std::vector<std::string> names{wrapped.source_name};
            for (const auto& node : raw_walk)
                if (inst.graph.find_vertex(node)) names.push_back(node);
            names.push_back(wrapped.sink_name);
            return names;
        };
        for (int gi = 0; gi < cfg.genome_count; ++gi) {
            if (wg.walks[gi].empty()) continue;
            inst.truth_walks.push_back(translate(wg.walks[gi]));
            inst.truth_weights.push_back(abundance[gi]);
        }

        // Simulated reads -> subset constraints, in compacted edge ids.
        for (int gi = 0; gi < cfg.genome_count; ++gi) {
            if (wg.walks[gi].empty()) continue;
            int begin = win * cfg.window_length;
            int end = std::min<int>(begin + cfg.window_length,
                                    static_cast<int>(genomes[gi].size()));
            for (int r = 0; r < cfg.reads_per_window; ++r) {
                std::uniform_int_distribution<int> pos(begin, end - 1);
                int read_begin = pos(rng);
                int read_end = std::min(read_begin + cfg.read_length, end);
                if (read_end - read_begin < k) continue;  // short reads are discarded
                std::vector<std::string> nodes;
                for (int p = read_begin; p + k - 1 <= read_end; ++p)
                    nodes.push_back(genomes[gi].substr(p, k - 1));
                std::vector<std::string> on_graph;
                for (const auto& node : nodes)
                    if (inst.graph.find_vertex(node)) on_graph.push_back(node);
                std::vector<EdgeId> subset;
                for (size_t j = 0; j + 1 < on_graph.size(); ++j) {
                    auto e = inst.graph.find_edge(inst.graph.vertex(on_graph[j]),
                                                  inst.graph.vertex(on_graph[j + 1]));
                    if (e && std::find(subset.begin(), subset.end(), *e) == subset.end())
                        subset.push_back(*e);
                }
                if (!subset.empty()) inst.subset_constraints.push_back(std::move(subset));
            }
        }

        if (cfg.poisson_noise) {
            WeightedEdgeList noisy;
            for (EdgeId e = 0; e < inst.graph.edge_count(); ++e) {
                const Edge& ed = inst.graph.edge(e);
                Weight f = ed.weight;
                if (!inst.graph.is_auxiliary(e) && f > 0) {
                    std::poisson_distribution<Weight> pois(static_cast<double>(f));
                    f = pois(rng);
                }
                noisy.emplace_back(inst.graph.name(ed.tail), inst.graph.name(ed.head), f);
            }
            Graph perturbed = Graph::from_edges(noisy, wrapped.source_name, wrapped.sink_name);
            for (EdgeId e = 0; e < perturbed.edge_count(); ++e)
                if (inst.graph.is_auxiliary(e)) perturbed.mark_auxiliary(e);
            inst.graph = std::move(perturbed);
        }

        instances.push_back(std::move(inst));
    }
    return instances;
}

std::vector<EdgeId> all_real_edges(const Graph& g) {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < g.edge_count(); ++e)
        if (!g.is_auxiliary(e)) out.push_back(e);
    return out;
}

std::vector<EdgeId> edges_above_percentile(const Graph& g, double percentile) {
    std::vector<Weight> values;
    for (EdgeId e = 0; e < g.edge_count(); ++e)
        if (!g.is_auxiliary(e)) values.push_back(g.edge(e).weight);
    if (values.empty()) return {};
    std::sort(values.begin(), values.end());
    size_t rank = static_cast<size_t>(
        std::ceil(percentile / 100.0 * static_cast<double>(values.size())));
    rank = std::min(std::max<size_t>(rank, 1), values.size());
    Weight threshold = values[rank - 1];
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < g.edge_count(); ++e)
        if (!g.is_auxiliary(e) && g.edge(e).weight > threshold) out.push_back(e);
    return out;
}

}  // namespace flowwalks
