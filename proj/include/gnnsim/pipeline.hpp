#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "gnnsim/decider.hpp"
#include "gnnsim/engine.hpp"
#include "gnnsim/graph.hpp"
#include "gnnsim/renumber.hpp"
#include "gnnsim/schedule.hpp"

namespace gnnsim {

/// Planted-partition generator: `communities` groups of `size` nodes;
/// each intra-community pair gets an edge with probability p_in, each
/// cross-community pair with p_out. Every edge appears once with
/// src < trg. With shuffle, node ids are randomly permuted afterwards.
/// Byte-identical output for a fixed argument set and seed.
EdgeList planted_partition(std::uint32_t communities, std::uint32_t size,
                           double p_in, double p_out, bool shuffle,
                           std::uint64_t seed);

/// Edge-list text form: "nodes N" header plus one "src trg" line per edge.
std::string edge_list_text(const EdgeList& el);

/// Seeded uniform [0,1) features, reproducible across platforms.
FeatureMatrix random_features(std::uint32_t num_nodes, std::uint32_t dim,
                              std::uint64_t seed);

/// Input analysis for one edge list: size, degree shape of the
/// symmetrized adjacency, edge span, and the reorder recommendation.
struct StatsReport {
    std::uint64_t num_nodes = 0;
    std::uint64_t num_edges = 0;  // directed edges as loaded
    DegreeStats degrees;          // over the symmetrized adjacency
    double aes = 0.0;
    double sqrt_aes = 0.0;
    double threshold = 0.0;  // floor(sqrt(num_nodes) / 100)
    bool reorder = false;
};

StatsReport analyze(const EdgeList& el);

/// Community renumbering applied to a loaded edge list.
struct ReorderResult {
    NodeMapping mapping;
    std::uint32_t num_communities = 0;
    double modularity = 0.0;
    double aes_before = 0.0;
    double aes_after = 0.0;
};

ReorderResult reorder_edges(const EdgeList& el);

struct RunConfig {
    std::string input;
    std::uint32_t dim = 16;
    std::optional<KernelParams> params;  // absent -> auto-selected
    Strategy strategy = Strategy::WarpShared;
    DimMode dim_mode = DimMode::Cyclic;
    std::optional<CacheConfig> cache = CacheConfig{};  // absent -> no cache replay
    std::optional<bool> force_reorder;  // absent -> edge-span rule decides
    std::uint64_t seed = 1;
    unsigned workers = 1;
};

struct RunResult {
    StatsReport stats;
    bool reordered = false;
    std::optional<ReorderResult> reorder;
    KernelParams params;
    CostReport report;
    FeatureMatrix output;  // rows follow the executed node order
};

/// Full flow: load analysis, optional renumbering, parameter selection
/// when none are given, scheduling, planning, and the simulated
/// aggregation. Verifies the result against the dense reference (1e-12
/// relative) and throws InternalError on deviation. Features are seeded
/// uniform [0,1) values derived from config.seed.
RunResult run_pipeline(const EdgeList& el, const RunConfig& config);

}  // namespace gnnsim
