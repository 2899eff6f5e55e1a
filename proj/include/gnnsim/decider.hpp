#pragma once

#include <cstdint>
#include <vector>

#include "gnnsim/graph.hpp"
#include "gnnsim/schedule.hpp"

namespace gnnsim {

/// Graph- and device-level quantities feeding the analytical model.
struct ModelInputs {
    std::uint64_t num_nodes = 0;
    std::uint64_t num_edges = 0;
    std::uint32_t dim = 16;
    double avg_degree = 0.0;
    double stddev_degree = 0.0;
    std::uint32_t max_tpb = 1024;
    std::uint64_t smem_per_block = 96 * 1024;
    std::uint64_t capability = 4096;  // per-thread work ceiling for feasibility
    double alpha = 0.15;              // group-size prior weight, in [0.15, 0.3]

    /// Fills the graph-derived fields; alpha maps stddev_degree linearly
    /// from [0, 2*avg_degree] onto [0.15, 0.3], clamped.
    static ModelInputs from_graph(const CsrGraph& g, std::uint32_t dim);
};

/// Maps a degree spread onto the group-size prior weight: linear from
/// stddev in [0, 2*avg] onto [0.15, 0.3], clamped at both ends.
double alpha_from_degrees(double avg_degree, double stddev_degree);

struct ParamCandidate {
    KernelParams params;
    double estimated_latency = 0.0;
    bool feasible = false;
};

/// Workload per thread: ngs * dim / dw.
double wpt(const KernelParams& p);

/// Shared memory per block in bytes: (tpb/tpw) * dim * 4.
std::uint64_t smem(const KernelParams& p);

/// Working dimension: tpw when dim >= tpw, else tpw/2.
std::uint32_t select_dw(std::uint32_t dim, std::uint32_t tpw = 32);

/// Neighbor-group size targeting a workload of about 1024 per thread,
/// clamped to [1, max(1, round(avg_degree) * 32)].
std::uint32_t select_ngs(std::uint32_t dw, std::uint32_t tpb,
                         const ModelInputs& inputs);

/// Dimension-piece sizing heuristic: smem_bytes / (avg_degree * 4 * 1024).
double dp_size(std::uint64_t smem_bytes, double avg_degree);

/// Latency estimate
///   E*D / (gs * |dw - D/3| * |tpb - sqrt(max_tpb)|) * (1 + |gs - alpha*N/E|)
/// where gs is the neighbor-group size and each absolute-value factor is
/// floored at 1e-6.
double estimate_latency(const KernelParams& p, const ModelInputs& inputs);

/// Candidate flag per the ParamCandidate contract: SMEM within budget,
/// tpb within the device maximum, dw within the warp width.
bool candidate_feasible(const KernelParams& p, const ModelInputs& inputs);

/// Model feasibility inequalities: gs*D/dw <= capability and
/// (tpb*gs)/(avg_degree*dw) * D * 4 <= smem_per_block.
bool feasibility(const KernelParams& p, const ModelInputs& inputs);

/// Deterministic auto-selection: dw from the dimension rule, tpb starting
/// at 128 and halving (floor 32) until the shared-memory budget fits, ngs
/// from the workload target.
KernelParams auto_params(const ModelInputs& inputs);

struct SearchGrid {
    std::vector<std::uint32_t> gs_values = {1, 2, 4, 8, 16, 32, 64};
    std::vector<std::uint32_t> dw_values = {8, 16, 32};
    std::vector<std::uint32_t> tpb_values = {32, 64, 128, 256};
};

struct SearchTrace {
    std::vector<double> best_per_iteration;  // non-increasing under elitism
};

/// Crossover search over the parameter grid: sample a feasible population,
/// score by estimate_latency, keep the best half, refill by field-wise
/// crossover of random kept pairs with single-field mutation at rate 0.2.
/// Deterministic for a fixed seed. Throws if the grid has no feasible
/// point (relax the grid or the budgets).
ParamCandidate search_params(const ModelInputs& inputs,
                             std::uint32_t iterations = 15,
                             std::uint32_t population = 32,
                             std::uint64_t seed = 1,
                             const SearchGrid& grid = {},
                             SearchTrace* trace = nullptr);

}  // namespace gnnsim
