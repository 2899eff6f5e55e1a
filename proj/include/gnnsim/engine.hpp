#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>

#include "gnnsim/graph.hpp"
#include "gnnsim/memplan.hpp"
#include "gnnsim/schedule.hpp"

namespace gnnsim {

/// How per-group partial results reach the output rows.
///   NaiveAtomic — every (edge, dimension) contribution is its own atomic
///                 read-modify-write on global memory; the baseline.
///   UnitSync    — a group accumulates atomic-free in registers, then issues
///                 one atomic update per owned dimension.
///   WarpShared  — groups accumulate into per-block shared-memory slots and
///                 only leader warps flush a slot to global memory.
enum class Strategy { NaiveAtomic, UnitSync, WarpShared };

struct CacheConfig {
    std::uint64_t capacity = 64 * 1024;
    std::uint64_t line_size = 128;

    void validate() const;
};

/// Simulated kernel metrics for one aggregation run.
///
/// Accounting rules per strategy (E = edges covered, G = groups,
/// L(v) = leader warps of node v, D = embedding dimension):
///   atomic_ops = global_writes = E*D (NaiveAtomic), G*D (UnitSync),
///                D * sum_v L(v) (WarpShared)
///   global_reads = E*D for every strategy (each neighbor value is read once)
///   global_transactions = coalesced line count over all per-warp read and
///                         write steps (aligned 128-byte lines by default)
struct CostReport {
    std::uint64_t atomic_ops = 0;
    std::uint64_t global_reads = 0;
    std::uint64_t global_writes = 0;
    std::uint64_t global_transactions = 0;
    std::uint64_t shared_bytes_per_block = 0;
    std::uint64_t cache_hits = 0;
    std::uint64_t cache_accesses = 0;

    double cache_hit_rate() const noexcept {
        return cache_accesses ? static_cast<double>(cache_hits) /
                                    static_cast<double>(cache_accesses)
                              : 0.0;
    }
};

struct EngineOptions {
    unsigned workers = 1;  // parallel block tasks; 0 = hardware concurrency
    std::uint64_t transaction_line_bytes = 128;
    // Engaged -> neighbor loads are replayed through a per-block LRU cache
    // and the cache_* fields of the report are populated.
    std::optional<CacheConfig> cache = CacheConfig{};
};

/// Dense double-precision reference: y[v] = sum of x[u] over neighbors u,
/// ascending neighbor id.
FeatureMatrix aggregate_oracle(const CsrGraph& g, const FeatureMatrix& x);

/// Executes the 2D workload schedule for g and returns the aggregation
/// result plus the simulated cost metrics. The result matches
/// aggregate_oracle up to summation order (1e-12 relative), and for a
/// fixed input it is bit-identical across worker counts.
std::pair<FeatureMatrix, CostReport> aggregate_scheduled(
    const CsrGraph& g, const FeatureMatrix& x, const KernelParams& params,
    Strategy strategy, DimMode dim_mode, const EngineOptions& opts = {});

/// True when the matrices have the same shape and agree elementwise
/// within |a - b| <= rel_tol * max(|a|, |b|).
bool features_close(const FeatureMatrix& a, const FeatureMatrix& b,
                    double rel_tol);

/// Number of distinct aligned lines touched by one warp-step's byte
/// addresses - the coalesced transaction count of that step.
std::uint64_t count_transactions(std::span<const std::uint64_t> addresses,
                                 std::uint64_t line = 128);

/// Replays neighbor-embedding loads block by block (warps of a block
/// interleaved round-robin) through an LRU cache that resets at block
/// boundaries. Returns (hits, accesses) in line-touch units.
std::pair<std::uint64_t, std::uint64_t> simulate_cache(const CsrGraph& g,
                                                       const WarpSchedule& sched,
                                                       const CacheConfig& cfg,
                                                       std::uint32_t dim);

/// One graph-convolution layer: symmetric degree-normalized aggregation
/// combined with the dense update X*W. The dense update runs before
/// aggregation when it shrinks the dimension, after it otherwise; the
/// result does not depend on that choice. Zero-degree nodes normalize with
/// degree 1.
FeatureMatrix gcn_layer(const CsrGraph& g, const FeatureMatrix& x,
                        const FeatureMatrix& w, bool add_self_loops = false);

/// Single affine map followed by a rectifier; the update function of the
/// isomorphism-network layer.
struct AffineMap {
    FeatureMatrix weight;       // in_dim x out_dim
    std::vector<double> bias;   // out_dim
};

/// x'_i = relu(((1+eps) x_i + sum_{j in N(i)} x_j) W + b); aggregation runs
/// on the full input dimension, the affine map afterwards.
FeatureMatrix gin_layer(const CsrGraph& g, const FeatureMatrix& x, double eps,
                        const AffineMap& mlp);

}  // namespace gnnsim
