#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "gnnsim/graph.hpp"

namespace gnnsim {

/// Tunable kernel parameter set consumed by scheduling, the memory planner,
/// the execution engine and the analytical model.
struct KernelParams {
    std::uint32_t ngs = 16;  // neighbor-group size
    std::uint32_t dw = 32;   // dimension workers (lanes splitting one group)
    std::uint32_t tpb = 128; // threads per block, multiple of tpw, <= 1024
    std::uint32_t tpw = 32;  // threads per warp, fixed
    std::uint32_t dim = 16;  // embedding dimension

    std::uint32_t warps_per_block() const noexcept { return tpb / tpw; }

    /// Throws DomainError if any invariant is violated.
    void validate() const;

    bool operator==(const KernelParams&) const = default;
};

/// The basic schedulable workload unit: one slice of one node's neighbor
/// list, stored as (id, target, CSR index range).
struct NeighborGroup {
    std::uint32_t id = 0;
    NodeId target = 0;
    std::uint64_t begin = 0;  // CSR offsets, [begin, end)
    std::uint64_t end = 0;

    std::uint64_t size() const noexcept { return end - begin; }

    bool operator==(const NeighborGroup&) const = default;
};

enum class DimMode { Sequential, Cyclic };

/// Which embedding dimensions each lane owns. The lanes always partition
/// [0, dim) exactly; lanes beyond dim own nothing.
struct DimAssignment {
    DimMode mode = DimMode::Cyclic;
    std::vector<std::vector<std::uint32_t>> lanes;
};

/// Warp-aligned mapping: warp i owns neighbor group i; block j is the run
/// of warp_per_block consecutive warps starting at j * warp_per_block. The
/// final block may be partially filled.
struct WarpSchedule {
    std::vector<NeighborGroup> warps;
    std::uint32_t warp_per_block = 1;

    std::uint32_t num_warps() const noexcept {
        return static_cast<std::uint32_t>(warps.size());
    }
    std::uint32_t num_blocks() const noexcept {
        return (num_warps() + warp_per_block - 1) / warp_per_block;
    }
    /// Warp-index range [first, last) of block b.
    std::pair<std::uint32_t, std::uint32_t> block_range(std::uint32_t b) const noexcept {
        std::uint32_t first = b * warp_per_block;
        return {first, std::min(first + warp_per_block, num_warps())};
    }
};

/// Splits each node's CSR row into ceil(degree/ngs) consecutive groups;
/// only the last group of a node may be smaller than ngs. Groups are
/// numbered in node order, then range order, so groups of one target node
/// always occupy consecutive ids.
std::vector<NeighborGroup> partition_neighbors(const CsrGraph& g, std::uint32_t ngs);

/// Sequential: lane t owns the t-th contiguous chunk of ceil(dim/dw)
/// dimensions. Cyclic: lane t owns {t, t+dw, t+2dw, ...}.
DimAssignment partition_dims(std::uint32_t dim, std::uint32_t dw, DimMode mode);

/// Assigns warp i to group i and derives the block layout from
/// params.tpb / params.tpw. Throws DomainError when tpb is not a multiple
/// of tpw.
WarpSchedule map_warps(std::vector<NeighborGroup> groups, const KernelParams& params);

}  // namespace gnnsim
