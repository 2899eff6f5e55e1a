#pragma once

#include <cstdint>
#include <map>

#include "gnnsim/schedule.hpp"

namespace gnnsim {

/// Per-warp output of the shared-memory planner: which in-block slot the
/// warp accumulates into, the target node, and whether this warp flushes
/// the slot to global memory at block end.
struct WarpPlanEntry {
    std::uint32_t slot = 0;  // slot index within the block, not a byte offset
    NodeId node = 0;
    bool leader = false;

    bool operator==(const WarpPlanEntry&) const = default;
};

struct MemPlan {
    std::vector<WarpPlanEntry> entries;  // one per warp
    std::uint64_t shared_bytes_per_block = 0;  // warp_per_block * dim * 4
};

/// Builds the warp-aware shared-memory plan for a schedule.
///
/// Walks warps in order, one pass:
///   - the first warp of each block takes slot 0 and is a leader;
///   - a mid-block warp whose target matches its predecessor reuses the
///     predecessor's slot and is not a leader;
///   - a mid-block warp with a new target takes the next fresh slot and
///     becomes a leader;
///   - the slot counter resets at every block boundary.
///
/// Requires warps of the same target node to be consecutive (guaranteed by
/// partition_neighbors numbering); otherwise the plan would hand one node
/// two slots in a block, and a DomainError is thrown instead. Slot byte
/// offsets are slot * dim * 4 at use sites.
MemPlan build_mem_plan(const WarpSchedule& sched, const KernelParams& params);

/// Leader-warp count per target node. Equals the number of blocks the
/// node's groups span.
std::map<NodeId, std::uint32_t> leaders_per_node(const MemPlan& plan,
                                                 const WarpSchedule& sched);

}  // namespace gnnsim
