#include "gnnsim/memplan.hpp"

#include <unordered_set>

#include "gnnsim/error.hpp"

namespace gnnsim {

MemPlan build_mem_plan(const WarpSchedule& sched, const KernelParams& params) {
    params.validate();
    const std::uint32_t wpb = sched.warp_per_block;
    if (wpb == 0 || wpb != params.warps_per_block())
        throw DomainError("build_mem_plan: schedule block width does not match params");

    // Same-target warps must form one consecutive run.
    {
        std::unordered_set<NodeId> closed;
        bool have_last = false;
        NodeId last = 0;
        for (const NeighborGroup& g : sched.warps) {
            if (have_last && g.target == last) continue;
            if (closed.count(g.target))
                throw DomainError("build_mem_plan: warps of node " + std::to_string(g.target) +
                                  " are not consecutive");
            if (have_last) closed.insert(last);
            last = g.target;
            have_last = true;
        }
    }

    MemPlan plan;
    plan.entries.resize(sched.warps.size());
    plan.shared_bytes_per_block =
        static_cast<std::uint64_t>(wpb) * params.dim * 4;  // FloatS = 4 bytes per value

    std::uint32_t cnt = 0;
    std::uint32_t local_cnt = 0;
    NodeId last = 0;
    const std::uint32_t warp_num = sched.num_warps();
    while (cnt < warp_num) {
        const NodeId node = sched.warps[cnt].target;
        WarpPlanEntry& e = plan.entries[cnt];
        e.node = node;
        if (cnt % wpb == 0) {
            // Warp in the front of a thread block.
            e.slot = local_cnt;
            last = node;
            e.leader = true;
        } else if (node == last) {
            // Same target as the predecessor warp: share its slot.
            e.slot = local_cnt;
        } else {
            // New target: fresh slot, and this warp flushes it.
            ++local_cnt;
            e.slot = local_cnt;
            last = node;
            e.leader = true;
        }
        ++cnt;
        if (cnt % wpb == 0) local_cnt = 0;
    }
    return plan;
}

std::map<NodeId, std::uint32_t> leaders_per_node(const MemPlan& plan,
                                                 const WarpSchedule& sched) {
    if (plan.entries.size() != sched.warps.size())
        throw DomainError("leaders_per_node: plan does not match schedule");
    std::map<NodeId, std::uint32_t> counts;
    for (const WarpPlanEntry& e : plan.entries)
        if (e.leader) ++counts[e.node];
    return counts;
}

}  // namespace gnnsim
