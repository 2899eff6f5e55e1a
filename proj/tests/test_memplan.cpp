#include <doctest.h>

#include <map>
#include <vector>

#include "gnnsim/error.hpp"
#include "gnnsim/memplan.hpp"
#include "gnnsim/schedule.hpp"
#include "helpers.hpp"

using namespace gnnsim;

namespace {

// Schedule with one single-neighbor group per entry of `targets`.
WarpSchedule sched_for(const std::vector<NodeId>& targets, std::uint32_t tpb,
                       KernelParams& p) {
    p.ngs = 1;
    p.tpb = tpb;
    std::vector<NeighborGroup> groups;
    for (std::uint32_t i = 0; i < targets.size(); ++i)
        groups.push_back({i, targets[i], i, i + 1});
    return map_warps(std::move(groups), p);
}

// Checks every plan invariant against the schedule it was built from.
void check_invariants(const MemPlan& plan, const WarpSchedule& s,
                      const KernelParams& p) {
    REQUIRE(plan.entries.size() == s.warps.size());
    CHECK(plan.shared_bytes_per_block ==
          static_cast<std::uint64_t>(s.warp_per_block) * p.dim * 4);
    for (std::uint32_t b = 0; b < s.num_blocks(); ++b) {
        const auto [lo, hi] = s.block_range(b);
        for (std::uint32_t w = lo; w < hi; ++w) {
            const WarpPlanEntry& e = plan.entries[w];
            CHECK(e.node == s.warps[w].target);
            CHECK(e.slot < s.warp_per_block);
            const bool starts_run = w == lo || s.warps[w - 1].target != s.warps[w].target;
            // Leaders are exactly the warps starting an in-block target run.
            CHECK(e.leader == starts_run);
            if (starts_run) {
                // Runs take slots 0, 1, 2, ... in order.
                std::uint32_t run_index = 0;
                for (std::uint32_t v = lo + 1; v <= w; ++v)
                    if (s.warps[v - 1].target != s.warps[v].target) ++run_index;
                CHECK(e.slot == run_index);
            } else {
                CHECK(e.slot == plan.entries[w - 1].slot);
            }
        }
    }
}

}  // namespace

TEST_SUITE("memplan") {

TEST_CASE("hand-traced six-warp fixture") {
    KernelParams p;
    p.dim = 16;
    const WarpSchedule s = sched_for({0, 0, 1, 2, 2, 2}, 64, p);
    const MemPlan plan = build_mem_plan(s, p);
    const std::vector<WarpPlanEntry> expected = {
        {0, 0, true},  {0, 0, false}, {0, 1, true},
        {1, 2, true},  {0, 2, true},  {0, 2, false},
    };
    CHECK(plan.entries == expected);
    CHECK(plan.shared_bytes_per_block == 2u * 16u * 4u);

    const auto leaders = leaders_per_node(plan, s);
    CHECK(leaders.at(0) == 1);
    CHECK(leaders.at(1) == 1);
    CHECK(leaders.at(2) == 2);
}

TEST_CASE("single group") {
    KernelParams p;
    const WarpSchedule s = sched_for({3}, 128, p);
    const MemPlan plan = build_mem_plan(s, p);
    REQUIRE(plan.entries.size() == 1);
    CHECK(plan.entries[0] == WarpPlanEntry{0, 3, true});
}

TEST_CASE("two targets in one block take slots 0 and 1") {
    KernelParams p;
    const WarpSchedule s = sched_for({0, 1}, 64, p);
    const MemPlan plan = build_mem_plan(s, p);
    CHECK(plan.entries[0] == WarpPlanEntry{0, 0, true});
    CHECK(plan.entries[1] == WarpPlanEntry{1, 1, true});
}

TEST_CASE("leader count equals blocks spanned") {
    KernelParams p;
    const WarpSchedule s = sched_for({0, 0}, 64, p);
    CHECK(leaders_per_node(build_mem_plan(s, p), s).at(0) == 1);

    // Every warp in its own block: one leader each.
    KernelParams q;
    const WarpSchedule s2 = sched_for({5, 6, 7}, 32, q);
    const auto leaders = leaders_per_node(build_mem_plan(s2, q), s2);
    CHECK(leaders.at(5) == 1);
    CHECK(leaders.at(6) == 1);
    CHECK(leaders.at(7) == 1);
}

TEST_CASE("non-consecutive same-target warps are rejected") {
    KernelParams p;
    const WarpSchedule s = sched_for({0, 1, 0}, 64, p);
    CHECK_THROWS_AS(build_mem_plan(s, p), DomainError);
}

TEST_CASE("schedule and params must agree on block width") {
    KernelParams p;
    WarpSchedule s = sched_for({0, 1}, 64, p);
    s.warp_per_block = 4;
    CHECK_THROWS_AS(build_mem_plan(s, p), DomainError);
}

TEST_CASE("invariants hold over random schedules") {
    std::mt19937_64 rng(41);
    const std::uint32_t tpbs[] = {32, 64, 128, 256};
    for (int round = 0; round < 300; ++round) {
        // Random consecutive-target schedule: random run lengths per node.
        std::vector<NodeId> targets;
        const NodeId nodes = 1 + static_cast<NodeId>(draw_index(rng, 12));
        for (NodeId v = 0; v < nodes; ++v) {
            const std::size_t runs = draw_index(rng, 4);
            for (std::size_t r = 0; r < runs; ++r) targets.push_back(v);
        }
        if (targets.empty()) targets.push_back(0);
        KernelParams p;
        p.dim = 1 + static_cast<std::uint32_t>(draw_index(rng, 64));
        const WarpSchedule s =
            sched_for(targets, tpbs[draw_index(rng, 4)], p);
        const MemPlan plan = build_mem_plan(s, p);
        check_invariants(plan, s, p);

        // Leader totals equal the number of blocks each node's run crosses.
        std::map<NodeId, std::uint32_t> expected;
        for (std::uint32_t b = 0; b < s.num_blocks(); ++b) {
            const auto [lo, hi] = s.block_range(b);
            for (std::uint32_t w = lo; w < hi; ++w)
                if (w == lo || s.warps[w - 1].target != s.warps[w].target)
                    ++expected[s.warps[w].target];
        }
        CHECK(leaders_per_node(plan, s) == expected);
    }
}

}  // TEST_SUITE
