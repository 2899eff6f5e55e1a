#include "gnnsim/schedule.hpp"

#include "gnnsim/error.hpp"

namespace gnnsim {

void KernelParams::validate() const {
    if (ngs < 1) throw DomainError("params: ngs must be >= 1");
    if (tpw != 32) throw DomainError("params: tpw is fixed at 32");
    if (dw < 1 || dw > tpw) throw DomainError("params: dw must be in [1, tpw]");
    if (tpb == 0 || tpb % tpw != 0) throw DomainError("params: tpb must be a positive multiple of tpw");
    if (tpb > 1024) throw DomainError("params: tpb must be <= 1024");
    if (dim < 1) throw DomainError("params: dim must be >= 1");
}

std::vector<NeighborGroup> partition_neighbors(const CsrGraph& g, std::uint32_t ngs) {
    if (ngs < 1) throw DomainError("partition_neighbors: ngs must be >= 1");
    std::vector<NeighborGroup> groups;
    std::uint32_t next_id = 0;
    for (NodeId v = 0; v < g.num_nodes; ++v) {
        std::uint64_t begin = g.row_ptr[v];
        const std::uint64_t row_end = g.row_ptr[v + 1];
        while (begin < row_end) {
            std::uint64_t end = std::min<std::uint64_t>(begin + ngs, row_end);
            groups.push_back({next_id++, v, begin, end});
            begin = end;
        }
    }
    return groups;
}

DimAssignment partition_dims(std::uint32_t dim, std::uint32_t dw, DimMode mode) {
    if (dw < 1) throw DomainError("partition_dims: dw must be >= 1");
    DimAssignment da;
    da.mode = mode;
    da.lanes.resize(dw);
    if (mode == DimMode::Sequential) {
        const std::uint32_t chunk = (dim + dw - 1) / dw;
        for (std::uint32_t t = 0; t < dw; ++t)
            for (std::uint32_t d = t * chunk; d < std::min((t + 1) * chunk, dim); ++d)
                da.lanes[t].push_back(d);
    } else {
        for (std::uint32_t t = 0; t < dw; ++t)
            for (std::uint32_t d = t; d < dim; d += dw) da.lanes[t].push_back(d);
    }
    return da;
}

WarpSchedule map_warps(std::vector<NeighborGroup> groups, const KernelParams& params) {
    params.validate();
    WarpSchedule ws;
    ws.warps = std::move(groups);
    ws.warp_per_block = params.warps_per_block();
    return ws;
}

}  // namespace gnnsim
