#include "gnnsim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <list>
#include <thread>
#include <unordered_map>

#include "gnnsim/error.hpp"

namespace gnnsim {
namespace {

// Feature rows are modeled as float32 storage for addressing purposes:
// element k of node u lives at byte (u * dim + k) * 4.
constexpr std::uint64_t kElemBytes = 4;

void check_features(const CsrGraph& g, const FeatureMatrix& x) {
    if (x.num_nodes != g.num_nodes)
        throw DomainError("feature rows (" + std::to_string(x.num_nodes) +
                          ") do not match graph nodes (" +
                          std::to_string(g.num_nodes) + ")");
}

std::uint64_t row_base(NodeId u, std::uint32_t dim) {
    return static_cast<std::uint64_t>(u) * dim * kElemBytes;
}

// Distinct lines touched when the warp's lanes access the dims of
// iteration `iter` within one node row. Lane dim indices ascend with the
// lane id in both assignment modes, so a single sweep suffices.
std::uint64_t step_lines(std::uint64_t base, const DimAssignment& dims,
                         std::size_t iter, std::uint64_t line) {
    std::uint64_t n = 0;
    std::uint64_t prev = std::numeric_limits<std::uint64_t>::max();
    for (const auto& lane : dims.lanes) {
        if (iter >= lane.size()) continue;
        const std::uint64_t l = (base + lane[iter] * kElemBytes) / line;
        if (l != prev) {
            ++n;
            prev = l;
        }
    }
    return n;
}

class LruCache {
  public:
    explicit LruCache(std::uint64_t capacity_lines) : cap_(capacity_lines) {}

    bool touch(std::uint64_t line) {
        auto it = pos_.find(line);
        if (it != pos_.end()) {
            order_.splice(order_.begin(), order_, it->second);
            return true;
        }
        order_.push_front(line);
        pos_[line] = order_.begin();
        if (order_.size() > cap_) {
            pos_.erase(order_.back());
            order_.pop_back();
        }
        return false;
    }

  private:
    std::uint64_t cap_;
    std::list<std::uint64_t> order_;
    std::unordered_map<std::uint64_t, std::list<std::uint64_t>::iterator> pos_;
};

// Replays the block's neighbor loads round-robin across its warps through
// a fresh LRU cache; accumulates line hits and accesses.
void replay_block_cache(const CsrGraph& g, const WarpSchedule& sched,
                        std::size_t lo, std::size_t hi, const CacheConfig& cfg,
                        std::uint32_t dim, std::uint64_t& hits,
                        std::uint64_t& accesses) {
    LruCache cache(cfg.capacity / cfg.line_size);
    const std::uint64_t row_bytes = static_cast<std::uint64_t>(dim) * kElemBytes;
    for (std::uint64_t k = 0;; ++k) {
        bool any = false;
        for (std::size_t w = lo; w < hi; ++w) {
            const NeighborGroup& grp = sched.warps[w];
            if (k >= grp.size()) continue;
            any = true;
            const NodeId u = g.col_idx[grp.begin + k];
            const std::uint64_t base = row_base(u, dim);
            const std::uint64_t first = base / cfg.line_size;
            const std::uint64_t last = (base + row_bytes - 1) / cfg.line_size;
            for (std::uint64_t l = first; l <= last; ++l) {
                ++accesses;
                if (cache.touch(l)) ++hits;
            }
        }
        if (!any) break;
    }
}

struct BlockOut {
    CostReport cost;
    // (output node, addend) pairs in flush order within the block.
    std::vector<std::pair<NodeId, std::vector<double>>> flushes;
};

void run_blocks(std::size_t num_blocks, unsigned workers,
                const std::function<void(std::size_t)>& fn) {
    if (workers == 0) {
        workers = std::thread::hardware_concurrency();
        if (workers == 0) workers = 1;
    }
    workers = static_cast<unsigned>(
        std::min<std::size_t>(workers, num_blocks ? num_blocks : 1));
    if (workers <= 1) {
        for (std::size_t b = 0; b < num_blocks; ++b) fn(b);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t b = next.fetch_add(1); b < num_blocks;
                     b = next.fetch_add(1))
                    fn(b);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

void CacheConfig::validate() const {
    if (line_size == 0) throw DomainError("cache line size must be positive");
    if (capacity < line_size || capacity % line_size != 0)
        throw DomainError("cache capacity must be a positive multiple of the line size");
}

FeatureMatrix aggregate_oracle(const CsrGraph& g, const FeatureMatrix& x) {
    check_features(g, x);
    FeatureMatrix y(g.num_nodes, x.dim);
    for (NodeId v = 0; v < g.num_nodes; ++v) {
        double* out = y.row(v);
        for (NodeId u : g.neighbors(v)) {
            const double* in = x.row(u);
            for (std::uint32_t d = 0; d < x.dim; ++d) out[d] += in[d];
        }
    }
    return y;
}

bool features_close(const FeatureMatrix& a, const FeatureMatrix& b,
                    double rel_tol) {
    if (a.num_nodes != b.num_nodes || a.dim != b.dim) return false;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double x = a.values[i];
        const double y = b.values[i];
        if (std::fabs(x - y) > rel_tol * std::max(std::fabs(x), std::fabs(y)))
            return false;
    }
    return true;
}

std::uint64_t count_transactions(std::span<const std::uint64_t> addresses,
                                 std::uint64_t line) {
    if (line == 0) throw DomainError("transaction line size must be positive");
    std::vector<std::uint64_t> lines;
    lines.reserve(addresses.size());
    for (std::uint64_t a : addresses) lines.push_back(a / line);
    std::sort(lines.begin(), lines.end());
    lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
    return lines.size();
}

std::pair<std::uint64_t, std::uint64_t> simulate_cache(const CsrGraph& g,
                                                       const WarpSchedule& sched,
                                                       const CacheConfig& cfg,
                                                       std::uint32_t dim) {
    cfg.validate();
    if (dim == 0) throw DomainError("dim must be positive");
    std::uint64_t hits = 0;
    std::uint64_t accesses = 0;
    for (std::size_t b = 0; b < sched.num_blocks(); ++b) {
        const auto [lo, hi] = sched.block_range(b);
        replay_block_cache(g, sched, lo, hi, cfg, dim, hits, accesses);
    }
    return {hits, accesses};
}

std::pair<FeatureMatrix, CostReport> aggregate_scheduled(
    const CsrGraph& g, const FeatureMatrix& x, const KernelParams& params,
    Strategy strategy, DimMode dim_mode, const EngineOptions& opts) {
    params.validate();
    check_features(g, x);
    if (x.dim != params.dim)
        throw DomainError("feature dim (" + std::to_string(x.dim) +
                          ") does not match kernel dim (" +
                          std::to_string(params.dim) + ")");
    if (opts.transaction_line_bytes == 0)
        throw DomainError("transaction line size must be positive");
    if (opts.cache) opts.cache->validate();

    const WarpSchedule sched = map_warps(partition_neighbors(g, params.ngs), params);
    const DimAssignment dims = partition_dims(params.dim, params.dw, dim_mode);
    const std::size_t iters = (params.dim + params.dw - 1) / params.dw;
    const std::uint32_t wpb = params.warps_per_block();
    const std::uint64_t line = opts.transaction_line_bytes;
    const std::uint32_t dim = params.dim;

    MemPlan plan;
    if (strategy == Strategy::WarpShared) plan = build_mem_plan(sched, params);

    const std::size_t num_blocks = sched.num_blocks();
    std::vector<BlockOut> blocks(num_blocks);

    auto process_block = [&](std::size_t b) {
        BlockOut& out = blocks[b];
        const auto [lo, hi] = sched.block_range(b);
        std::vector<std::vector<double>> slots;
        if (strategy == Strategy::WarpShared)
            slots.assign(wpb, std::vector<double>(dim, 0.0));

        for (std::size_t w = lo; w < hi; ++w) {
            const NeighborGroup& grp = sched.warps[w];
            const std::uint64_t size = grp.size();
            std::vector<double> partial(dim, 0.0);
            for (std::uint64_t p = grp.begin; p < grp.end; ++p) {
                const NodeId u = g.col_idx[p];
                const double* in = x.row(u);
                for (std::uint32_t d = 0; d < dim; ++d) partial[d] += in[d];
                const std::uint64_t base = row_base(u, dim);
                for (std::size_t i = 0; i < iters; ++i)
                    out.cost.global_transactions += step_lines(base, dims, i, line);
                if (strategy == Strategy::NaiveAtomic) {
                    const std::uint64_t tbase = row_base(grp.target, dim);
                    for (std::size_t i = 0; i < iters; ++i)
                        out.cost.global_transactions += step_lines(tbase, dims, i, line);
                }
            }
            out.cost.global_reads += size * dim;
            switch (strategy) {
                case Strategy::NaiveAtomic:
                    out.cost.atomic_ops += size * dim;
                    out.cost.global_writes += size * dim;
                    out.flushes.emplace_back(grp.target, std::move(partial));
                    break;
                case Strategy::UnitSync: {
                    out.cost.atomic_ops += dim;
                    out.cost.global_writes += dim;
                    const std::uint64_t tbase = row_base(grp.target, dim);
                    for (std::size_t i = 0; i < iters; ++i)
                        out.cost.global_transactions += step_lines(tbase, dims, i, line);
                    out.flushes.emplace_back(grp.target, std::move(partial));
                    break;
                }
                case Strategy::WarpShared: {
                    std::vector<double>& slot = slots[plan.entries[w].slot];
                    for (std::uint32_t d = 0; d < dim; ++d) slot[d] += partial[d];
                    break;
                }
            }
        }

        if (strategy == Strategy::WarpShared) {
            for (std::size_t w = lo; w < hi; ++w) {
                const WarpPlanEntry& e = plan.entries[w];
                if (!e.leader) continue;
                out.cost.atomic_ops += dim;
                out.cost.global_writes += dim;
                const std::uint64_t tbase = row_base(e.node, dim);
                for (std::size_t i = 0; i < iters; ++i)
                    out.cost.global_transactions += step_lines(tbase, dims, i, line);
                out.flushes.emplace_back(e.node, slots[e.slot]);
            }
        }

        if (opts.cache)
            replay_block_cache(g, sched, lo, hi, *opts.cache, dim,
                               out.cost.cache_hits, out.cost.cache_accesses);
    };

    run_blocks(num_blocks, opts.workers, process_block);

    FeatureMatrix y(g.num_nodes, dim);
    CostReport total;
    if (strategy == Strategy::WarpShared)
        total.shared_bytes_per_block = plan.shared_bytes_per_block;
    for (const BlockOut& out : blocks) {
        total.atomic_ops += out.cost.atomic_ops;
        total.global_reads += out.cost.global_reads;
        total.global_writes += out.cost.global_writes;
        total.global_transactions += out.cost.global_transactions;
        total.cache_hits += out.cost.cache_hits;
        total.cache_accesses += out.cost.cache_accesses;
        for (const auto& [node, vals] : out.flushes) {
            double* row = y.row(node);
            for (std::uint32_t d = 0; d < dim; ++d) row[d] += vals[d];
        }
    }
    return {std::move(y), total};
}

namespace {

FeatureMatrix matmul(const FeatureMatrix& a, const FeatureMatrix& w) {
    if (w.num_nodes != a.dim)
        throw DomainError("weight rows (" + std::to_string(w.num_nodes) +
                          ") do not match input dim (" + std::to_string(a.dim) + ")");
    FeatureMatrix out(a.num_nodes, w.dim);
    for (std::uint32_t i = 0; i < a.num_nodes; ++i) {
        const double* ai = a.row(i);
        double* oi = out.row(i);
        for (std::uint32_t k = 0; k < a.dim; ++k) {
            const double aik = ai[k];
            if (aik == 0.0) continue;
            const double* wk = w.row(k);
            for (std::uint32_t j = 0; j < w.dim; ++j) oi[j] += aik * wk[j];
        }
    }
    return out;
}

bool has_self_loop(const CsrGraph& g, NodeId v) {
    const auto n = g.neighbors(v);
    return std::binary_search(n.begin(), n.end(), v);
}

// z = D^{-1/2} A D^{-1/2} x, with A optionally unioned with the identity.
// Zero-degree nodes use degree 1 so the normalization stays defined.
FeatureMatrix normalized_aggregate(const CsrGraph& g, const FeatureMatrix& x,
                                   bool add_self_loops) {
    check_features(g, x);
    std::vector<double> norm(g.num_nodes);
    std::vector<char> implicit_self(g.num_nodes, 0);
    for (NodeId v = 0; v < g.num_nodes; ++v) {
        std::uint64_t deg = g.degree(v);
        if (add_self_loops && !has_self_loop(g, v)) {
            implicit_self[v] = 1;
            ++deg;
        }
        if (deg == 0) deg = 1;
        norm[v] = 1.0 / std::sqrt(static_cast<double>(deg));
    }
    FeatureMatrix z(g.num_nodes, x.dim);
    for (NodeId v = 0; v < g.num_nodes; ++v) {
        double* out = z.row(v);
        for (NodeId u : g.neighbors(v)) {
            const double c = norm[v] * norm[u];
            const double* in = x.row(u);
            for (std::uint32_t d = 0; d < x.dim; ++d) out[d] += c * in[d];
        }
        if (implicit_self[v]) {
            const double c = norm[v] * norm[v];
            const double* in = x.row(v);
            for (std::uint32_t d = 0; d < x.dim; ++d) out[d] += c * in[d];
        }
    }
    return z;
}

}  // namespace

FeatureMatrix gcn_layer(const CsrGraph& g, const FeatureMatrix& x,
                        const FeatureMatrix& w, bool add_self_loops) {
    check_features(g, x);
    if (w.num_nodes != x.dim)
        throw DomainError("weight rows (" + std::to_string(w.num_nodes) +
                          ") do not match input dim (" + std::to_string(x.dim) + ")");
    if (w.dim < x.dim)
        return normalized_aggregate(g, matmul(x, w), add_self_loops);
    return matmul(normalized_aggregate(g, x, add_self_loops), w);
}

FeatureMatrix gin_layer(const CsrGraph& g, const FeatureMatrix& x, double eps,
                        const AffineMap& mlp) {
    check_features(g, x);
    if (mlp.weight.num_nodes != x.dim)
        throw DomainError("affine weight rows (" + std::to_string(mlp.weight.num_nodes) +
                          ") do not match input dim (" + std::to_string(x.dim) + ")");
    if (mlp.bias.size() != mlp.weight.dim)
        throw DomainError("affine bias size (" + std::to_string(mlp.bias.size()) +
                          ") does not match output dim (" +
                          std::to_string(mlp.weight.dim) + ")");
    FeatureMatrix z = aggregate_oracle(g, x);
    const double scale = 1.0 + eps;
    for (std::uint32_t i = 0; i < g.num_nodes; ++i) {
        double* zi = z.row(i);
        const double* xi = x.row(i);
        for (std::uint32_t d = 0; d < x.dim; ++d) zi[d] += scale * xi[d];
    }
    FeatureMatrix h = matmul(z, mlp.weight);
    for (std::uint32_t i = 0; i < h.num_nodes; ++i) {
        double* hi = h.row(i);
        for (std::uint32_t j = 0; j < h.dim; ++j)
            hi[j] = std::max(0.0, hi[j] + mlp.bias[j]);
    }
    return h;
}

}  // namespace gnnsim
