#include "gnnsim/pipeline.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

#include "gnnsim/error.hpp"
#include "gnnsim/memplan.hpp"
#include "gnnsim/rand.hpp"

namespace gnnsim {

EdgeList planted_partition(std::uint32_t communities, std::uint32_t size,
                           double p_in, double p_out, bool shuffle,
                           std::uint64_t seed) {
    if (communities == 0 || size == 0)
        throw DomainError("need at least one community of at least one node");
    if (!(p_in >= 0.0 && p_in <= 1.0) || !(p_out >= 0.0 && p_out <= 1.0))
        throw DomainError("edge probabilities must lie in [0, 1]");
    const std::uint64_t total =
        static_cast<std::uint64_t>(communities) * size;
    if (total > 1u << 16)
        throw DomainError("generator samples all node pairs; limit is 65536 nodes");
    const auto n = static_cast<NodeId>(total);

    std::mt19937_64 rng(seed);
    EdgeList el;
    el.num_nodes = n;
    for (NodeId i = 0; i < n; ++i) {
        const NodeId ci = i / size;
        for (NodeId j = i + 1; j < n; ++j) {
            const double p = (j / size == ci) ? p_in : p_out;
            if (draw_unit(rng) < p) el.edges.emplace_back(i, j);
        }
    }
    if (shuffle) {
        std::vector<NodeId> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (NodeId i = n; i > 1; --i)
            std::swap(perm[i - 1], perm[draw_index(rng, i)]);
        for (auto& [u, v] : el.edges) {
            u = perm[u];
            v = perm[v];
        }
    }
    return el;
}

std::string edge_list_text(const EdgeList& el) {
    std::ostringstream out;
    out << "nodes " << el.num_nodes << '\n';
    for (auto [u, v] : el.edges) out << u << ' ' << v << '\n';
    return out.str();
}

FeatureMatrix random_features(std::uint32_t num_nodes, std::uint32_t dim,
                              std::uint64_t seed) {
    if (dim == 0) throw DomainError("dim must be positive");
    std::mt19937_64 rng(seed);
    FeatureMatrix x;
    x.num_nodes = num_nodes;
    x.dim = dim;
    x.values.resize(static_cast<std::size_t>(num_nodes) * dim);
    for (double& v : x.values) v = draw_unit(rng);
    return x;
}

StatsReport analyze(const EdgeList& el) {
    StatsReport r;
    r.num_nodes = el.num_nodes;
    r.num_edges = el.num_edges();
    r.aes = aes(el);
    r.sqrt_aes = std::sqrt(r.aes);
    r.threshold = std::floor(std::sqrt(static_cast<double>(el.num_nodes)) / 100.0);
    r.reorder = r.sqrt_aes > r.threshold;
    r.degrees = degree_stats(to_csr(el, true));
    return r;
}

ReorderResult reorder_edges(const EdgeList& el) {
    const CsrGraph g = to_csr(el, true);
    const CommunityAssignment ca = detect_communities(g);
    ReorderResult r;
    r.mapping = build_mapping(ca);
    r.num_communities = ca.num_communities;
    r.modularity = modularity(g, ca);
    r.aes_before = aes(el);
    r.aes_after = aes(apply_mapping(el, r.mapping));
    return r;
}

RunResult run_pipeline(const EdgeList& el, const RunConfig& config) {
    RunResult result;
    result.stats = analyze(el);

    EdgeList work = el;
    result.reordered = config.force_reorder.value_or(result.stats.reorder);
    if (result.reordered) {
        result.reorder = reorder_edges(el);
        work = apply_mapping(el, result.reorder->mapping);
    }
    const CsrGraph g = to_csr(work, true);

    if (config.params) {
        result.params = *config.params;
        result.params.validate();
    } else {
        result.params = auto_params(ModelInputs::from_graph(g, config.dim));
    }

    const FeatureMatrix x =
        random_features(g.num_nodes, result.params.dim, config.seed);
    EngineOptions opts;
    opts.workers = config.workers;
    opts.cache = config.cache;
    auto [y, report] = aggregate_scheduled(g, x, result.params, config.strategy,
                                           config.dim_mode, opts);
    if (!features_close(y, aggregate_oracle(g, x), 1e-12))
        throw InternalError("simulated aggregation deviates from the dense reference");
    result.report = report;
    result.output = std::move(y);
    return result;
}

}  // namespace gnnsim
