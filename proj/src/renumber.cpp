#include "gnnsim/renumber.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "gnnsim/error.hpp"

namespace gnnsim {

namespace {

// Undirected simple edges {u, v}, u < v, self-loops dropped. The input CSR
// may or may not be symmetric; both directions collapse to one entry.
std::vector<std::pair<NodeId, NodeId>> undirected_edges(const CsrGraph& g) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(g.num_edges());
    for (NodeId v = 0; v < g.num_nodes; ++v)
        for (NodeId u : g.neighbors(v)) {
            if (u == v) continue;
            edges.emplace_back(std::min(u, v), std::max(u, v));
        }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

}  // namespace

CommunityAssignment detect_communities(const CsrGraph& g) {
    const NodeId n = g.num_nodes;
    CommunityAssignment ca;
    ca.com_idx.assign(n, 0);

    const auto edges = undirected_edges(g);
    const double m = static_cast<double>(edges.size());

    // Community state. A community is named after its smallest member node;
    // merging a and b keeps min(a, b) as the surviving name.
    std::vector<bool> alive(n, true);
    std::vector<double> deg_sum(n, 0.0);
    std::vector<std::unordered_map<NodeId, double>> between(n);
    std::vector<std::vector<NodeId>> members(n);
    for (NodeId v = 0; v < n; ++v) members[v].push_back(v);

    for (auto [u, v] : edges) {
        deg_sum[u] += 1.0;
        deg_sum[v] += 1.0;
        between[u][v] += 1.0;
        between[v][u] += 1.0;
    }

    if (m > 0) {
        for (;;) {
            // Best positive-gain pair among connected communities.
            double best_gain = 0.0;
            NodeId best_a = n, best_b = n;
            for (NodeId a = 0; a < n; ++a) {
                if (!alive[a]) continue;
                for (const auto& [b, w] : between[a]) {
                    if (b <= a) continue;
                    double gain = w / m - deg_sum[a] * deg_sum[b] / (2.0 * m * m);
                    if (gain > best_gain ||
                        (gain == best_gain && best_a < n &&
                         std::make_pair(a, b) < std::make_pair(best_a, best_b))) {
                        best_gain = gain;
                        best_a = a;
                        best_b = b;
                    }
                }
            }
            if (best_gain <= 0.0 || best_a == n) break;

            const NodeId a = best_a, b = best_b;  // a < b; b merges into a
            deg_sum[a] += deg_sum[b];
            members[a].insert(members[a].end(), members[b].begin(), members[b].end());
            members[b].clear();
            between[a].erase(b);
            for (const auto& [c, w] : between[b]) {
                if (c == a) continue;
                between[a][c] += w;
                between[c].erase(b);
                between[c][a] += w;
            }
            between[b].clear();
            alive[b] = false;
        }
    }

    // Dense community ids in order of first appearance by node id.
    std::vector<std::uint32_t> label(n, 0);
    for (NodeId c = 0; c < n; ++c)
        for (NodeId v : members[c]) label[v] = c;
    std::unordered_map<std::uint32_t, std::uint32_t> dense;
    for (NodeId v = 0; v < n; ++v) {
        auto it = dense.find(label[v]);
        if (it == dense.end())
            it = dense.emplace(label[v], static_cast<std::uint32_t>(dense.size())).first;
        ca.com_idx[v] = it->second;
    }
    ca.num_communities = static_cast<std::uint32_t>(dense.size());
    return ca;
}

double modularity(const CsrGraph& g, const CommunityAssignment& ca) {
    if (ca.com_idx.size() != g.num_nodes)
        throw DomainError("modularity: assignment size mismatch");
    const auto edges = undirected_edges(g);
    if (edges.empty()) return 0.0;
    const double m = static_cast<double>(edges.size());

    std::vector<double> intra(ca.num_communities, 0.0);
    std::vector<double> deg(ca.num_communities, 0.0);
    for (auto [u, v] : edges) {
        deg[ca.com_idx[u]] += 1.0;
        deg[ca.com_idx[v]] += 1.0;
        if (ca.com_idx[u] == ca.com_idx[v]) intra[ca.com_idx[u]] += 1.0;
    }
    double q = 0.0;
    for (std::uint32_t c = 0; c < ca.num_communities; ++c) {
        double frac = deg[c] / (2.0 * m);
        q += intra[c] / m - frac * frac;
    }
    return q;
}

NodeMapping build_mapping(const CommunityAssignment& ca) {
    const auto n = static_cast<NodeId>(ca.com_idx.size());
    // Bucket nodes per community; within a community ascending node id is
    // preserved by the scan order.
    std::vector<std::vector<NodeId>> buckets(ca.num_communities);
    for (NodeId v = 0; v < n; ++v) buckets[ca.com_idx[v]].push_back(v);

    NodeMapping m;
    m.old_to_new.assign(n, 0);
    m.new_to_old.assign(n, 0);
    NodeId next = 0;
    for (const auto& bucket : buckets)
        for (NodeId old : bucket) {
            m.old_to_new[old] = next;
            m.new_to_old[next] = old;
            ++next;
        }
    return m;
}

NodeMapping mapping_from_vector(std::vector<NodeId> old_to_new) {
    const auto n = static_cast<NodeId>(old_to_new.size());
    NodeMapping m;
    m.old_to_new = std::move(old_to_new);
    m.new_to_old.assign(n, n);
    for (NodeId v = 0; v < n; ++v) {
        const NodeId w = m.old_to_new[v];
        if (w >= n || m.new_to_old[w] != n)
            throw DomainError("mapping is not a permutation of its index range");
        m.new_to_old[w] = v;
    }
    return m;
}

CsrGraph apply_mapping(const CsrGraph& g, const NodeMapping& m) {
    const NodeId n = g.num_nodes;
    if (m.old_to_new.size() != n || m.new_to_old.size() != n)
        throw DomainError("apply_mapping: mapping size does not match graph");
    for (NodeId v = 0; v < n; ++v) {
        if (m.old_to_new[v] >= n || m.new_to_old[m.old_to_new[v]] != v)
            throw DomainError("apply_mapping: mapping is not a permutation");
    }

    CsrGraph out;
    out.num_nodes = n;
    out.row_ptr.assign(n + 1, 0);
    out.col_idx.reserve(g.num_edges());
    std::vector<NodeId> row;
    for (NodeId v = 0; v < n; ++v) {
        const NodeId old_v = m.new_to_old[v];
        row.clear();
        for (NodeId u : g.neighbors(old_v)) row.push_back(m.old_to_new[u]);
        std::sort(row.begin(), row.end());
        out.row_ptr[v + 1] = out.row_ptr[v] + row.size();
        out.col_idx.insert(out.col_idx.end(), row.begin(), row.end());
    }
    return out;
}

EdgeList apply_mapping(const EdgeList& el, const NodeMapping& m) {
    if (m.old_to_new.size() != el.num_nodes)
        throw DomainError("apply_mapping: mapping size does not match edge list");
    EdgeList out;
    out.num_nodes = el.num_nodes;
    out.edges.reserve(el.edges.size());
    for (auto [u, v] : el.edges)
        out.edges.emplace_back(m.old_to_new[u], m.old_to_new[v]);
    return out;
}

bool should_reorder(const EdgeList& el) {
    double threshold = std::floor(std::sqrt(static_cast<double>(el.num_nodes)) / 100.0);
    return std::sqrt(aes(el)) > threshold;
}

}  // namespace gnnsim
