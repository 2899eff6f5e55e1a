#pragma once

#include <cstdint>
#include <vector>

#include "gnnsim/graph.hpp"

namespace gnnsim {

/// One community id per node. Ids are dense: every id in
/// [0, num_communities) is used by at least one node.
struct CommunityAssignment {
    std::vector<std::uint32_t> com_idx;
    std::uint32_t num_communities = 0;
};

/// Old-id <-> new-id permutation pair, mutually inverse.
struct NodeMapping {
    std::vector<NodeId> old_to_new;
    std::vector<NodeId> new_to_old;
};

/// Greedy agglomerative modularity clustering. Starts from singleton
/// communities and repeatedly merges the connected community pair with the
/// largest positive modularity gain; stops when no merge improves
/// modularity. Ties break on the smallest (id, id) pair, where a community
/// is identified by its smallest member node, so the result is
/// deterministic. The graph is treated as undirected; self-loops are
/// ignored for clustering purposes.
CommunityAssignment detect_communities(const CsrGraph& g);

/// Modularity Q = sum_c (e_c/m - (d_c/2m)^2) of an assignment over the
/// undirected simple graph underlying g (self-loops ignored). Returns 0
/// for an edgeless graph.
double modularity(const CsrGraph& g, const CommunityAssignment& ca);

/// Two-step renumbering: order nodes by (community id, old node id); the
/// rank in that order is the new id.
NodeMapping build_mapping(const CommunityAssignment& ca);

/// Builds the mapping pair from an old->new permutation vector; throws
/// DomainError when the vector is not a permutation of [0, size).
NodeMapping mapping_from_vector(std::vector<NodeId> old_to_new);

/// Relabels the graph: edge (u, v) exists in the output iff
/// (old(u), old(v)) exists in the input. Rows come back in canonical CSR
/// form. Throws DomainError when the mapping does not fit the graph.
CsrGraph apply_mapping(const CsrGraph& g, const NodeMapping& m);

/// Relabels an edge list in place-order: edge i of the output is edge i of
/// the input with both endpoints renamed.
EdgeList apply_mapping(const EdgeList& el, const NodeMapping& m);

/// Reorder decision rule: sqrt(AES) > floor(sqrt(num_nodes) / 100).
bool should_reorder(const EdgeList& el);

}  // namespace gnnsim
