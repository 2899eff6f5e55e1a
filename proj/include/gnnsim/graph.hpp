#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gnnsim {

using NodeId = std::uint32_t;

/// Directed edge list exactly as read from the input stream. Edge order is
/// preserved so that metrics computed "on the fly during loading" (edge span)
/// are reproducible.
struct EdgeList {
    NodeId num_nodes = 0;
    std::vector<std::pair<NodeId, NodeId>> edges;

    std::size_t num_edges() const noexcept { return edges.size(); }
};

/// Immutable compressed-sparse-row adjacency. Canonical form: rows sorted
/// ascending, duplicate entries removed.
struct CsrGraph {
    NodeId num_nodes = 0;
    std::vector<std::uint64_t> row_ptr;  // length num_nodes + 1
    std::vector<NodeId> col_idx;         // length num_edges

    std::uint64_t num_edges() const noexcept { return col_idx.size(); }

    std::uint64_t degree(NodeId v) const { return row_ptr[v + 1] - row_ptr[v]; }

    std::span<const NodeId> neighbors(NodeId v) const {
        return {col_idx.data() + row_ptr[v], col_idx.data() + row_ptr[v + 1]};
    }

    bool operator==(const CsrGraph&) const = default;
};

/// Row-major dense matrix of doubles. Doubles as node-embedding storage
/// (num_nodes x dim) and as weight matrices (rows x cols).
struct FeatureMatrix {
    std::uint32_t num_nodes = 0;
    std::uint32_t dim = 0;
    std::vector<double> values;  // num_nodes * dim entries

    FeatureMatrix() = default;
    FeatureMatrix(std::uint32_t n, std::uint32_t d)
        : num_nodes(n), dim(d), values(static_cast<std::size_t>(n) * d, 0.0) {}

    double* row(std::uint32_t i) { return values.data() + static_cast<std::size_t>(i) * dim; }
    const double* row(std::uint32_t i) const {
        return values.data() + static_cast<std::size_t>(i) * dim;
    }

    double& at(std::uint32_t i, std::uint32_t j) { return row(i)[j]; }
    double at(std::uint32_t i, std::uint32_t j) const { return row(i)[j]; }

    bool operator==(const FeatureMatrix&) const = default;
};

struct DegreeStats {
    double avg_degree = 0.0;
    std::uint64_t max_degree = 0;
    double stddev_degree = 0.0;  // population stddev
};

/// Parses the plain-text edge-list format:
///   - one edge per line: "src dst" in decimal
///   - lines starting with '#' or '%' are comments, blank lines are skipped
///   - an optional "nodes <n>" line pins the node count
/// Duplicate edges are kept; num_nodes defaults to 1 + max id seen.
/// Throws ParseError (with line number) on malformed tokens or negative ids.
EdgeList load_edge_list(std::istream& in);
EdgeList load_edge_list_file(const std::string& path);

/// Converts to canonical CSR: rows sorted ascending, duplicates removed.
/// With symmetrize, every edge is inserted in both directions first.
CsrGraph to_csr(const EdgeList& el, bool symmetrize);

/// Expands a CSR graph back to a directed edge list (row order).
EdgeList to_edge_list(const CsrGraph& g);

/// Population statistics over per-row degrees. Throws DomainError on an
/// empty graph.
DegreeStats degree_stats(const CsrGraph& g);

/// Averaged edge span: mean |src - dst| over the edge list as loaded,
/// before any symmetrization. Throws DomainError when there are no edges.
double aes(const EdgeList& el);

/// All-ones embedding matrix, the stand-in for real node features.
FeatureMatrix ones_features(std::uint32_t n, std::uint32_t dim);

}  // namespace gnnsim
