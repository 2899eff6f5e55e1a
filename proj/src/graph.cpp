#include "gnnsim/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

#include "gnnsim/error.hpp"

namespace gnnsim {

namespace {

// Strict decimal parse of one node id. Rejects signs, junk and overflow.
NodeId parse_node_id(const std::string& tok, std::size_t line) {
    if (tok.empty()) throw ParseError("empty token", line);
    if (tok[0] == '-') throw ParseError("negative node id '" + tok + "'", line);
    std::uint64_t value = 0;
    for (char c : tok) {
        if (c < '0' || c > '9') throw ParseError("malformed token '" + tok + "'", line);
        value = value * 10 + static_cast<std::uint64_t>(c - '0');
        if (value > 0xFFFFFFFEull) throw ParseError("node id '" + tok + "' out of range", line);
    }
    return static_cast<NodeId>(value);
}

}  // namespace

EdgeList load_edge_list(std::istream& in) {
    EdgeList el;
    bool have_header = false;
    NodeId header_nodes = 0;
    NodeId max_id_plus1 = 0;

    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::istringstream ls(raw);
        std::string a, b, extra;
        if (!(ls >> a)) continue;  // blank line
        if (a[0] == '#' || a[0] == '%') continue;
        if (a == "nodes") {
            if (!(ls >> b)) throw ParseError("header 'nodes' without a count", lineno);
            header_nodes = parse_node_id(b, lineno);
            have_header = true;
            continue;
        }
        if (!(ls >> b)) throw ParseError("expected 'src dst', got one token", lineno);
        if (ls >> extra) throw ParseError("trailing token '" + extra + "'", lineno);
        NodeId src = parse_node_id(a, lineno);
        NodeId dst = parse_node_id(b, lineno);
        el.edges.emplace_back(src, dst);
        max_id_plus1 = std::max({max_id_plus1, src + 1, dst + 1});
    }

    if (have_header) {
        if (max_id_plus1 > header_nodes)
            throw ParseError("node id " + std::to_string(max_id_plus1 - 1) +
                             " exceeds declared node count " + std::to_string(header_nodes));
        el.num_nodes = header_nodes;
    } else {
        el.num_nodes = max_id_plus1;
    }
    return el;
}

EdgeList load_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return load_edge_list(in);
}

CsrGraph to_csr(const EdgeList& el, bool symmetrize) {
    const NodeId n = el.num_nodes;
    std::vector<std::vector<NodeId>> rows(n);
    for (auto [u, v] : el.edges) {
        rows[u].push_back(v);
        if (symmetrize) rows[v].push_back(u);
    }

    CsrGraph g;
    g.num_nodes = n;
    g.row_ptr.assign(n + 1, 0);
    for (NodeId v = 0; v < n; ++v) {
        auto& row = rows[v];
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        g.row_ptr[v + 1] = g.row_ptr[v] + row.size();
        g.col_idx.insert(g.col_idx.end(), row.begin(), row.end());
    }
    return g;
}

EdgeList to_edge_list(const CsrGraph& g) {
    EdgeList el;
    el.num_nodes = g.num_nodes;
    el.edges.reserve(g.num_edges());
    for (NodeId v = 0; v < g.num_nodes; ++v)
        for (NodeId u : g.neighbors(v)) el.edges.emplace_back(v, u);
    return el;
}

DegreeStats degree_stats(const CsrGraph& g) {
    if (g.num_nodes == 0) throw DomainError("degree_stats: graph has no nodes");
    DegreeStats s;
    const double n = static_cast<double>(g.num_nodes);
    s.avg_degree = static_cast<double>(g.num_edges()) / n;
    double sq = 0.0;
    for (NodeId v = 0; v < g.num_nodes; ++v) {
        std::uint64_t d = g.degree(v);
        s.max_degree = std::max(s.max_degree, d);
        double dc = static_cast<double>(d) - s.avg_degree;
        sq += dc * dc;
    }
    s.stddev_degree = std::sqrt(sq / n);
    return s;
}

double aes(const EdgeList& el) {
    if (el.edges.empty()) throw DomainError("no edges in the input");
    double span_sum = 0.0;
    for (auto [u, v] : el.edges)
        span_sum += static_cast<double>(u > v ? u - v : v - u);
    return span_sum / static_cast<double>(el.edges.size());
}

FeatureMatrix ones_features(std::uint32_t n, std::uint32_t dim) {
    if (n == 0 || dim == 0) throw DomainError("ones_features: n and dim must be >= 1");
    FeatureMatrix x(n, dim);
    std::fill(x.values.begin(), x.values.end(), 1.0);
    return x;
}

}  // namespace gnnsim
