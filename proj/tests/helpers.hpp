#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <utility>
#include <vector>

#include "gnnsim/graph.hpp"
#include "gnnsim/rand.hpp"

namespace testutil {

inline gnnsim::EdgeList make_edges(
    gnnsim::NodeId num_nodes,
    std::initializer_list<std::pair<gnnsim::NodeId, gnnsim::NodeId>> edges) {
    gnnsim::EdgeList el;
    el.num_nodes = num_nodes;
    el.edges.assign(edges.begin(), edges.end());
    return el;
}

/// Random simple-ish directed edge list (duplicates and self-loops
/// allowed with small probability) for property tests.
inline gnnsim::EdgeList random_edges(std::mt19937_64& rng, gnnsim::NodeId n,
                                     std::uint64_t num_edges) {
    gnnsim::EdgeList el;
    el.num_nodes = n;
    el.edges.reserve(num_edges);
    for (std::uint64_t i = 0; i < num_edges; ++i) {
        const auto u = static_cast<gnnsim::NodeId>(gnnsim::draw_index(rng, n));
        const auto v = static_cast<gnnsim::NodeId>(gnnsim::draw_index(rng, n));
        el.edges.emplace_back(u, v);
    }
    return el;
}

inline gnnsim::FeatureMatrix unit_random_features(std::mt19937_64& rng,
                                                  std::uint32_t n,
                                                  std::uint32_t dim) {
    gnnsim::FeatureMatrix x(n, dim);
    for (double& v : x.values) v = gnnsim::draw_unit(rng);
    return x;
}

}  // namespace testutil
