#pragma once

#include "mograph/graph.hpp"

#include <cstdint>
#include <vector>

namespace mograph {

struct SccDecomposition {
    std::vector<std::vector<int>> components;  // node ids, each sorted ascending
    std::vector<int> component_of;             // node id -> component index
    int largest_index = 0;                     // argmax size, lowest index on ties
};

/// Tarjan strongly-connected-component decomposition (iterative, linear time).
/// Components are indexed in emission order.
SccDecomposition scc_decompose(const GestureGraph& graph);

struct PruneResult {
    GestureGraph graph;
    int components_before = 0;
    int bridge_pairs_added = 0;
};

/// Merges every non-largest component into the largest one by adding the
/// bidirectional bridge between the minimum-distance node pair
/// (u in largest, v in component); ties resolved by lowest (u, v) id pair.
/// The output is strongly connected; existing nodes and edges are untouched.
PruneResult prune_graph(const GestureGraph& graph);

/// Monte-Carlo estimate of the probability that a uniform random walk of
/// `path_length` node-steps hits a node with out-degree 0 before completing.
double dead_end_probability(const GestureGraph& graph, int path_length, int trials,
                            std::uint64_t seed);

}  // namespace mograph
