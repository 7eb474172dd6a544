#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace swissfair {

using Weight = std::int64_t;

struct Edge {
    int u = 0;
    int v = 0;
    Weight weight = 0;
};

/// Undirected graph with non-negative integer edge weights.
struct WeightedGraph {
    int node_count = 0;
    std::vector<Edge> edges;
};

struct Matching {
    /// Matched pairs with first < second, sorted ascending.
    std::vector<std::pair<int, int>> pairs;
    Weight total_weight = 0;

    std::size_t cardinality() const { return pairs.size(); }
};

/// Throws ValidationError unless every edge has distinct in-range endpoints,
/// a non-negative weight, and no unordered pair appears twice.
void validate(const WeightedGraph& graph);

/// Maximum-weight matching on a general graph (Edmonds' blossom algorithm with
/// dual variables, O(n^3)). Integer arithmetic throughout; output is a
/// deterministic function of the edge list order.
Matching max_weight_matching(const WeightedGraph& graph);

/// Maximum-weight matching among the maximum-cardinality matchings. Every edge
/// weight is raised by B = (n/2) * max_weight + 1 so that one extra pair always
/// outweighs any weight difference, then max_weight_matching is applied.
Matching max_cardinality_max_weight_matching(const WeightedGraph& graph);

}  // namespace swissfair
