#pragma once

#include <utility>
#include <vector>

#include "gfb/feedback_graph.hpp"
#include "gfb/rng.hpp"

namespace gfb {

FeedbackGraph make_edgeless(int k);
FeedbackGraph make_complete(int k);      // every ordered pair
FeedbackGraph make_chain(int k);         // 0 -> 1 -> ... -> k-1
FeedbackGraph make_undirected_cycle(int k);

// Every ordered pair (u,v), u != v, independently with probability p.
FeedbackGraph erdos_renyi(int k, double p, Rng& rng);
// Every unordered pair with probability p, both directions added.
FeedbackGraph erdos_renyi_undirected(int k, double p, Rng& rng);

// u -> v whenever v is reachable from u.
FeedbackGraph transitive_closure(const FeedbackGraph& g);
// Both directions for every edge.
FeedbackGraph symmetrize(const FeedbackGraph& g);
// Transitive closure of an Erdos-Renyi draw.
FeedbackGraph random_transitive_closure(int k, double p, Rng& rng);

// The acyclic k-rows-by-M-columns family: vertices (i,j) with i in [1,k],
// j in [1,M], edge (i,j)->(i',j') iff (i<i' and j!=j') or (i=i' and j<j').
// Carries the (row, column) labels the lexicographic game-II learner needs.
struct GridGraph {
    FeedbackGraph graph;
    int rows;  // k
    int cols;  // M

    int vertex(int row, int col) const { return (row - 1) * cols + (col - 1); }
    std::pair<int, int> label(int v) const { return {v / cols + 1, v % cols + 1}; }

    // Column c (1-based) as a vertex set.
    VertexSet column(int col) const;
};

GridGraph make_grid(int rows, int cols);

} // namespace gfb
