#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "gfb/vertex_set.hpp"

namespace gfb {

// Directed feedback graph over actions 0..K-1. Self-loops are implicit: they
// are added at construction, never serialized, and ignored by the acyclicity
// and longest-path operations. Immutable after construction; all queries are
// pure and safe for concurrent reads.
class FeedbackGraph {
public:
    static constexpr int kMaxVertices = 64;

    FeedbackGraph(int k, const std::vector<std::pair<int, int>>& edges);

    int num_vertices() const { return k_; }
    VertexSet vertices() const { return VertexSet::full(k_); }

    // Non-self-loop directed edges, sorted lexicographically.
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    int num_edges() const { return static_cast<int>(edges_.size()); }

    bool has_edge(int u, int v) const;

    // Out-neighborhood of v, including v itself (self-loop).
    VertexSet out(int v) const;
    // In-neighborhood of v, including v itself.
    VertexSet in(int v) const;
    // Neighbors of v in either direction, excluding v.
    VertexSet und_neighbors(int v) const;

    // N_out(s) = union of out() over members; always a superset of s.
    VertexSet out_neighbors(VertexSet s) const;

    // No edge in either direction between distinct members.
    bool is_independent(VertexSet s) const;

    // a is contained in N_out(d).
    bool dominates(VertexSet d, VertexSet a) const;

    // The subgraph induced by s, self-loops removed, has no directed cycle.
    bool is_acyclic_subset(VertexSet s) const;

    // rho(G): number of vertices on a longest directed simple path, self-loops
    // ignored. Exact; DAGs use a topological DP, general graphs an exhaustive
    // DFS memoized on (vertex, visited set).
    int longest_path_length() const;

    // Repeatedly strip the in-degree-zero vertices of the subgraph induced by
    // s. Requires s acyclic. Layers partition s, each is independent, and no
    // edge runs from a later layer to an earlier one.
    std::vector<VertexSet> peel_indegree_zero_layers(VertexSet s) const;

    // Throw InvalidInputError on out-of-range vertices.
    void check_vertex(int v) const;
    void check_set(VertexSet s) const;

private:
    int k_ = 0;
    std::vector<std::uint64_t> out_;  // out_[v] includes bit v
    std::vector<std::uint64_t> in_;   // in_[v] includes bit v
    std::vector<std::pair<int, int>> edges_;
};

// Text format: first non-comment line is K, every further non-empty line is
// "u v" for the edge u->v (0-indexed). Lines starting with '#' are comments.
// Self-loop lines are accepted and dropped. Serialization never emits
// self-loops.
FeedbackGraph parse_graph(std::istream& in);
FeedbackGraph read_graph_file(const std::string& path);
std::string graph_to_text(const FeedbackGraph& g);
void write_graph_file(const FeedbackGraph& g, const std::string& path);

} // namespace gfb
