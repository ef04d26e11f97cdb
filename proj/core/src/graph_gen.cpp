#include "gfb/graph_gen.hpp"

#include "gfb/errors.hpp"

namespace gfb {

FeedbackGraph make_edgeless(int k) { return FeedbackGraph(k, {}); }

FeedbackGraph make_complete(int k) {
    std::vector<std::pair<int, int>> e;
    for (int u = 0; u < k; ++u)
        for (int v = 0; v < k; ++v)
            if (u != v) e.emplace_back(u, v);
    return FeedbackGraph(k, e);
}

FeedbackGraph make_chain(int k) {
    std::vector<std::pair<int, int>> e;
    for (int v = 0; v + 1 < k; ++v) e.emplace_back(v, v + 1);
    return FeedbackGraph(k, e);
}

FeedbackGraph make_undirected_cycle(int k) {
    std::vector<std::pair<int, int>> e;
    for (int v = 0; v < k; ++v) {
        int w = (v + 1) % k;
        if (v == w) continue;
        e.emplace_back(v, w);
        e.emplace_back(w, v);
    }
    return FeedbackGraph(k, e);
}

FeedbackGraph erdos_renyi(int k, double p, Rng& rng) {
    std::vector<std::pair<int, int>> e;
    for (int u = 0; u < k; ++u)
        for (int v = 0; v < k; ++v)
            if (u != v && rng.bernoulli(p)) e.emplace_back(u, v);
    return FeedbackGraph(k, e);
}

FeedbackGraph erdos_renyi_undirected(int k, double p, Rng& rng) {
    std::vector<std::pair<int, int>> e;
    for (int u = 0; u < k; ++u)
        for (int v = u + 1; v < k; ++v)
            if (rng.bernoulli(p)) {
                e.emplace_back(u, v);
                e.emplace_back(v, u);
            }
    return FeedbackGraph(k, e);
}

FeedbackGraph transitive_closure(const FeedbackGraph& g) {
    int k = g.num_vertices();
    std::vector<std::uint64_t> reach(static_cast<std::size_t>(k));
    for (int v = 0; v < k; ++v) reach[static_cast<std::size_t>(v)] = g.out(v).bits();
    for (int mid = 0; mid < k; ++mid)
        for (int u = 0; u < k; ++u)
            if ((reach[static_cast<std::size_t>(u)] >> mid) & 1)
                reach[static_cast<std::size_t>(u)] |= reach[static_cast<std::size_t>(mid)];
    std::vector<std::pair<int, int>> e;
    for (int u = 0; u < k; ++u)
        for (int v : VertexSet(reach[static_cast<std::size_t>(u)]))
            if (u != v) e.emplace_back(u, v);
    return FeedbackGraph(k, e);
}

FeedbackGraph symmetrize(const FeedbackGraph& g) {
    std::vector<std::pair<int, int>> e;
    for (auto [u, v] : g.edges()) {
        e.emplace_back(u, v);
        e.emplace_back(v, u);
    }
    return FeedbackGraph(g.num_vertices(), e);
}

FeedbackGraph random_transitive_closure(int k, double p, Rng& rng) {
    return transitive_closure(erdos_renyi(k, p, rng));
}

VertexSet GridGraph::column(int col) const {
    VertexSet s;
    for (int row = 1; row <= rows; ++row) s.insert(vertex(row, col));
    return s;
}

GridGraph make_grid(int rows, int cols) {
    if (rows < 1 || cols < 1) throw InvalidInputError("grid dimensions must be positive");
    if (rows * cols > FeedbackGraph::kMaxVertices)
        throw InvalidInputError("grid too large");
    std::vector<std::pair<int, int>> e;
    auto id = [cols](int i, int j) { return (i - 1) * cols + (j - 1); };
    for (int i = 1; i <= rows; ++i)
        for (int j = 1; j <= cols; ++j)
            for (int i2 = 1; i2 <= rows; ++i2)
                for (int j2 = 1; j2 <= cols; ++j2) {
                    bool edge = (i < i2 && j != j2) || (i == i2 && j < j2);
                    if (edge) e.emplace_back(id(i, j), id(i2, j2));
                }
    return GridGraph{FeedbackGraph(rows * cols, e), rows, cols};
}

} // namespace gfb
