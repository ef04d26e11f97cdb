#include "gfb/feedback_graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "gfb/errors.hpp"

namespace gfb {

FeedbackGraph::FeedbackGraph(int k, const std::vector<std::pair<int, int>>& edges) : k_(k) {
    if (k < 0) throw InvalidInputError("vertex count must be nonnegative");
    if (k > kMaxVertices)
        throw InvalidInputError("vertex count " + std::to_string(k) + " exceeds the " +
                                std::to_string(kMaxVertices) + "-vertex ceiling");
    out_.assign(static_cast<std::size_t>(k), 0);
    in_.assign(static_cast<std::size_t>(k), 0);
    for (int v = 0; v < k; ++v) {
        out_[static_cast<std::size_t>(v)] = std::uint64_t{1} << v;
        in_[static_cast<std::size_t>(v)] = std::uint64_t{1} << v;
    }
    for (auto [u, v] : edges) {
        if (u < 0 || u >= k || v < 0 || v >= k)
            throw InvalidInputError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                                    ") out of range for K=" + std::to_string(k));
        if (u == v) continue;  // self-loops are implicit
        out_[static_cast<std::size_t>(u)] |= std::uint64_t{1} << v;
        in_[static_cast<std::size_t>(v)] |= std::uint64_t{1} << u;
    }
    for (int u = 0; u < k; ++u) {
        VertexSet targets(out_[static_cast<std::size_t>(u)] & ~(std::uint64_t{1} << u));
        for (int v : targets) edges_.emplace_back(u, v);
    }
}

bool FeedbackGraph::has_edge(int u, int v) const {
    check_vertex(u);
    check_vertex(v);
    return (out_[static_cast<std::size_t>(u)] >> v) & 1;
}

VertexSet FeedbackGraph::out(int v) const {
    check_vertex(v);
    return VertexSet(out_[static_cast<std::size_t>(v)]);
}

VertexSet FeedbackGraph::in(int v) const {
    check_vertex(v);
    return VertexSet(in_[static_cast<std::size_t>(v)]);
}

VertexSet FeedbackGraph::und_neighbors(int v) const {
    check_vertex(v);
    std::uint64_t self = std::uint64_t{1} << v;
    return VertexSet((out_[static_cast<std::size_t>(v)] | in_[static_cast<std::size_t>(v)]) & ~self);
}

VertexSet FeedbackGraph::out_neighbors(VertexSet s) const {
    check_set(s);
    std::uint64_t acc = 0;
    for (int v : s) acc |= out_[static_cast<std::size_t>(v)];
    return VertexSet(acc);
}

bool FeedbackGraph::is_independent(VertexSet s) const {
    check_set(s);
    for (int v : s)
        if (und_neighbors(v).intersects(s)) return false;
    return true;
}

bool FeedbackGraph::dominates(VertexSet d, VertexSet a) const {
    check_set(d);
    check_set(a);
    return a.subset_of(out_neighbors(d));
}

bool FeedbackGraph::is_acyclic_subset(VertexSet s) const {
    check_set(s);
    // Kahn peeling; self-loops excluded by masking the vertex out of its own
    // in-neighborhood.
    VertexSet rest = s;
    bool progress = true;
    while (!rest.empty() && progress) {
        progress = false;
        for (int v : rest) {
            VertexSet preds = (in(v) & rest);
            preds.erase(v);
            if (preds.empty()) {
                rest.erase(v);
                progress = true;
            }
        }
    }
    return rest.empty();
}

namespace {

int dag_longest_path(const FeedbackGraph& g) {
    int k = g.num_vertices();
    // topo order by repeated in-degree-zero removal
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(k));
    VertexSet rest = g.vertices();
    while (!rest.empty()) {
        for (int v : rest) {
            VertexSet preds = g.in(v) & rest;
            preds.erase(v);
            if (preds.empty()) {
                order.push_back(v);
                rest.erase(v);
                break;
            }
        }
    }
    std::vector<int> best(static_cast<std::size_t>(k), 1);
    int longest = k == 0 ? 0 : 1;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int v = *it;
        VertexSet succ = g.out(v);
        succ.erase(v);
        for (int w : succ) best[static_cast<std::size_t>(v)] =
            std::max(best[static_cast<std::size_t>(v)], 1 + best[static_cast<std::size_t>(w)]);
        longest = std::max(longest, best[static_cast<std::size_t>(v)]);
    }
    return longest;
}

int dfs_longest_path(const FeedbackGraph& g, int v, std::uint64_t visited,
                     std::unordered_map<std::uint64_t, int>& memo) {
    std::uint64_t key = (visited << 6) | static_cast<std::uint64_t>(v);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    int best = 1;
    VertexSet succ = g.out(v);
    succ.erase(v);
    for (int w : succ) {
        if ((visited >> w) & 1) continue;
        best = std::max(best, 1 + dfs_longest_path(g, w, visited | (std::uint64_t{1} << w), memo));
    }
    memo.emplace(key, best);
    return best;
}

} // namespace

int FeedbackGraph::longest_path_length() const {
    if (k_ == 0) return 0;
    if (is_acyclic_subset(vertices())) return dag_longest_path(*this);
    if (k_ > 57)
        throw SizeLimitError("exact longest path on a cyclic graph is limited to K <= 57");
    std::unordered_map<std::uint64_t, int> memo;
    int best = 1;
    for (int v = 0; v < k_; ++v)
        best = std::max(best, dfs_longest_path(*this, v, std::uint64_t{1} << v, memo));
    return best;
}

std::vector<VertexSet> FeedbackGraph::peel_indegree_zero_layers(VertexSet s) const {
    check_set(s);
    if (!is_acyclic_subset(s))
        throw PreconditionError("peel_indegree_zero_layers requires an acyclic induced subgraph");
    std::vector<VertexSet> layers;
    VertexSet rest = s;
    while (!rest.empty()) {
        VertexSet layer;
        for (int v : rest) {
            VertexSet preds = in(v) & rest;
            preds.erase(v);
            if (preds.empty()) layer.insert(v);
        }
        layers.push_back(layer);
        rest -= layer;
    }
    return layers;
}

void FeedbackGraph::check_vertex(int v) const {
    if (v < 0 || v >= k_)
        throw InvalidInputError("vertex " + std::to_string(v) + " out of range for K=" +
                                std::to_string(k_));
}

void FeedbackGraph::check_set(VertexSet s) const {
    if (!s.subset_of(vertices()))
        throw InvalidInputError("vertex set " + s.to_string() + " out of range for K=" +
                                std::to_string(k_));
}

FeedbackGraph parse_graph(std::istream& in) {
    std::string line;
    int k = -1;
    std::vector<std::pair<int, int>> edges;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        if (k < 0) {
            if (!(ls >> k)) {
                k = -1;
                continue;  // blank or comment before the header
            }
            int extra;
            if (ls >> extra)
                throw InvalidInputError("graph header line must contain K only (line " +
                                        std::to_string(lineno) + ")");
            continue;
        }
        int u, v;
        if (!(ls >> u)) continue;  // blank
        if (!(ls >> v))
            throw InvalidInputError("expected 'u v' edge on line " + std::to_string(lineno));
        edges.emplace_back(u, v);
    }
    if (k < 0) throw InvalidInputError("graph text is missing the vertex-count header");
    return FeedbackGraph(k, edges);
}

FeedbackGraph read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInputError("cannot open graph file: " + path);
    return parse_graph(in);
}

std::string graph_to_text(const FeedbackGraph& g) {
    std::string out = std::to_string(g.num_vertices());
    out += '\n';
    for (auto [u, v] : g.edges()) {
        out += std::to_string(u);
        out += ' ';
        out += std::to_string(v);
        out += '\n';
    }
    return out;
}

void write_graph_file(const FeedbackGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvalidInputError("cannot open for writing: " + path);
    out << graph_to_text(g);
}

} // namespace gfb
