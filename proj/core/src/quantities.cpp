#include "gfb/quantities.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

#include "gfb/errors.hpp"

namespace gfb {

namespace {

void check_cap(const FeedbackGraph& g, int cap, const char* what) {
    if (g.num_vertices() > cap)
        throw SizeLimitError(std::string(what) + ": K=" + std::to_string(g.num_vertices()) +
                             " exceeds the exact-search cap " + std::to_string(cap));
}

// Symmetrized closed neighborhoods, used by the independence searches.
std::vector<std::uint64_t> closed_und(const FeedbackGraph& g) {
    std::vector<std::uint64_t> n(static_cast<std::size_t>(g.num_vertices()));
    for (int v = 0; v < g.num_vertices(); ++v)
        n[static_cast<std::size_t>(v)] = g.und_neighbors(v).bits() | (std::uint64_t{1} << v);
    return n;
}

struct MisSearch {
    const std::vector<std::uint64_t>& nbr;
    std::uint64_t best_set = 0;
    int best = 0;

    void run(std::uint64_t cand, std::uint64_t chosen, int size) {
        if (size + std::popcount(cand) <= best) return;
        if (cand == 0) {
            best = size;
            best_set = chosen;
            return;
        }
        int v = std::countr_zero(cand);
        // include v
        run(cand & ~nbr[static_cast<std::size_t>(v)], chosen | (std::uint64_t{1} << v), size + 1);
        // exclude v
        run(cand & ~(std::uint64_t{1} << v), chosen, size);
    }
};

} // namespace

QuantityReport independence_number_exact(const FeedbackGraph& g, int cap) {
    check_cap(g, cap, "independence_number_exact");
    auto nbr = closed_und(g);
    MisSearch s{nbr};
    s.run(g.vertices().bits(), 0, 0);
    return {"alpha", s.best, {VertexSet(s.best_set)}, Method::Exact};
}

namespace {

// Exact minimum dominating set of `universe` within the induced subgraph:
// branch on the uncovered vertex with the fewest candidate dominators.
struct MdsSearch {
    std::vector<std::uint64_t> cover;  // cover[v] = vertices whose choice covers v
    std::vector<std::uint64_t> out_in; // out_in[d] = universe covered by choosing d
    std::uint64_t universe;
    std::uint64_t best_set = 0;
    int best = 0;

    void run(std::uint64_t uncovered, std::uint64_t chosen, int size) {
        if (size >= best) return;
        if (uncovered == 0) {
            best = size;
            best_set = chosen;
            return;
        }
        // pick the uncovered vertex with the fewest dominator candidates
        int pick = -1, fewest = 65;
        for (std::uint64_t rest = uncovered; rest; rest &= rest - 1) {
            int v = std::countr_zero(rest);
            int c = std::popcount(cover[static_cast<std::size_t>(v)]);
            if (c < fewest) {
                fewest = c;
                pick = v;
            }
        }
        for (std::uint64_t cands = cover[static_cast<std::size_t>(pick)]; cands; cands &= cands - 1) {
            int d = std::countr_zero(cands);
            run(uncovered & ~out_in[static_cast<std::size_t>(d)],
                chosen | (std::uint64_t{1} << d), size + 1);
        }
    }
};

MdsSearch make_mds(const FeedbackGraph& g, VertexSet universe) {
    MdsSearch s;
    s.universe = universe.bits();
    int k = g.num_vertices();
    s.cover.assign(static_cast<std::size_t>(k), 0);
    s.out_in.assign(static_cast<std::size_t>(k), 0);
    for (int d : universe) s.out_in[static_cast<std::size_t>(d)] = (g.out(d) & universe).bits();
    for (int v : universe)
        for (int d : universe)
            if ((s.out_in[static_cast<std::size_t>(d)] >> v) & 1)
                s.cover[static_cast<std::size_t>(v)] |= std::uint64_t{1} << d;
    return s;
}

} // namespace

QuantityReport dominating_number_exact(const FeedbackGraph& g, VertexSet restricted_to, int cap) {
    g.check_set(restricted_to);
    if (restricted_to.size() > cap)
        throw SizeLimitError("dominating_number_exact: |restricted_to|=" +
                             std::to_string(restricted_to.size()) +
                             " exceeds the exact-search cap " + std::to_string(cap));
    if (restricted_to.empty()) return {"delta", 0, {VertexSet()}, Method::Exact};
    MdsSearch s = make_mds(g, restricted_to);
    s.best = restricted_to.size() + 1;
    s.run(restricted_to.bits(), 0, 0);
    return {"delta", s.best, {VertexSet(s.best_set)}, Method::Exact};
}

VertexSet greedy_dominating_set(const FeedbackGraph& g, VertexSet a) {
    g.check_set(a);
    VertexSet chosen;
    VertexSet residual = a;
    while (!residual.empty()) {
        int pick = -1, pick_gain = -1;
        for (int v : residual) {
            int gain = (g.out(v) & residual).size();
            if (gain > pick_gain) {
                pick_gain = gain;
                pick = v;
            }
        }
        chosen.insert(pick);
        residual -= g.out(pick);
    }
    return chosen;
}

VertexSet approx_independent_set(const FeedbackGraph& g, VertexSet a, Rng& rng) {
    g.check_set(a);
    if (a.empty()) return {};
    auto nbr = closed_und(g);
    auto greedy_in_order = [&](const std::vector<int>& order) {
        VertexSet taken;
        std::uint64_t blocked = 0;
        for (int v : order) {
            if ((blocked >> v) & 1) continue;
            taken.insert(v);
            blocked |= nbr[static_cast<std::size_t>(v)];
        }
        return taken;
    };

    std::vector<int> order = a.to_vector();
    int restarts = static_cast<int>(std::ceil(std::log2(std::max(2, g.num_vertices())))) + 1;
    VertexSet best;
    for (int r = 0; r < restarts; ++r) {
        rng.shuffle(order);
        VertexSet got = greedy_in_order(order);
        if (got.size() > best.size()) best = got;
    }

    // Turan-style fallback: repeatedly take the minimum-degree vertex of the
    // residual induced subgraph.
    VertexSet peeled;
    VertexSet rest = a;
    while (!rest.empty()) {
        int pick = -1, deg = 65;
        for (int v : rest) {
            int d = (g.und_neighbors(v) & rest).size();
            if (d < deg) {
                deg = d;
                pick = v;
            }
        }
        peeled.insert(pick);
        rest -= VertexSet(nbr[static_cast<std::size_t>(pick)]);
    }
    return peeled.size() > best.size() ? peeled : best;
}

namespace {

struct MasSearch {
    const FeedbackGraph& g;
    std::uint64_t best_set = 0;
    int best = 0;

    void run(std::uint64_t cand, std::uint64_t chosen, int size) {
        if (size + std::popcount(cand) <= best) return;
        if (cand == 0) {
            best = size;
            best_set = chosen;
            return;
        }
        int v = std::countr_zero(cand);
        std::uint64_t with_v = chosen | (std::uint64_t{1} << v);
        if (g.is_acyclic_subset(VertexSet(with_v)))
            run(cand & ~(std::uint64_t{1} << v), with_v, size + 1);
        run(cand & ~(std::uint64_t{1} << v), chosen, size);
    }
};

} // namespace

QuantityReport mas_number_exact(const FeedbackGraph& g, int cap) {
    check_cap(g, cap, "mas_number_exact");
    if (g.is_acyclic_subset(g.vertices()))
        return {"mas", g.num_vertices(), {g.vertices()}, Method::Exact};
    MasSearch s{g};
    s.run(g.vertices().bits(), 0, 0);
    return {"mas", s.best, {VertexSet(s.best_set)}, Method::Exact};
}

namespace {

// Shared search core for beta_M and beta_bar_M. State: the set of vertices a
// future set may still use, and how many sets remain. For beta_M the next
// choice removes its whole out-neighborhood from the available pool (no edge
// may run from an earlier set to a later one); for beta_bar_M only the chosen
// vertices leave the pool.
struct BetaSolver {
    const FeedbackGraph& g;
    bool ordered;  // true: beta_M, false: beta_bar_M
    std::vector<std::uint64_t> nbr;
    std::unordered_map<std::uint64_t, int> memo;

    explicit BetaSolver(const FeedbackGraph& graph, bool ordered_kind)
        : g(graph), ordered(ordered_kind), nbr(closed_und(graph)) {}

    static std::uint64_t key(std::uint64_t avail, int remaining) {
        return (avail << 6) | static_cast<std::uint64_t>(remaining);
    }

    int solve(std::uint64_t avail, int remaining) {
        remaining = std::min(remaining, std::popcount(avail));
        if (remaining == 0 || avail == 0) return 0;
        std::uint64_t k = key(avail, remaining);
        auto it = memo.find(k);
        if (it != memo.end()) return it->second;
        int best = 0;
        enumerate(avail, avail, 0, 0, remaining, best);
        memo.emplace(k, best);
        return best;
    }

    // Enumerate nonempty independent subsets of avail (each exactly once) and
    // score |S| + solve(next pool, remaining-1).
    void enumerate(std::uint64_t avail, std::uint64_t cands, std::uint64_t set, int size,
                   int remaining, int& best) {
        if (size > 0) {
            std::uint64_t next = ordered ? avail & ~g.out_neighbors(VertexSet(set)).bits()
                                         : avail & ~set;
            int total = size + solve(next, remaining - 1);
            if (total > best) best = total;
        }
        while (cands) {
            int v = std::countr_zero(cands);
            cands &= cands - 1;
            // keep only candidates above v that are non-adjacent to v
            enumerate(avail, cands & ~nbr[static_cast<std::size_t>(v)],
                      set | (std::uint64_t{1} << v), size + 1, remaining, best);
        }
    }

    // Reconstruct one witness tuple attaining solve(avail, remaining).
    void witness(std::uint64_t avail, int remaining, std::vector<VertexSet>& out) {
        while (remaining > 0) {
            int target = solve(avail, remaining);
            if (target == 0) break;
            std::uint64_t found = 0;
            find_set(avail, avail, 0, 0, remaining, target, found);
            out.push_back(VertexSet(found));
            avail = ordered ? avail & ~g.out_neighbors(VertexSet(found)).bits() : avail & ~found;
            --remaining;
        }
    }

    bool find_set(std::uint64_t avail, std::uint64_t cands, std::uint64_t set, int size,
                  int remaining, int target, std::uint64_t& found) {
        if (size > 0) {
            std::uint64_t next = ordered ? avail & ~g.out_neighbors(VertexSet(set)).bits()
                                         : avail & ~set;
            if (size + solve(next, remaining - 1) == target) {
                found = set;
                return true;
            }
        }
        while (cands) {
            int v = std::countr_zero(cands);
            cands &= cands - 1;
            if (find_set(avail, cands & ~nbr[static_cast<std::size_t>(v)],
                         set | (std::uint64_t{1} << v), size + 1, remaining, target, found))
                return true;
        }
        return false;
    }
};

QuantityReport beta_common(const FeedbackGraph& g, int M, int cap, bool ordered,
                           const char* name) {
    check_cap(g, cap, name);
    if (M < 1) throw InvalidInputError(std::string(name) + ": M must be >= 1");
    BetaSolver solver(g, ordered);
    int value = solver.solve(g.vertices().bits(), M);
    std::vector<VertexSet> cert;
    solver.witness(g.vertices().bits(), M, cert);
    cert.resize(static_cast<std::size_t>(M));  // pad trailing empty sets
    return {name, value, cert, Method::Exact};
}

} // namespace

QuantityReport beta_M_exact(const FeedbackGraph& g, int M, int cap) {
    return beta_common(g, M, cap, true, "beta_M");
}

std::vector<int> beta_M_profile(const FeedbackGraph& g, int M_max, int cap) {
    check_cap(g, cap, "beta_M_profile");
    BetaSolver solver(g, true);
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(M_max));
    for (int m = 1; m <= M_max; ++m) out.push_back(solver.solve(g.vertices().bits(), m));
    return out;
}

std::vector<int> beta_bar_M_profile(const FeedbackGraph& g, int M_max, int cap) {
    check_cap(g, cap, "beta_bar_M_profile");
    BetaSolver solver(g, false);
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(M_max));
    for (int m = 1; m <= M_max; ++m) out.push_back(solver.solve(g.vertices().bits(), m));
    return out;
}

QuantityReport beta_bar_M_exact(const FeedbackGraph& g, int M, int cap) {
    return beta_common(g, M, cap, false, "beta_bar_M");
}

namespace {

// Per-subset tables at beta_dom scale (K <= 10 or so).
struct SubsetTables {
    std::vector<char> acyclic;   // indexed by mask
    std::vector<int> mas;        // m() of every induced subset
    std::vector<int> delta;      // dominating number of every induced subset

    SubsetTables(const FeedbackGraph& g) {
        auto n = std::uint64_t{1} << g.num_vertices();
        acyclic.assign(n, 0);
        mas.assign(n, 0);
        delta.assign(n, 0);
        acyclic[0] = 1;
        for (std::uint64_t s = 1; s < n; ++s) {
            // acyclic iff some member has no in-edges from inside and the rest is acyclic
            for (std::uint64_t rest = s; rest; rest &= rest - 1) {
                int v = std::countr_zero(rest);
                std::uint64_t preds = (g.in(v).bits() & s) & ~(std::uint64_t{1} << v);
                if (preds == 0) {
                    acyclic[s] = acyclic[s & ~(std::uint64_t{1} << v)];
                    break;
                }
            }
            if (acyclic[s]) {
                mas[s] = std::popcount(s);
            } else {
                for (std::uint64_t rest = s; rest; rest &= rest - 1) {
                    int v = std::countr_zero(rest);
                    mas[s] = std::max(mas[s], mas[s & ~(std::uint64_t{1} << v)]);
                }
            }
            MdsSearch mds = make_mds(g, VertexSet(s));
            mds.best = std::popcount(s) + 1;
            mds.run(s, 0, 0);
            delta[s] = mds.best;
        }
    }
};

struct BetaDomSearch {
    const FeedbackGraph& g;
    const SubsetTables& tab;
    double log_bound_factor;  // 1 + ln K
    int best = 0;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> best_pairs;  // (V, B)
    std::vector<std::pair<std::uint64_t, std::uint64_t>> stack;

    BetaDomSearch(const FeedbackGraph& graph, const SubsetTables& t)
        : g(graph), tab(t),
          log_bound_factor(1.0 + std::log(static_cast<double>(
                                     std::max(1, graph.num_vertices())))) {}

    // Enumerate (V, B) pairs whose V has lowest vertex `anchor`, V within
    // avail, B within V dominating V with the size bound, B-union staying
    // acyclic; then recurse on higher anchors.
    void run(std::uint64_t avail, std::uint64_t b_union, int b_total, int slots, int min_anchor) {
        if (b_total > best) {
            best = b_total;
            best_pairs = stack;
        }
        if (slots == 0 || avail == 0) return;
        if (b_total + tab.mas[avail] <= best) return;  // future B's live inside avail
        for (std::uint64_t anchors = avail; anchors; anchors &= anchors - 1) {
            int a = std::countr_zero(anchors);
            if (a < min_anchor) continue;
            std::uint64_t high = avail & ~((std::uint64_t{2} << a) - 1);  // members above a
            std::uint64_t base = std::uint64_t{1} << a;
            // V = base | sub, sub subset of high
            for (std::uint64_t sub = high;; sub = (sub - 1) & high) {
                std::uint64_t V = base | sub;
                int bound = static_cast<int>(
                    std::floor(log_bound_factor * tab.delta[V] + 1e-9));
                enumerate_b(V, V, 0, 0, bound, b_union, b_total, avail, slots, a);
                if (sub == 0) break;
            }
        }
    }

    void enumerate_b(std::uint64_t V, std::uint64_t cands, std::uint64_t B, int b_size,
                     int bound, std::uint64_t b_union, int b_total, std::uint64_t avail,
                     int slots, int anchor) {
        if (b_size > 0 && (V & ~cover_of(B)) == 0) {
            // B dominates V; commit this pair and recurse
            std::uint64_t nb_union = b_union | B;
            if (tab.acyclic[nb_union]) {
                stack.emplace_back(V, B);
                run(avail & ~V, nb_union, b_total + b_size, slots - 1, anchor + 1);
                stack.pop_back();
            }
        }
        if (b_size >= bound) return;
        while (cands) {
            int v = std::countr_zero(cands);
            cands &= cands - 1;
            enumerate_b(V, cands, B | (std::uint64_t{1} << v), b_size + 1, bound, b_union,
                        b_total, avail, slots, anchor);
        }
    }

    std::uint64_t cover_of(std::uint64_t B) {
        std::uint64_t c = 0;
        for (std::uint64_t rest = B; rest; rest &= rest - 1)
            c |= g.out(std::countr_zero(rest)).bits();
        return c;
    }
};

} // namespace

QuantityReport beta_dom_exact(const FeedbackGraph& g, int M, int cap) {
    check_cap(g, cap, "beta_dom_exact");
    if (M < 1) throw InvalidInputError("beta_dom_exact: M must be >= 1");
    SubsetTables tab(g);
    BetaDomSearch search(g, tab);
    search.run(g.vertices().bits(), 0, 0, M, 0);
    std::vector<VertexSet> cert;
    for (auto [V, B] : search.best_pairs) cert.push_back(VertexSet(V));
    cert.resize(static_cast<std::size_t>(M));
    for (auto [V, B] : search.best_pairs) cert.push_back(VertexSet(B));
    cert.resize(static_cast<std::size_t>(2 * M));
    return {"beta_dom", search.best, cert, Method::Exact};
}

bool verify_independent_witness(const FeedbackGraph& g, const QuantityReport& r) {
    if (r.certificate.size() != 1) return false;
    VertexSet s = r.certificate[0];
    return g.is_independent(s) && s.size() == r.value;
}

bool verify_dominating_witness(const FeedbackGraph& g, VertexSet restricted_to,
                               const QuantityReport& r) {
    if (r.certificate.size() != 1) return false;
    VertexSet d = r.certificate[0];
    if (!d.subset_of(restricted_to) || d.size() != r.value) return false;
    return restricted_to.subset_of(g.out_neighbors(d));
}

bool verify_mas_witness(const FeedbackGraph& g, const QuantityReport& r) {
    if (r.certificate.size() != 1) return false;
    VertexSet s = r.certificate[0];
    return g.is_acyclic_subset(s) && s.size() == r.value;
}

bool beta_M_witness_feasible(const FeedbackGraph& g, const std::vector<VertexSet>& sets) {
    VertexSet reached;  // N_out of the union of earlier sets
    for (const VertexSet& s : sets) {
        if (!g.is_independent(s)) return false;
        if (s.intersects(reached)) return false;
        reached |= g.out_neighbors(s);
    }
    return true;
}

bool verify_beta_M_witness(const FeedbackGraph& g, const QuantityReport& r) {
    if (!beta_M_witness_feasible(g, r.certificate)) return false;
    int total = 0;
    for (const VertexSet& s : r.certificate) total += s.size();
    return total == r.value;
}

bool beta_bar_witness_feasible(const FeedbackGraph& g, const std::vector<VertexSet>& sets) {
    VertexSet used;
    for (const VertexSet& s : sets) {
        if (!g.is_independent(s)) return false;
        if (s.intersects(used)) return false;
        used |= s;
    }
    return true;
}

bool verify_beta_bar_witness(const FeedbackGraph& g, const QuantityReport& r) {
    if (!beta_bar_witness_feasible(g, r.certificate)) return false;
    int total = 0;
    for (const VertexSet& s : r.certificate) total += s.size();
    return total == r.value;
}

bool beta_dom_witness_feasible(const FeedbackGraph& g, const std::vector<VertexSet>& vs,
                               const std::vector<VertexSet>& bs) {
    if (vs.size() != bs.size()) return false;
    double factor = 1.0 + std::log(static_cast<double>(std::max(1, g.num_vertices())));
    VertexSet used;
    VertexSet b_union;
    for (std::size_t c = 0; c < vs.size(); ++c) {
        if (vs[c].intersects(used)) return false;
        used |= vs[c];
        if (!bs[c].subset_of(vs[c])) return false;
        if (!g.dominates(bs[c], vs[c])) return false;
        if (!vs[c].empty()) {
            int delta = dominating_number_exact(g, vs[c]).value;
            if (bs[c].size() > factor * delta + 1e-9) return false;
        }
        b_union |= bs[c];
    }
    return g.is_acyclic_subset(b_union);
}

bool verify_beta_dom_witness(const FeedbackGraph& g, const QuantityReport& r) {
    if (r.certificate.size() % 2 != 0) return false;
    std::size_t m = r.certificate.size() / 2;
    std::vector<VertexSet> vs(r.certificate.begin(), r.certificate.begin() + static_cast<long>(m));
    std::vector<VertexSet> bs(r.certificate.begin() + static_cast<long>(m), r.certificate.end());
    if (!beta_dom_witness_feasible(g, vs, bs)) return false;
    int total = 0;
    for (const VertexSet& b : bs) total += b.size();
    return total == r.value;
}

} // namespace gfb
