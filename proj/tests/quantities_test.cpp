#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gfb/errors.hpp"
#include "gfb/graph_gen.hpp"
#include "gfb/quantities.hpp"
#include "oracles.hpp"

using namespace gfb;

namespace {

FeedbackGraph graph_of(int k, std::initializer_list<std::pair<int, int>> edges) {
    return FeedbackGraph(k, std::vector<std::pair<int, int>>(edges));
}

FeedbackGraph two_stars() {
    return graph_of(6, {{0, 1}, {0, 2}, {3, 4}, {3, 5}});
}

} // namespace

TEST_CASE("independence_number_exact") {
    CHECK(independence_number_exact(make_edgeless(5)).value == 5);
    CHECK(independence_number_exact(make_complete(5)).value == 1);
    CHECK(independence_number_exact(make_undirected_cycle(5)).value == 2);
    CHECK_THROWS_AS(independence_number_exact(make_edgeless(30), 24), SizeLimitError);
    QuantityReport r = independence_number_exact(make_undirected_cycle(5));
    CHECK(verify_independent_witness(make_undirected_cycle(5), r));
}

TEST_CASE("dominating_number_exact") {
    CHECK(dominating_number_exact(make_edgeless(4), VertexSet::full(4)).value == 4);
    FeedbackGraph star = graph_of(4, {{0, 1}, {0, 2}, {0, 3}});
    CHECK(dominating_number_exact(star, VertexSet::full(4)).value == 1);
    CHECK(dominating_number_exact(two_stars(), VertexSet::full(6)).value == 2);
    // restricted to the leaves of one star, the center is unavailable
    CHECK(dominating_number_exact(star, VertexSet::of({1, 2})).value == 2);
    CHECK(dominating_number_exact(star, VertexSet()).value == 0);
}

TEST_CASE("greedy_dominating_set") {
    FeedbackGraph star = graph_of(4, {{0, 1}, {0, 2}, {0, 3}});
    CHECK(greedy_dominating_set(star, VertexSet::full(4)) == VertexSet::of({0}));
    CHECK(greedy_dominating_set(make_edgeless(3), VertexSet::full(3)) == VertexSet::full(3));
    CHECK(greedy_dominating_set(star, VertexSet()).empty());
    for (int trial = 0; trial < 50; ++trial) {
        Rng rng(mix64(41, trial));
        FeedbackGraph g = erdos_renyi(10, 0.25, rng);
        VertexSet a(rng.next_u64() & g.vertices().bits());
        VertexSet d = greedy_dominating_set(g, a);
        CHECK(d.subset_of(a));
        CHECK(a.subset_of(g.out_neighbors(d)));
        if (!a.empty()) {
            int exact = dominating_number_exact(g, a).value;
            CHECK(d.size() <= (1.0 + std::log(a.size())) * exact + 1e-9);
        }
    }
}

TEST_CASE("approx_independent_set") {
    Rng rng(7);
    CHECK(approx_independent_set(make_edgeless(6), VertexSet::full(6), rng) == VertexSet::full(6));
    CHECK(approx_independent_set(make_complete(5), VertexSet::full(5), rng).size() == 1);
    CHECK(approx_independent_set(make_undirected_cycle(5), VertexSet::full(5), rng).size() == 2);
    CHECK(approx_independent_set(make_complete(5), VertexSet(), rng).empty());
    for (int trial = 0; trial < 50; ++trial) {
        Rng trng(mix64(43, trial));
        FeedbackGraph g = erdos_renyi(9, 0.3, trng);
        VertexSet a(trng.next_u64() & g.vertices().bits());
        VertexSet got = approx_independent_set(g, a, trng);
        CHECK(got.subset_of(a));
        CHECK(g.is_independent(got));
        if (!a.empty()) CHECK(got.size() >= 1);
    }
}

TEST_CASE("approximate independent set is Omega(delta/log K) statistically") {
    // size target of the two-piece learner move, checked in aggregate over a corpus
    int hits = 0, total = 0;
    for (int trial = 0; trial < 60; ++trial) {
        Rng rng(mix64(47, trial));
        FeedbackGraph g = erdos_renyi(10, 0.3, rng);
        VertexSet a = g.vertices();
        int delta = dominating_number_exact(g, a).value;
        VertexSet got = approx_independent_set(g, a, rng);
        ++total;
        if (got.size() * (1.0 + std::log(10.0)) >= 0.5 * delta) ++hits;
    }
    CHECK(hits >= total * 9 / 10);
}

TEST_CASE("mas_number_exact") {
    CHECK(mas_number_exact(make_chain(5)).value == 5);       // acyclic graph
    FeedbackGraph bidi4 = symmetrize(make_complete(4));
    CHECK(mas_number_exact(bidi4).value == 1);
    CHECK(mas_number_exact(make_grid(2, 2).graph).value == 4);
    QuantityReport r = mas_number_exact(make_undirected_cycle(6));
    CHECK(verify_mas_witness(make_undirected_cycle(6), r));
}

TEST_CASE("beta_M_exact identities and grid example") {
    for (int trial = 0; trial < 25; ++trial) {
        Rng rng(mix64(53, trial));
        int k = 2 + rng.uniform_int(7);
        FeedbackGraph g = erdos_renyi(k, 0.3, rng);
        int alpha = independence_number_exact(g).value;
        int m = mas_number_exact(g).value;
        CHECK(beta_M_exact(g, 1).value == alpha);
        CHECK(beta_M_exact(g, m).value == m);
        CHECK(beta_M_exact(g, k).value == m);
    }
    CHECK(beta_M_exact(make_grid(3, 2).graph, 2).value >= 4);  // k + M - 1
    CHECK_THROWS_AS(beta_M_exact(make_edgeless(15), 2), SizeLimitError);
    CHECK_THROWS_AS(beta_M_exact(make_edgeless(4), 0), InvalidInputError);
}

TEST_CASE("beta_bar_M_exact") {
    for (int trial = 0; trial < 25; ++trial) {
        Rng rng(mix64(59, trial));
        int k = 2 + rng.uniform_int(7);
        FeedbackGraph g = erdos_renyi(k, 0.3, rng);
        CHECK(beta_bar_M_exact(g, 1).value == independence_number_exact(g).value);
        int M = 1 + rng.uniform_int(4);
        CHECK(beta_bar_M_exact(g, M).value >= beta_M_exact(g, M).value);
    }
    CHECK(beta_bar_M_exact(make_edgeless(5), 2).value == 5);
}

TEST_CASE("beta searches match the unmemoized oracles") {
    for (int trial = 0; trial < 30; ++trial) {
        Rng rng(mix64(61, trial));
        int k = 2 + rng.uniform_int(5);  // oracle is factorial-ish, keep tiny
        FeedbackGraph g = erdos_renyi(k, 0.35, rng);
        int M = 1 + rng.uniform_int(3);
        CHECK(beta_M_exact(g, M).value == oracle::beta_M(g, M));
        CHECK(beta_bar_M_exact(g, M).value == oracle::beta_bar_M(g, M));
        CHECK(independence_number_exact(g).value == oracle::alpha(g));
        CHECK(mas_number_exact(g).value == oracle::mas(g));
        CHECK(dominating_number_exact(g, g.vertices()).value ==
              oracle::delta(g, g.vertices().bits()));
    }
}

TEST_CASE("beta_dom_exact") {
    CHECK(beta_dom_exact(make_grid(2, 2).graph, 2).value == 4);
    CHECK(beta_dom_exact(make_grid(3, 2).graph, 2).value == 6);
    CHECK(beta_dom_exact(make_edgeless(3), 1).value == 3);
    for (int trial = 0; trial < 20; ++trial) {
        Rng rng(mix64(67, trial));
        int k = 2 + rng.uniform_int(4);
        FeedbackGraph g = erdos_renyi(k, 0.35, rng);
        int M = 1 + rng.uniform_int(2);
        QuantityReport r = beta_dom_exact(g, M);
        CHECK(r.value == oracle::beta_dom(g, M));
        CHECK(r.value <= mas_number_exact(g).value);
        CHECK(verify_beta_dom_witness(g, r));
    }
    CHECK_THROWS_AS(beta_dom_exact(make_edgeless(11), 1), SizeLimitError);
}

TEST_CASE("witnesses attain the reported values") {
    for (int trial = 0; trial < 30; ++trial) {
        Rng rng(mix64(71, trial));
        int k = 2 + rng.uniform_int(7);
        FeedbackGraph g = erdos_renyi(k, 0.3, rng);
        int M = 1 + rng.uniform_int(3);
        CHECK(verify_independent_witness(g, independence_number_exact(g)));
        CHECK(verify_dominating_witness(g, g.vertices(), dominating_number_exact(g, g.vertices())));
        CHECK(verify_mas_witness(g, mas_number_exact(g)));
        CHECK(verify_beta_M_witness(g, beta_M_exact(g, M)));
        CHECK(verify_beta_bar_witness(g, beta_bar_M_exact(g, M)));
    }
}

TEST_CASE("lemma-4.1 chain and the basic order relations") {
    for (int trial = 0; trial < 40; ++trial) {
        Rng rng(mix64(73, trial));
        int k = 2 + rng.uniform_int(8);
        FeedbackGraph g = trial % 3 == 0 ? erdos_renyi_undirected(k, 0.3, rng)
                                         : erdos_renyi(k, 0.3, rng);
        int alpha = independence_number_exact(g).value;
        int m = mas_number_exact(g).value;
        int delta = dominating_number_exact(g, g.vertices()).value;
        int rho = g.longest_path_length();
        CHECK(std::max(alpha, delta) <= m);
        CHECK(delta <= 50.0 * alpha * std::log(std::max(2, k)) + 1e-9);
        int prev = 0;
        for (int M = 1; M <= k; ++M) {
            int beta = beta_M_exact(g, M).value;
            int beta_bar = beta_bar_M_exact(g, M).value;
            CHECK(beta >= prev);  // nondecreasing in M
            prev = beta;
            CHECK(beta <= std::min(beta_bar, m));
            CHECK(std::min(beta_bar, m) <=
                  std::max(static_cast<double>(rho) / M, 1.0) * beta + 1e-9);
            if (M >= m) CHECK(beta == m);
        }
    }
}

TEST_CASE("undirected graphs: beta_M = alpha for every M") {
    for (int trial = 0; trial < 20; ++trial) {
        Rng rng(mix64(79, trial));
        int k = 2 + rng.uniform_int(7);
        FeedbackGraph g = erdos_renyi_undirected(k, 0.35, rng);
        int alpha = independence_number_exact(g).value;
        CHECK(mas_number_exact(g).value == alpha);
        for (int M = 1; M <= k; ++M) CHECK(beta_M_exact(g, M).value == alpha);
    }
}

TEST_CASE("peel layers in reverse order form a feasible beta_M tuple") {
    for (int trial = 0; trial < 25; ++trial) {
        Rng rng(mix64(83, trial));
        int k = 2 + rng.uniform_int(7);
        FeedbackGraph g = erdos_renyi(k, 0.3, rng);
        QuantityReport mas = mas_number_exact(g);
        auto layers = g.peel_indegree_zero_layers(mas.certificate[0]);
        std::vector<VertexSet> reversed(layers.rbegin(), layers.rend());
        CHECK(beta_M_witness_feasible(g, reversed));
    }
}

TEST_CASE("beta_M_profile agrees with individual calls") {
    Rng rng(991);
    FeedbackGraph g = erdos_renyi(8, 0.3, rng);
    std::vector<int> prof = beta_M_profile(g, 8);
    for (int M = 1; M <= 8; ++M)
        CHECK(prof[static_cast<std::size_t>(M - 1)] == beta_M_exact(g, M).value);
}
