#pragma once

#include <string>
#include <vector>

#include "gfb/feedback_graph.hpp"
#include "gfb/rng.hpp"

namespace gfb {

enum class Method { Exact, Approximate };

// Result of a graph-quantity computation. The certificate layout depends on
// the quantity:
//   alpha, mas          one witness set
//   delta               the witness dominating set
//   beta_M, beta_bar_M  the M witness sets in order (possibly empty sets)
//   beta_dom            V_1..V_M followed by B_1..B_M (2M sets)
//   rho                 no certificate
struct QuantityReport {
    std::string name;
    int value = 0;
    std::vector<VertexSet> certificate;
    Method method = Method::Exact;
};

struct ExactCaps {
    int subset_search = 24;  // alpha, delta, mas
    int beta = 14;           // beta_M, beta_bar_M
    int beta_dom = 10;
    int game = 8;            // game-I minimax
};

// alpha(G) with a maximum independent set witness. Branch and bound on the
// symmetrized adjacency.
QuantityReport independence_number_exact(const FeedbackGraph& g, int cap = 24);

// Dominating number of the subgraph induced by restricted_to: the smallest
// D inside restricted_to with restricted_to contained in N_out(D).
QuantityReport dominating_number_exact(const FeedbackGraph& g, VertexSet restricted_to,
                                       int cap = 24);

// Greedy max-coverage dominating set of the subgraph induced by a.
// Guarantee: |D| <= (1 + ln|a|) * delta(a). Ties break to the lowest index.
VertexSet greedy_dominating_set(const FeedbackGraph& g, VertexSet a);

// Independent subset of a: best of ceil(log2 K)+1 random-permutation greedy
// passes and a deterministic min-degree peeling pass.
VertexSet approx_independent_set(const FeedbackGraph& g, VertexSet a, Rng& rng);

// m(G) with a maximum acyclic-subset witness.
QuantityReport mas_number_exact(const FeedbackGraph& g, int cap = 24);

// beta_M(G): max total size of independent I_1..I_M with no edge from an
// earlier set to a later one. Witness tuple returned in order.
QuantityReport beta_M_exact(const FeedbackGraph& g, int M, int cap = 14);

// beta_M for every M in 1..M_max in one memoized pass.
std::vector<int> beta_M_profile(const FeedbackGraph& g, int M_max, int cap = 14);
std::vector<int> beta_bar_M_profile(const FeedbackGraph& g, int M_max, int cap = 14);

// beta_bar_M(G): max total size of M disjoint independent sets.
QuantityReport beta_bar_M_exact(const FeedbackGraph& g, int M, int cap = 14);

// beta_dom(G, M): max sum of |B_c| over disjoint V_1..V_M with B_c inside V_c
// dominating V_c, |B_c| <= delta(V_c) * (1 + ln K), and the union of the B_c
// acyclic.
QuantityReport beta_dom_exact(const FeedbackGraph& g, int M, int cap = 10);

// Certificate checks: do the witness sets satisfy the defining constraints
// and attain the reported value?
bool verify_independent_witness(const FeedbackGraph& g, const QuantityReport& r);
bool verify_dominating_witness(const FeedbackGraph& g, VertexSet restricted_to,
                               const QuantityReport& r);
bool verify_mas_witness(const FeedbackGraph& g, const QuantityReport& r);
// Feasibility of an ordered beta_M tuple (independence + no forward edges).
bool beta_M_witness_feasible(const FeedbackGraph& g, const std::vector<VertexSet>& sets);
bool verify_beta_M_witness(const FeedbackGraph& g, const QuantityReport& r);
bool beta_bar_witness_feasible(const FeedbackGraph& g, const std::vector<VertexSet>& sets);
bool verify_beta_bar_witness(const FeedbackGraph& g, const QuantityReport& r);
bool beta_dom_witness_feasible(const FeedbackGraph& g, const std::vector<VertexSet>& vs,
                               const std::vector<VertexSet>& bs);
bool verify_beta_dom_witness(const FeedbackGraph& g, const QuantityReport& r);

} // namespace gfb
