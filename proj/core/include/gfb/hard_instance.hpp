#pragma once

#include <string>
#include <vector>

#include "gfb/bandit.hpp"
#include "gfb/errors.hpp"
#include "gfb/feedback_graph.hpp"
#include "gfb/quantities.hpp"

namespace gfb {

// beta_M(G) = 1: the construction needs blocks of size >= 2, and the lower
// bound is trivial anyway.
class DegenerateInstanceError : public Error {
public:
    using Error::Error;
};

// The minimax-lower-bound construction: disjoint blocks J_1..J_m derived from
// a beta_M witness (empty sets dropped, singleton sets merged into their
// successor, a trailing singleton dropped), a uniformly drawn parameter u,
// gap Delta = sqrt(beta_M / (16 T)), Bernoulli means in four cases around
// 1/4, and a block context schedule.
struct HardInstanceSpec {
    // members[c][0] is the distinguished first element a_{c,1}; the rest
    // ascending. Only in-block edges pointing to a_{c,1} exist.
    std::vector<std::vector<int>> members;
    std::vector<int> u;  // 1-based index into members[c]; best action is members[c][u[c]-1]
    double delta_gap = 0;
    std::vector<long long> block_len;
    long long T = 0;
    int beta = 0;  // beta_M(G) the construction was built from

    int blocks() const { return static_cast<int>(members.size()); }
    int block_size(int c) const { return static_cast<int>(members[static_cast<std::size_t>(c)].size()); }
    int first_element(int c) const { return members[static_cast<std::size_t>(c)][0]; }
    int best_action(int c) const {
        return members[static_cast<std::size_t>(c)][static_cast<std::size_t>(u[static_cast<std::size_t>(c)] - 1)];
    }
    VertexSet block_set(int c) const { return VertexSet::of(members[static_cast<std::size_t>(c)]); }
    int total_block_size() const;

    std::string summary() const;
};

struct HardInstance {
    HardInstanceSpec spec;
    BanditInstance instance;
    ContextSchedule schedule;
    std::vector<std::string> warnings;
};

// Throws DegenerateInstanceError when beta_M(G) < 2. T below beta_M(G)^3
// produces a warning entry, not an error.
HardInstance build_hard_instance(const FeedbackGraph& g, int M, long long T, Rng& rng,
                                 int beta_cap = 14);

} // namespace gfb
