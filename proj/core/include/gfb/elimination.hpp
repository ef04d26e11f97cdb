#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gfb/bandit.hpp"
#include "gfb/games.hpp"
#include "gfb/graph_gen.hpp"

namespace gfb {

enum class RadiusFormula {
    UnionBound,   // 2 sqrt(ln(2 M K T / delta) / layer)
    HorizonOnly,  // 2 sqrt(ln(max(T, 2)) / layer)
};

struct PolicyConfig {
    long long T = 0;  // 0: take the schedule horizon
    double delta = 0.05;
    RadiusFormula radius_formula = RadiusFormula::UnionBound;

    void validate() const;
    double radius(int M, int K, long long horizon, int layer) const;
};

struct TraceRow {
    long long t = 0;
    int context = 0;  // 0-based
    int action = 0;
    double reward = 0;
    double inst_regret = 0;
    double cum_regret = 0;
};

struct RegretTrace {
    int replication = 0;
    std::vector<TraceRow> rows;

    double final_regret() const { return rows.empty() ? 0.0 : rows.back().cum_regret; }
    std::vector<int> actions() const;
};

// Optional instrumentation filled in by the policy engines.
struct PolicyDiagnostics {
    bool record_games = false;

    bool best_arm_ever_eliminated = false;
    long long eliminations = 0;
    // worst confidence deviation |rbar - mu| and survivor-gap excess observed
    // at elimination time, against the layer radii (audited vs the true means)
    double max_confidence_deviation_ratio = 0;  // |rbar-mu| / Delta_layer
    double max_survivor_gap_excess = 0;         // true gap - min(1, 4 Delta_layer)
    std::vector<long long> actions_per_layer;

    // alg1: per layer, the completed (residual set, learner set) pairs in
    // context order; forms a legal game-I transcript
    std::vector<std::vector<std::pair<VertexSet, VertexSet>>> game1_layers;
    // alg2: per layer, the (context, action) picks and each context's active
    // set at its first pick on the layer; forms a legal game-II transcript
    struct G2Pick { int context; int action; };
    std::vector<std::vector<G2Pick>> game2_layers;
    std::vector<std::vector<std::pair<int, VertexSet>>> game2_entries;
};

// Arm elimination for self-avoiding contexts: per context, per layer, the
// learner move of sequential game I (greedy dominating set + approximate
// independent set of the residual active set), then confidence-bound
// elimination with the layer-indexed radius.
RegretTrace alg1_run(const BanditInstance& instance, const ContextSchedule& schedule,
                     const PolicyConfig& config, std::uint64_t seed,
                     PolicyDiagnostics* diag = nullptr);

// Arm elimination under general contexts: one action per round from the
// greedy game-II learner on the residual of the current layer; layers advance
// per context whenever the active set is covered by the layer's action set.
RegretTrace alg2_run(const BanditInstance& instance, const ContextSchedule& schedule,
                     const PolicyConfig& config, std::uint64_t seed,
                     PolicyDiagnostics* diag = nullptr,
                     const GridGraph* lex_grid = nullptr);

// Per-context independent successive elimination; observations restricted to
// the played context (graph feedback within the round, no cross-learning).
RegretTrace baseline_no_crosslearn(const BanditInstance& instance, const ContextSchedule& schedule,
                                   const PolicyConfig& config, std::uint64_t seed,
                                   PolicyDiagnostics* diag = nullptr);

// Keep the actions within `threshold` of the best empirical mean. Never
// empty: the argmax always survives. threshold must be positive; means must
// be defined (observed at least once) on every active action.
VertexSet eliminate(VertexSet active, std::span<const double> means, double threshold);

} // namespace gfb
