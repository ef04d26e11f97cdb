#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gfb/feedback_graph.hpp"
#include "gfb/graph_gen.hpp"
#include "gfb/quantities.hpp"
#include "gfb/rng.hpp"

namespace gfb {

// ---------------------------------------------------------------------------
// Transcripts
// ---------------------------------------------------------------------------

enum class GameKind { One, Two };

// Text form, one move per line:
//   game I    "ADV <c> [set]" then "LRN [set]", final "COST n"
//   game II   "ADV <c> [set]" at a context's first appearance, "ADV <c>"
//             afterwards, "LRN <v>", final "COST n"
// Contexts are 1-indexed in the text, vertices 0-indexed.
struct GameTranscript {
    struct Move {
        bool adversary = false;
        int context = 0;                 // 0-based internally
        std::optional<VertexSet> set;    // ADV set / game-I LRN set
        int vertex = -1;                 // game-II LRN vertex
    };

    GameKind kind = GameKind::One;
    int M = 0;
    std::vector<Move> moves;
    int final_cost = 0;

    std::string to_text() const;
    static GameTranscript parse(std::istream& in);
};

// ---------------------------------------------------------------------------
// Sequential game I
// ---------------------------------------------------------------------------

// M alternating steps: the adversary picks A_c disjoint from the
// out-neighborhood of everything the learner has played, the learner answers
// with a dominating D_c inside A_c. Cost is the total size of the D_c.
class GameIState {
public:
    GameIState(const FeedbackGraph& g, int M);

    const FeedbackGraph& graph() const { return *g_; }
    int contexts() const { return M_; }
    int steps_played() const { return static_cast<int>(history_.size()); }
    bool finished() const { return steps_played() >= M_; }
    VertexSet covered() const { return covered_; }
    int total_cost() const { return cost_; }

    bool adversary_move_legal(VertexSet a) const;
    // Throws RuleViolationError when either side breaks the rules.
    void play(VertexSet adversary_set, VertexSet learner_set);

    const std::vector<std::pair<VertexSet, VertexSet>>& history() const { return history_; }

private:
    const FeedbackGraph* g_;
    int M_;
    VertexSet covered_;
    int cost_ = 0;
    std::vector<std::pair<VertexSet, VertexSet>> history_;
};

using GameIAdversary = std::function<VertexSet(const GameIState&)>;
using GameILearner = std::function<VertexSet(const GameIState&, VertexSet)>;

// The polynomial learner: greedy dominating set plus approximate independent
// set of the adversary's set.
VertexSet game1_learner_move(const GameIState& state, VertexSet a_c, Rng& rng);

// Plays the beta_M witness tuple; forces cost exactly beta_M(G) against any
// legal learner.
GameIAdversary game1_adversary_beta_witness(const FeedbackGraph& g, int M, int beta_cap = 14);

// Exact minimax value by alternating game-tree search, memoized on
// (covered out-neighborhood, step).
int game1_minimax_exact(const FeedbackGraph& g, int M, int k_cap = 8, int m_cap = 4);

// Optimal strategies extracted from the same search.
GameIAdversary game1_adversary_exact(const FeedbackGraph& g, int M, int k_cap = 8, int m_cap = 4);
GameILearner game1_learner_exact(const FeedbackGraph& g, int M, int k_cap = 8, int m_cap = 4);

GameTranscript play_game1(const FeedbackGraph& g, int M, const GameIAdversary& adversary,
                          const GameILearner& learner);

// Replay a transcript through the state machine; throws RuleViolationError /
// InternalError when the moves or the recorded cost do not check out.
void replay_game1(const FeedbackGraph& g, const GameTranscript& t);

// ---------------------------------------------------------------------------
// Sequential game II
// ---------------------------------------------------------------------------

// One vertex per round. The adversary names a context (fixing its set A_c at
// first appearance) whose active part is not yet covered; the learner picks a
// vertex from that uncovered part. Duration is the number of rounds until
// every named set is covered.
class GameIIState {
public:
    GameIIState(const FeedbackGraph& g, int M);

    const FeedbackGraph& graph() const { return *g_; }
    int contexts() const { return M_; }
    bool context_known(int c) const;
    VertexSet active(int c) const;  // A_c; empty if not yet introduced
    VertexSet chosen() const { return chosen_; }
    VertexSet covered() const { return covered_; }
    VertexSet residual(int c) const { return active(c) - covered_; }
    int duration() const { return static_cast<int>(picks_.size()); }
    // No known context has an uncovered residual.
    bool terminal() const;

    int pending_context() const;  // context awaiting a learner pick, -1 if none

    void adversary_move(int c, std::optional<VertexSet> a_if_new);
    void learner_move(int v);

    const std::vector<std::pair<int, int>>& picks() const { return picks_; }  // (context, vertex)
    const std::vector<std::pair<int, VertexSet>>& introductions() const { return intro_; }

private:
    const FeedbackGraph* g_;
    int M_;
    std::vector<std::optional<VertexSet>> sets_;
    VertexSet chosen_;
    VertexSet covered_;
    int pending_ = -1;
    std::vector<std::pair<int, int>> picks_;
    std::vector<std::pair<int, VertexSet>> intro_;
};

struct GameIIAdvMove {
    int context;
    std::optional<VertexSet> set;  // present at first appearance
};

using GameIIAdversary = std::function<std::optional<GameIIAdvMove>(const GameIIState&)>;
using GameIILearner = std::function<int(const GameIIState&)>;

// Largest out-degree within the residual induced subgraph, lowest index on
// ties; the shared chooser behind the greedy game-II learner and the per-round
// action choice of the general-context elimination policy.
int choose_max_out_degree(const FeedbackGraph& g, VertexSet residual);

// choose_max_out_degree on the pending context's residual. Throws
// RuleViolationError if the residual is empty.
int game2_learner_greedy(const GameIIState& state);

// Lexicographically smallest (row, column) label in the residual. Only for
// graphs carrying grid labels.
GameIILearner game2_learner_lex(const GridGraph& grid);

// Random stress adversary: draws disjoint-ish random sets lazily, interleaves
// contexts randomly, never violates the non-empty-residual rule.
GameIIAdversary game2_adversary_random(const FeedbackGraph& g, int M, std::uint64_t seed,
                                       double density = 0.6);

// Plays fixed sets, introducing them in `order` (self-avoiding: each context
// runs to exhaustion before the next starts).
GameIIAdversary game2_adversary_fixed(std::vector<VertexSet> sets, std::vector<int> order);

// Adaptive interleaving of fixed sets: each round picks the uncovered context
// according to `order_seed`.
GameIIAdversary game2_adversary_fixed_random_order(std::vector<VertexSet> sets,
                                                   std::uint64_t order_seed);

// Wraps the exact game-I adversary: contexts 1..M introduced in order, each
// played to exhaustion, the set chosen by the minimax argmax given what the
// learner has covered so far. Grouped per context this is optimal game-I
// play, so any learner's duration is at least U1*(G, M).
GameIIAdversary game2_adversary_game1_exact(const FeedbackGraph& g, int M, int k_cap = 8,
                                            int m_cap = 4);

GameTranscript play_game2(const FeedbackGraph& g, int M, const GameIIAdversary& adversary,
                          const GameIILearner& learner);

void replay_game2(const FeedbackGraph& g, const GameTranscript& t);

// Coverage certificate extracted from a greedy game-II transcript:
// V_c = union over rounds with context c of N_out(v_t) restricted to the
// residual at pick time, B_c = the picks under c. Verifies disjointness,
// domination, the (1 + ln K) size bound, and acyclicity of the B union;
// throws InternalError if any check fails.
struct GameIICertificate {
    std::vector<VertexSet> V;
    std::vector<VertexSet> B;
};
GameIICertificate game2_transcript_to_cert(const FeedbackGraph& g, const GameTranscript& t);

// Grouped-per-context view of a self-avoiding game-II transcript as a game-I
// transcript (adversary sets replaced by their uncovered residual at entry).
// Throws PreconditionError if the context order is not self-avoiding.
GameTranscript game2_group_as_game1(const FeedbackGraph& g, const GameTranscript& t);

} // namespace gfb
