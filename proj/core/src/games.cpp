#include "gfb/games.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <unordered_map>

#include "gfb/errors.hpp"

namespace gfb {

// ---------------------------------------------------------------------------
// Transcript text
// ---------------------------------------------------------------------------

std::string GameTranscript::to_text() const {
    std::string out;
    for (const Move& m : moves) {
        if (m.adversary) {
            out += "ADV " + std::to_string(m.context + 1);
            if (m.set) out += " " + m.set->to_string();
        } else if (kind == GameKind::One) {
            out += "LRN " + (m.set ? m.set->to_string() : std::string("[]"));
        } else {
            out += "LRN " + std::to_string(m.vertex);
        }
        out += '\n';
    }
    out += "COST " + std::to_string(final_cost) + '\n';
    return out;
}

namespace {

VertexSet parse_bracket_set(std::istringstream& ls, int lineno) {
    std::string tok;
    if (!(ls >> tok) || tok.front() != '[')
        throw InvalidInputError("expected '[' set on transcript line " + std::to_string(lineno));
    // re-assemble "[a b c]" possibly split across tokens
    std::string body = tok;
    while (body.back() != ']') {
        if (!(ls >> tok))
            throw InvalidInputError("unterminated set on transcript line " + std::to_string(lineno));
        body += ' ';
        body += tok;
    }
    body = body.substr(1, body.size() - 2);
    std::istringstream bs(body);
    VertexSet s;
    int v;
    while (bs >> v) {
        if (v < 0 || v >= FeedbackGraph::kMaxVertices)
            throw InvalidInputError("vertex out of range on transcript line " + std::to_string(lineno));
        s.insert(v);
    }
    return s;
}

} // namespace

GameTranscript GameTranscript::parse(std::istream& in) {
    GameTranscript t;
    bool kind_known = false;
    std::string line;
    int lineno = 0;
    int max_context = 0;
    bool saw_cost = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "COST") {
            if (!(ls >> t.final_cost))
                throw InvalidInputError("bad COST line " + std::to_string(lineno));
            saw_cost = true;
            continue;
        }
        Move m;
        if (tag == "ADV") {
            int c;
            if (!(ls >> c) || c < 1)
                throw InvalidInputError("bad ADV context on line " + std::to_string(lineno));
            m.adversary = true;
            m.context = c - 1;
            max_context = std::max(max_context, c);
            std::streampos pos = ls.tellg();
            std::string peek;
            if (ls >> peek) {
                ls.clear();
                ls.seekg(pos);
                m.set = parse_bracket_set(ls, lineno);
            }
        } else if (tag == "LRN") {
            std::streampos pos = ls.tellg();
            std::string peek;
            if (!(ls >> peek))
                throw InvalidInputError("empty LRN on line " + std::to_string(lineno));
            ls.clear();
            ls.seekg(pos);
            if (peek.front() == '[') {
                m.set = parse_bracket_set(ls, lineno);
                t.kind = GameKind::One;
                kind_known = true;
            } else {
                if (!(ls >> m.vertex))
                    throw InvalidInputError("bad LRN vertex on line " + std::to_string(lineno));
                t.kind = GameKind::Two;
                kind_known = true;
            }
        } else {
            throw InvalidInputError("unknown transcript tag '" + tag + "' on line " +
                                    std::to_string(lineno));
        }
        t.moves.push_back(m);
    }
    if (!saw_cost) throw InvalidInputError("transcript is missing the COST line");
    (void)kind_known;
    t.M = max_context;
    return t;
}

// ---------------------------------------------------------------------------
// Game I
// ---------------------------------------------------------------------------

GameIState::GameIState(const FeedbackGraph& g, int M) : g_(&g), M_(M) {
    if (M < 1) throw InvalidInputError("game I needs M >= 1");
}

bool GameIState::adversary_move_legal(VertexSet a) const {
    if (finished()) return false;
    if (!a.subset_of(g_->vertices())) return false;
    return !a.intersects(covered_);
}

void GameIState::play(VertexSet adversary_set, VertexSet learner_set) {
    if (finished()) throw RuleViolationError("game I already finished");
    if (!adversary_move_legal(adversary_set))
        throw RuleViolationError("adversary set " + adversary_set.to_string() +
                                 " intersects N_out of earlier learner plays");
    if (!learner_set.subset_of(adversary_set))
        throw RuleViolationError("learner set must be a subset of the adversary set");
    if (!g_->dominates(learner_set, adversary_set))
        throw RuleViolationError("learner set " + learner_set.to_string() +
                                 " does not dominate " + adversary_set.to_string());
    covered_ |= g_->out_neighbors(learner_set);
    cost_ += learner_set.size();
    history_.emplace_back(adversary_set, learner_set);
}

VertexSet game1_learner_move(const GameIState& state, VertexSet a_c, Rng& rng) {
    if (!state.adversary_move_legal(a_c))
        throw RuleViolationError("illegal adversary set " + a_c.to_string());
    const FeedbackGraph& g = state.graph();
    VertexSet dom = greedy_dominating_set(g, a_c);
    VertexSet ind = approx_independent_set(g, a_c, rng);
    return dom | ind;
}

GameIAdversary game1_adversary_beta_witness(const FeedbackGraph& g, int M, int beta_cap) {
    auto report = std::make_shared<QuantityReport>(beta_M_exact(g, M, beta_cap));
    return [report](const GameIState& state) -> VertexSet {
        int step = state.steps_played();
        if (step < static_cast<int>(report->certificate.size()))
            return report->certificate[static_cast<std::size_t>(step)];
        return {};
    };
}

namespace {

// Minimax solver for game I. Value function depends on the history only
// through N_out(union of learner plays) and the step index.
struct Game1Solver {
    const FeedbackGraph& g;
    int M;
    std::unordered_map<std::uint64_t, int> memo;

    Game1Solver(const FeedbackGraph& graph, int contexts) : g(graph), M(contexts) {}

    static std::uint64_t key(std::uint64_t covered, int step) {
        return (covered << 6) | static_cast<std::uint64_t>(step);
    }

    int value(std::uint64_t covered, int step) {
        if (step >= M) return 0;
        std::uint64_t k = key(covered, step);
        auto it = memo.find(k);
        if (it != memo.end()) return it->second;
        std::uint64_t free = g.vertices().bits() & ~covered;
        int best = 0;  // adversary may always play the empty set
        // adversary: any subset of the free vertices
        for (std::uint64_t a = free;; a = (a - 1) & free) {
            if (a != 0) best = std::max(best, learner_best(a, covered, step));
            if (a == 0) break;
        }
        memo.emplace(k, best);
        return best;
    }

    int learner_best(std::uint64_t a, std::uint64_t covered, int step) {
        int best = g.num_vertices() * M + 1;
        VertexSet aset(a);
        for (std::uint64_t d = a;; d = (d - 1) & a) {
            if (d != 0 || a == 0) {
                VertexSet dset(d);
                if (g.dominates(dset, aset)) {
                    int cost = std::popcount(d) +
                               value(covered | g.out_neighbors(dset).bits(), step + 1);
                    best = std::min(best, cost);
                }
            }
            if (d == 0) break;
        }
        return best;
    }

    // Deterministic argmax adversary move (first maximizer in ascending mask
    // order, empty set last).
    VertexSet best_adversary_move(std::uint64_t covered, int step) {
        int target = value(covered, step);
        std::uint64_t free = g.vertices().bits() & ~covered;
        std::uint64_t best_a = 0;
        // ascending subset order for determinism
        std::vector<std::uint64_t> subsets;
        for (std::uint64_t a = free;; a = (a - 1) & free) {
            subsets.push_back(a);
            if (a == 0) break;
        }
        std::sort(subsets.begin(), subsets.end());
        for (std::uint64_t a : subsets) {
            int v = a == 0 ? value(covered, step + 1) : learner_best(a, covered, step);
            if (v == target) {
                best_a = a;
                break;
            }
        }
        return VertexSet(best_a);
    }

    VertexSet best_learner_move(std::uint64_t a, std::uint64_t covered, int step) {
        int target = learner_best(a, covered, step);
        VertexSet aset(a);
        std::vector<std::uint64_t> subsets;
        for (std::uint64_t d = a;; d = (d - 1) & a) {
            subsets.push_back(d);
            if (d == 0) break;
        }
        std::sort(subsets.begin(), subsets.end());
        for (std::uint64_t d : subsets) {
            VertexSet dset(d);
            if ((d == 0 && a == 0) || (d != 0 && g.dominates(dset, aset))) {
                int cost = std::popcount(d) + value(covered | g.out_neighbors(dset).bits(), step + 1);
                if (cost == target) return dset;
            }
        }
        throw InternalError("game-I learner argmin not found");
    }
};

void check_game1_caps(const FeedbackGraph& g, int M, int k_cap, int m_cap) {
    if (g.num_vertices() > k_cap)
        throw SizeLimitError("game1 exact search capped at K <= " + std::to_string(k_cap));
    if (M > m_cap)
        throw SizeLimitError("game1 exact search capped at M <= " + std::to_string(m_cap));
}

} // namespace

int game1_minimax_exact(const FeedbackGraph& g, int M, int k_cap, int m_cap) {
    check_game1_caps(g, M, k_cap, m_cap);
    Game1Solver solver(g, M);
    return solver.value(0, 0);
}

GameIAdversary game1_adversary_exact(const FeedbackGraph& g, int M, int k_cap, int m_cap) {
    check_game1_caps(g, M, k_cap, m_cap);
    auto solver = std::make_shared<Game1Solver>(g, M);
    return [solver](const GameIState& state) {
        return solver->best_adversary_move(state.covered().bits(), state.steps_played());
    };
}

GameILearner game1_learner_exact(const FeedbackGraph& g, int M, int k_cap, int m_cap) {
    check_game1_caps(g, M, k_cap, m_cap);
    auto solver = std::make_shared<Game1Solver>(g, M);
    return [solver](const GameIState& state, VertexSet a) {
        return solver->best_learner_move(a.bits(), state.covered().bits(), state.steps_played());
    };
}

GameTranscript play_game1(const FeedbackGraph& g, int M, const GameIAdversary& adversary,
                          const GameILearner& learner) {
    GameIState state(g, M);
    GameTranscript t;
    t.kind = GameKind::One;
    t.M = M;
    while (!state.finished()) {
        VertexSet a = adversary(state);
        VertexSet d = learner(state, a);
        int c = state.steps_played();
        state.play(a, d);
        t.moves.push_back({true, c, a, -1});
        t.moves.push_back({false, c, d, -1});
    }
    t.final_cost = state.total_cost();
    return t;
}

void replay_game1(const FeedbackGraph& g, const GameTranscript& t) {
    if (t.kind != GameKind::One) throw InvalidInputError("not a game-I transcript");
    GameIState state(g, std::max(1, t.M));
    std::optional<VertexSet> pending;
    for (const auto& m : t.moves) {
        if (m.adversary) {
            if (pending) throw RuleViolationError("two adversary moves in a row");
            pending = m.set.value_or(VertexSet());
        } else {
            if (!pending) throw RuleViolationError("learner move without adversary move");
            state.play(*pending, m.set.value_or(VertexSet()));
            pending.reset();
        }
    }
    if (pending) throw RuleViolationError("dangling adversary move");
    if (state.total_cost() != t.final_cost)
        throw InternalError("transcript cost " + std::to_string(t.final_cost) +
                            " != replayed cost " + std::to_string(state.total_cost()));
}

// ---------------------------------------------------------------------------
// Game II
// ---------------------------------------------------------------------------

GameIIState::GameIIState(const FeedbackGraph& g, int M) : g_(&g), M_(M) {
    if (M < 1) throw InvalidInputError("game II needs M >= 1");
    sets_.resize(static_cast<std::size_t>(M));
}

bool GameIIState::context_known(int c) const {
    return c >= 0 && c < M_ && sets_[static_cast<std::size_t>(c)].has_value();
}

VertexSet GameIIState::active(int c) const {
    if (c < 0 || c >= M_) throw InvalidInputError("context out of range");
    return sets_[static_cast<std::size_t>(c)].value_or(VertexSet());
}

bool GameIIState::terminal() const {
    for (int c = 0; c < M_; ++c)
        if (context_known(c) && !residual(c).empty()) return false;
    return true;
}

int GameIIState::pending_context() const { return pending_; }

void GameIIState::adversary_move(int c, std::optional<VertexSet> a_if_new) {
    if (pending_ >= 0) throw RuleViolationError("learner move expected");
    if (c < 0 || c >= M_) throw RuleViolationError("context out of range in game II");
    if (!context_known(c)) {
        if (!a_if_new)
            throw RuleViolationError("first appearance of a context must carry its set");
        g_->check_set(*a_if_new);
        sets_[static_cast<std::size_t>(c)] = *a_if_new;
        intro_.emplace_back(c, *a_if_new);
    } else if (a_if_new && *a_if_new != *sets_[static_cast<std::size_t>(c)]) {
        throw RuleViolationError("A_c may not change after its first appearance");
    }
    if (residual(c).empty())
        throw RuleViolationError("adversary must leave a non-empty residual");
    pending_ = c;
}

void GameIIState::learner_move(int v) {
    if (pending_ < 0) throw RuleViolationError("adversary move expected");
    g_->check_vertex(v);
    VertexSet res = residual(pending_);
    if (!res.contains(v))
        throw RuleViolationError("learner must pick inside the uncovered residual of A_c");
    picks_.emplace_back(pending_, v);
    chosen_.insert(v);
    covered_ |= g_->out(v);
    pending_ = -1;
}

int choose_max_out_degree(const FeedbackGraph& g, VertexSet residual) {
    int pick = -1, gain = -1;
    for (int v : residual) {
        int d = (g.out(v) & residual).size();
        if (d > gain) {
            gain = d;
            pick = v;
        }
    }
    return pick;
}

int game2_learner_greedy(const GameIIState& state) {
    int c = state.pending_context();
    if (c < 0) throw RuleViolationError("no pending adversary move");
    VertexSet res = state.residual(c);
    if (res.empty()) throw RuleViolationError("empty residual: adversary broke the rules");
    return choose_max_out_degree(state.graph(), res);
}

GameIILearner game2_learner_lex(const GridGraph& grid) {
    if (grid.rows * grid.cols != grid.graph.num_vertices())
        throw UnsupportedGraphError("grid labels do not match the graph");
    int cols = grid.cols;
    return [cols](const GameIIState& state) {
        int c = state.pending_context();
        if (c < 0) throw RuleViolationError("no pending adversary move");
        VertexSet res = state.residual(c);
        if (res.empty()) throw RuleViolationError("empty residual: adversary broke the rules");
        int best = -1;
        std::pair<int, int> best_label{1 << 30, 1 << 30};
        for (int v : res) {
            std::pair<int, int> label{v / cols, v % cols};
            if (label < best_label) {
                best_label = label;
                best = v;
            }
        }
        return best;
    };
}

GameIIAdversary game2_adversary_random(const FeedbackGraph& g, int M, std::uint64_t seed,
                                       double density) {
    struct State {
        Rng rng;
        std::vector<VertexSet> planned;
        std::vector<bool> introduced;
    };
    auto st = std::make_shared<State>(State{Rng(seed), {}, std::vector<bool>(static_cast<std::size_t>(M), false)});
    // Disjoint-ish plan: deal vertices to contexts round-robin-with-gaps, then
    // sprinkle a few duplicates. Overlap is legal in game II.
    std::vector<int> verts = g.vertices().to_vector();
    st->rng.shuffle(verts);
    st->planned.assign(static_cast<std::size_t>(M), VertexSet());
    for (std::size_t i = 0; i < verts.size(); ++i) {
        if (st->rng.next_double() > density) continue;
        st->planned[i % static_cast<std::size_t>(M)].insert(verts[i]);
    }
    for (int c = 0; c < M; ++c)
        if (!verts.empty() && st->rng.next_double() < 0.3)
            st->planned[static_cast<std::size_t>(c)].insert(
                verts[static_cast<std::size_t>(st->rng.uniform_int(static_cast<int>(verts.size())))]);

    return [st, M](const GameIIState& state) -> std::optional<GameIIAdvMove> {
        std::vector<int> options;
        for (int c = 0; c < M; ++c) {
            if (state.context_known(c)) {
                if (!state.residual(c).empty()) options.push_back(c);
            } else {
                VertexSet would = st->planned[static_cast<std::size_t>(c)] - state.covered();
                if (!would.empty()) options.push_back(c);
            }
        }
        if (options.empty()) return std::nullopt;
        int c = options[static_cast<std::size_t>(st->rng.uniform_int(static_cast<int>(options.size())))];
        if (state.context_known(c)) return GameIIAdvMove{c, std::nullopt};
        return GameIIAdvMove{c, st->planned[static_cast<std::size_t>(c)]};
    };
}

GameIIAdversary game2_adversary_fixed(std::vector<VertexSet> sets, std::vector<int> order) {
    return [sets = std::move(sets), order = std::move(order)](const GameIIState& state)
               -> std::optional<GameIIAdvMove> {
        for (int c : order) {
            if (!state.context_known(c)) {
                VertexSet a = sets[static_cast<std::size_t>(c)];
                if ((a - state.covered()).empty()) continue;  // nothing left to force
                return GameIIAdvMove{c, a};
            }
            if (!state.residual(c).empty()) return GameIIAdvMove{c, std::nullopt};
        }
        return std::nullopt;
    };
}

GameIIAdversary game2_adversary_fixed_random_order(std::vector<VertexSet> sets,
                                                   std::uint64_t order_seed) {
    auto rng = std::make_shared<Rng>(order_seed);
    return [sets = std::move(sets), rng](const GameIIState& state)
               -> std::optional<GameIIAdvMove> {
        std::vector<int> options;
        for (int c = 0; c < static_cast<int>(sets.size()); ++c) {
            if (state.context_known(c)) {
                if (!state.residual(c).empty()) options.push_back(c);
            } else if (!(sets[static_cast<std::size_t>(c)] - state.covered()).empty()) {
                options.push_back(c);
            }
        }
        if (options.empty()) return std::nullopt;
        int c = options[static_cast<std::size_t>(rng->uniform_int(static_cast<int>(options.size())))];
        if (state.context_known(c)) return GameIIAdvMove{c, std::nullopt};
        return GameIIAdvMove{c, sets[static_cast<std::size_t>(c)]};
    };
}

GameIIAdversary game2_adversary_game1_exact(const FeedbackGraph& g, int M, int k_cap, int m_cap) {
    check_game1_caps(g, M, k_cap, m_cap);
    auto solver = std::make_shared<Game1Solver>(g, M);
    return [solver, M](const GameIIState& state) -> std::optional<GameIIAdvMove> {
        // finish the open context first
        for (int c = 0; c < M; ++c)
            if (state.context_known(c) && !state.residual(c).empty())
                return GameIIAdvMove{c, std::nullopt};
        int next = 0;
        while (next < M && state.context_known(next)) ++next;
        while (next < M) {
            VertexSet a = solver->best_adversary_move(state.covered().bits(), next);
            if (!a.empty()) return GameIIAdvMove{next, a};
            ++next;  // optimal play is the empty set: skip the context
        }
        return std::nullopt;
    };
}

GameTranscript play_game2(const FeedbackGraph& g, int M, const GameIIAdversary& adversary,
                          const GameIILearner& learner) {
    GameIIState state(g, M);
    GameTranscript t;
    t.kind = GameKind::Two;
    t.M = M;
    while (true) {
        auto mv = adversary(state);
        if (!mv) break;
        bool fresh = !state.context_known(mv->context);
        state.adversary_move(mv->context, mv->set);
        t.moves.push_back({true, mv->context, fresh ? mv->set : std::nullopt, -1});
        int v = learner(state);
        state.learner_move(v);
        t.moves.push_back({false, mv->context, std::nullopt, v});
    }
    t.final_cost = state.duration();
    return t;
}

namespace {

GameIIState replay_game2_state(const FeedbackGraph& g, const GameTranscript& t,
                               std::vector<std::pair<int, VertexSet>>* residuals) {
    if (t.kind != GameKind::Two) throw InvalidInputError("not a game-II transcript");
    GameIIState state(g, std::max(1, t.M));
    for (const auto& m : t.moves) {
        if (m.adversary) {
            state.adversary_move(m.context, m.set);
        } else {
            if (residuals)
                residuals->emplace_back(m.context, state.residual(m.context));
            state.learner_move(m.vertex);
        }
    }
    return state;
}

} // namespace

void replay_game2(const FeedbackGraph& g, const GameTranscript& t) {
    GameIIState state = replay_game2_state(g, t, nullptr);
    if (state.duration() != t.final_cost)
        throw InternalError("transcript cost " + std::to_string(t.final_cost) +
                            " != replayed duration " + std::to_string(state.duration()));
}

GameIICertificate game2_transcript_to_cert(const FeedbackGraph& g, const GameTranscript& t) {
    std::vector<std::pair<int, VertexSet>> residuals;
    GameIIState state = replay_game2_state(g, t, &residuals);
    int M = state.contexts();
    GameIICertificate cert;
    cert.V.assign(static_cast<std::size_t>(M), VertexSet());
    cert.B.assign(static_cast<std::size_t>(M), VertexSet());
    std::size_t i = 0;
    for (const auto& m : t.moves) {
        if (m.adversary) continue;
        auto [c, res] = residuals[i++];
        cert.V[static_cast<std::size_t>(c)] |= g.out(m.vertex) & res;
        cert.B[static_cast<std::size_t>(c)].insert(m.vertex);
    }
    // verification: disjoint V, domination, size bound, acyclic B-union
    VertexSet seen;
    double factor = 1.0 + std::log(static_cast<double>(std::max(1, g.num_vertices())));
    VertexSet b_union;
    for (int c = 0; c < M; ++c) {
        auto idx = static_cast<std::size_t>(c);
        if (cert.V[idx].intersects(seen))
            throw InternalError("game-II certificate: V_c sets are not disjoint");
        seen |= cert.V[idx];
        if (!cert.B[idx].subset_of(cert.V[idx]))
            throw InternalError("game-II certificate: B_c is not inside V_c");
        if (!g.dominates(cert.B[idx], cert.V[idx]))
            throw InternalError("game-II certificate: B_c does not dominate V_c");
        if (!cert.V[idx].empty()) {
            int delta = dominating_number_exact(g, cert.V[idx]).value;
            if (cert.B[idx].size() > factor * delta + 1e-9)
                throw InternalError("game-II certificate: |B_c| exceeds delta(V_c)(1+ln K)");
        }
        b_union |= cert.B[idx];
    }
    if (!g.is_acyclic_subset(b_union))
        throw InternalError("game-II certificate: union of B_c is not acyclic");
    return cert;
}

GameTranscript game2_group_as_game1(const FeedbackGraph& g, const GameTranscript& t) {
    if (t.kind != GameKind::Two) throw InvalidInputError("not a game-II transcript");
    // context order of first appearance must be self-avoiding
    std::vector<int> order;
    for (const auto& m : t.moves) {
        if (!m.adversary) continue;
        if (order.empty() || order.back() != m.context) order.push_back(m.context);
    }
    std::vector<bool> seen(static_cast<std::size_t>(std::max(1, t.M)), false);
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (seen[static_cast<std::size_t>(order[i])])
            throw PreconditionError("context order is not self-avoiding");
        seen[static_cast<std::size_t>(order[i])] = true;
    }

    // replay to find each context's residual-at-entry and its picks
    GameIIState state(g, std::max(1, t.M));
    std::vector<std::pair<VertexSet, VertexSet>> grouped;  // (A residual at entry, D picks)
    int current = -1;
    for (const auto& m : t.moves) {
        if (m.adversary) {
            if (m.context != current) {
                current = m.context;
                VertexSet a = m.set ? *m.set : state.active(m.context);
                grouped.emplace_back(a - state.covered(), VertexSet());
            }
            state.adversary_move(m.context, m.set);
        } else {
            grouped.back().second.insert(m.vertex);
            state.learner_move(m.vertex);
        }
    }

    GameTranscript out;
    out.kind = GameKind::One;
    out.M = std::max(1, static_cast<int>(grouped.size()));
    int cost = 0;
    int c = 0;
    for (auto& [a, d] : grouped) {
        out.moves.push_back({true, c, a, -1});
        out.moves.push_back({false, c, d, -1});
        cost += d.size();
        ++c;
    }
    out.final_cost = cost;
    return out;
}

} // namespace gfb
