#include "gfb/elimination.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gfb/errors.hpp"
#include "gfb/quantities.hpp"

namespace gfb {

void PolicyConfig::validate() const {
    if (!(delta > 0.0 && delta < 1.0))
        throw InvalidInputError("delta must lie in (0,1)");
    if (T < 0) throw InvalidInputError("T must be nonnegative");
}

double PolicyConfig::radius(int M, int K, long long horizon, int layer) const {
    double log_term;
    switch (radius_formula) {
        case RadiusFormula::UnionBound:
            log_term = std::log(2.0 * M * K * static_cast<double>(horizon) / delta);
            break;
        case RadiusFormula::HorizonOnly:
            log_term = std::log(static_cast<double>(std::max<long long>(horizon, 2)));
            break;
        default:
            throw InvalidInputError("unknown radius formula");
    }
    return 2.0 * std::sqrt(log_term / static_cast<double>(layer));
}

std::vector<int> RegretTrace::actions() const {
    std::vector<int> a;
    a.reserve(rows.size());
    for (const TraceRow& r : rows) a.push_back(r.action);
    return a;
}

VertexSet eliminate(VertexSet active, std::span<const double> means, double threshold) {
    if (!(threshold > 0)) throw PreconditionError("elimination radius must be positive");
    double best = -std::numeric_limits<double>::infinity();
    for (int a : active) best = std::max(best, means[static_cast<std::size_t>(a)]);
    VertexSet keep;
    for (int a : active)
        if (means[static_cast<std::size_t>(a)] >= best - threshold) keep.insert(a);
    return keep;
}

namespace {

// Shared observation bookkeeping: counts and running means per (context,
// action) pair, updated from full feedback records (cross-learning) or from
// one context only (the baseline).
struct Estimates {
    int M, K;
    std::vector<long long> count;
    std::vector<double> sum;

    Estimates(int contexts, int actions)
        : M(contexts), K(actions),
          count(static_cast<std::size_t>(contexts) * static_cast<std::size_t>(actions), 0),
          sum(static_cast<std::size_t>(contexts) * static_cast<std::size_t>(actions), 0.0) {}

    std::size_t idx(int c, int a) const {
        return static_cast<std::size_t>(c) * static_cast<std::size_t>(K) +
               static_cast<std::size_t>(a);
    }

    void absorb(const FeedbackRecord& rec) {
        std::size_t pos = 0;
        for (int c = 0; c < M; ++c)
            for (int a : rec.observed) {
                count[idx(c, a)] += 1;
                sum[idx(c, a)] += rec.values[pos++];
            }
    }

    void absorb_context_only(const FeedbackRecord& rec, int c) {
        for (int a : rec.observed) {
            count[idx(c, a)] += 1;
            sum[idx(c, a)] += rec.value(c, a);
        }
    }

    std::vector<double> means_row(int c) const {
        std::vector<double> row(static_cast<std::size_t>(K),
                                -std::numeric_limits<double>::infinity());
        for (int a = 0; a < K; ++a)
            if (count[idx(c, a)] > 0)
                row[static_cast<std::size_t>(a)] =
                    sum[idx(c, a)] / static_cast<double>(count[idx(c, a)]);
        return row;
    }

    long long observations(int c, int a) const { return count[idx(c, a)]; }
};

struct RunContext {
    const BanditInstance& instance;
    const ContextSchedule& schedule;
    const PolicyConfig& config;
    RewardSampler sampler;
    Estimates est;
    RegretTrace trace;
    PolicyDiagnostics* diag;
    long long horizon;
    double cum_regret = 0;

    RunContext(const BanditInstance& inst, const ContextSchedule& sched, const PolicyConfig& cfg,
               std::uint64_t seed, PolicyDiagnostics* d)
        : instance(inst), schedule(sched), config(cfg), sampler(mix64(seed, 0x5eedULL)),
          est(inst.contexts(), inst.actions()), diag(d),
          horizon(cfg.T > 0 ? cfg.T : sched.horizon()) {
        cfg.validate();
        if (cfg.T > 0 && cfg.T != sched.horizon())
            throw InvalidInputError("config T does not match the schedule horizon");
        trace.rows.reserve(static_cast<std::size_t>(sched.horizon()));
    }

    double radius(int layer) const {
        return config.radius(instance.contexts(), instance.actions(), horizon, layer);
    }

    // Play one round; returns the feedback record (already absorbed unless
    // context_only >= 0, in which case only that context's row is used).
    FeedbackRecord play(long long t, int c, int a, int context_only = -1) {
        FeedbackRecord rec = step(instance, schedule, t, a, sampler);
        if (context_only < 0)
            est.absorb(rec);
        else
            est.absorb_context_only(rec, context_only);
        double inst_regret = instance.gap(c, a);
        cum_regret += inst_regret;
        trace.rows.push_back({t, c, a, rec.value(c, a), inst_regret, cum_regret});
        return rec;
    }

    // Observation-count audit at elimination time: every active action
    // must hold at least `layer` observations under context c.
    void assert_counts(VertexSet active, int c, int layer) {
        for (int a : active)
            if (est.observations(c, a) < layer)
                throw InternalError("elimination audit: action " + std::to_string(a) +
                                    " under context " + std::to_string(c) + " has " +
                                    std::to_string(est.observations(c, a)) +
                                    " observations at layer " + std::to_string(layer));
    }

    void audit_elimination(VertexSet active, VertexSet survivors, int c, int layer) {
        if (!diag) return;
        diag->eliminations += 1;
        if (!survivors.contains(instance.best_action(c))) diag->best_arm_ever_eliminated = true;
        double delta_l = radius(layer) / 2.0;  // sqrt(log(2MKT/delta)/layer) under UnionBound
        auto means = est.means_row(c);
        for (int a : active) {
            double dev = std::abs(means[static_cast<std::size_t>(a)] - instance.mean(c, a));
            diag->max_confidence_deviation_ratio =
                std::max(diag->max_confidence_deviation_ratio, dev / delta_l);
        }
        double gap_bound = std::min(1.0, 4.0 * delta_l);
        for (int a : survivors)
            diag->max_survivor_gap_excess =
                std::max(diag->max_survivor_gap_excess, instance.gap(c, a) - gap_bound);
    }

    void count_layer_action(int layer) {
        if (!diag) return;
        if (static_cast<int>(diag->actions_per_layer.size()) < layer)
            diag->actions_per_layer.resize(static_cast<std::size_t>(layer), 0);
        diag->actions_per_layer[static_cast<std::size_t>(layer - 1)] += 1;
    }
};

} // namespace

RegretTrace alg1_run(const BanditInstance& instance, const ContextSchedule& schedule,
                     const PolicyConfig& config, std::uint64_t seed, PolicyDiagnostics* diag) {
    if (!validate_self_avoiding(schedule))
        throw PreconditionError("alg1 is specified for self-avoiding context sequences only");
    RunContext run(instance, schedule, config, seed, diag);
    Rng game_rng(mix64(seed, 0x6a3eULL));
    const FeedbackGraph& g = instance.graph();

    // cover[l-1] = N_out of every action already played on layer l by earlier
    // contexts (played prefixes only, so interrupted layers stay honest)
    std::vector<VertexSet> cover;
    auto cover_of = [&cover](int layer) -> VertexSet& {
        if (static_cast<int>(cover.size()) < layer) cover.resize(static_cast<std::size_t>(layer));
        return cover[static_cast<std::size_t>(layer - 1)];
    };

    int current = -1;
    VertexSet active;
    int layer = 1;
    VertexSet layer_residual;
    std::vector<int> queue;
    std::size_t qpos = 0;

    long long T = schedule.horizon();
    for (long long t = 1; t <= T; ++t) {
        int c = schedule.at(t);
        if (c != current) {
            current = c;
            active = g.vertices();
            layer = 1;
            queue.clear();
            qpos = 0;
        }
        if (qpos >= queue.size()) {
            // open the next layer; zero-cost layers (empty residual) advance
            // immediately, bounded by the deepest layer earlier contexts built
            while (true) {
                if (layer > static_cast<int>(T) + 1)
                    throw InternalError("alg1 layer index ran past the horizon");
                layer_residual = active - cover_of(layer);
                VertexSet d;
                if (!layer_residual.empty()) {
                    VertexSet dom = greedy_dominating_set(g, layer_residual);
                    VertexSet ind = approx_independent_set(g, layer_residual, game_rng);
                    d = dom | ind;
                }
                if (!d.empty()) {
                    queue = d.to_vector();
                    qpos = 0;
                    break;
                }
                // layer complete with no plays: eliminate on historic means
                run.assert_counts(active, c, layer);
                VertexSet survivors = eliminate(active, run.est.means_row(c), run.radius(layer));
                run.audit_elimination(active, survivors, c, layer);
                if (diag && diag->record_games) {
                    if (static_cast<int>(diag->game1_layers.size()) < layer)
                        diag->game1_layers.resize(static_cast<std::size_t>(layer));
                    diag->game1_layers[static_cast<std::size_t>(layer - 1)].emplace_back(
                        layer_residual, VertexSet());
                }
                active = survivors;
                layer += 1;
            }
        }
        int a = queue[qpos++];
        run.play(t, c, a);
        run.count_layer_action(layer);
        cover_of(layer) |= g.out(a);
        if (qpos >= queue.size()) {
            // layer fully played: eliminate and move on
            run.assert_counts(active, c, layer);
            VertexSet survivors = eliminate(active, run.est.means_row(c), run.radius(layer));
            run.audit_elimination(active, survivors, c, layer);
            if (diag && diag->record_games) {
                if (static_cast<int>(diag->game1_layers.size()) < layer)
                    diag->game1_layers.resize(static_cast<std::size_t>(layer));
                diag->game1_layers[static_cast<std::size_t>(layer - 1)].emplace_back(
                    layer_residual, VertexSet::of(queue));
            }
            active = survivors;
            layer += 1;
            queue.clear();
            qpos = 0;
        }
    }
    return run.trace;
}

RegretTrace alg2_run(const BanditInstance& instance, const ContextSchedule& schedule,
                     const PolicyConfig& config, std::uint64_t seed, PolicyDiagnostics* diag,
                     const GridGraph* lex_grid) {
    RunContext run(instance, schedule, config, seed, diag);
    const FeedbackGraph& g = instance.graph();
    int M = instance.contexts();
    if (lex_grid && lex_grid->rows * lex_grid->cols != g.num_vertices())
        throw UnsupportedGraphError("lex chooser needs matching grid labels");

    // sparse per-context active sets: (first layer, set) breakpoints
    std::vector<std::vector<std::pair<int, VertexSet>>> entries(
        static_cast<std::size_t>(M), {{1, g.vertices()}});
    std::vector<int> layer_of(static_cast<std::size_t>(M), 1);
    // queries sit on the frontier layer, so the scan from the back is O(1)
    auto active_at = [&entries](int c, int layer) {
        const auto& e = entries[static_cast<std::size_t>(c)];
        for (auto it = e.rbegin(); it != e.rend(); ++it)
            if (it->first <= layer) return it->second;
        return e.front().second;
    };

    std::vector<VertexSet> d_sets;  // per layer
    std::vector<VertexSet> cover;   // per layer, N_out(D_l)
    std::vector<std::vector<char>> seen_on;  // per layer, contexts that already picked
    auto grow = [](std::vector<VertexSet>& v, int layer) -> VertexSet& {
        if (static_cast<int>(v.size()) < layer) v.resize(static_cast<std::size_t>(layer));
        return v[static_cast<std::size_t>(layer - 1)];
    };

    auto choose = [&](VertexSet residual) -> int {
        if (lex_grid) {
            int cols = lex_grid->cols;
            int best = -1;
            std::pair<int, int> best_label{1 << 30, 1 << 30};
            for (int v : residual) {
                std::pair<int, int> label{v / cols, v % cols};
                if (label < best_label) {
                    best_label = label;
                    best = v;
                }
            }
            return best;
        }
        return choose_max_out_degree(g, residual);
    };

    long long T = schedule.horizon();
    for (long long t = 1; t <= T; ++t) {
        int c = schedule.at(t);
        int lt = layer_of[static_cast<std::size_t>(c)];
        VertexSet act = active_at(c, lt);
        VertexSet residual = act - grow(cover, lt);
        if (residual.empty())
            throw InternalError("alg2: scheduled context sits on a completed layer");
        int a = choose(residual);
        if (diag && diag->record_games) {
            if (static_cast<int>(diag->game2_layers.size()) < lt) {
                diag->game2_layers.resize(static_cast<std::size_t>(lt));
                diag->game2_entries.resize(static_cast<std::size_t>(lt));
            }
            if (static_cast<int>(seen_on.size()) < lt)
                seen_on.resize(static_cast<std::size_t>(lt));
            auto& seen = seen_on[static_cast<std::size_t>(lt - 1)];
            if (seen.empty()) seen.assign(static_cast<std::size_t>(M), 0);
            if (!seen[static_cast<std::size_t>(c)]) {
                seen[static_cast<std::size_t>(c)] = 1;
                diag->game2_entries[static_cast<std::size_t>(lt - 1)].emplace_back(c, act);
            }
            diag->game2_layers[static_cast<std::size_t>(lt - 1)].push_back({c, a});
        }
        grow(d_sets, lt).insert(a);
        grow(cover, lt) |= g.out(a);
        run.play(t, c, a);
        run.count_layer_action(lt);

        // advance every context to its first incomplete layer
        for (int c2 = 0; c2 < M; ++c2) {
            while (true) {
                int l = layer_of[static_cast<std::size_t>(c2)];
                VertexSet cur = active_at(c2, l);
                if (!cur.subset_of(grow(cover, l))) break;
                run.assert_counts(cur, c2, l);
                VertexSet survivors = eliminate(cur, run.est.means_row(c2), run.radius(l));
                run.audit_elimination(cur, survivors, c2, l);
                entries[static_cast<std::size_t>(c2)].emplace_back(l + 1, survivors);
                layer_of[static_cast<std::size_t>(c2)] = l + 1;
            }
        }
    }
    return run.trace;
}

RegretTrace baseline_no_crosslearn(const BanditInstance& instance,
                                   const ContextSchedule& schedule, const PolicyConfig& config,
                                   std::uint64_t seed, PolicyDiagnostics* diag) {
    RunContext run(instance, schedule, config, seed, diag);
    Rng game_rng(mix64(seed, 0x6a3eULL));
    const FeedbackGraph& g = instance.graph();
    int M = instance.contexts();

    std::vector<VertexSet> active(static_cast<std::size_t>(M), g.vertices());
    std::vector<int> layer(static_cast<std::size_t>(M), 1);
    std::vector<std::vector<int>> queue(static_cast<std::size_t>(M));
    std::vector<std::size_t> qpos(static_cast<std::size_t>(M), 0);

    long long T = schedule.horizon();
    for (long long t = 1; t <= T; ++t) {
        int c = schedule.at(t);
        auto ci = static_cast<std::size_t>(c);
        if (qpos[ci] >= queue[ci].size()) {
            VertexSet dom = greedy_dominating_set(g, active[ci]);
            VertexSet ind = approx_independent_set(g, active[ci], game_rng);
            queue[ci] = (dom | ind).to_vector();
            qpos[ci] = 0;
        }
        int a = queue[ci][qpos[ci]++];
        run.play(t, c, a, /*context_only=*/c);
        if (qpos[ci] >= queue[ci].size()) {
            run.assert_counts(active[ci], c, layer[ci]);
            VertexSet survivors =
                eliminate(active[ci], run.est.means_row(c), run.radius(layer[ci]));
            run.audit_elimination(active[ci], survivors, c, layer[ci]);
            active[ci] = survivors;
            layer[ci] += 1;
            queue[ci].clear();
            qpos[ci] = 0;
        }
    }
    return run.trace;
}

} // namespace gfb
