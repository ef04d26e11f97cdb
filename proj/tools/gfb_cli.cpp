// Command-line front end: graph quantities, the two sequential games, the
// lower-bound instance generator, policy simulation, and the config-driven
// experiment runner.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "gfb/bandit.hpp"
#include "gfb/elimination.hpp"
#include "gfb/errors.hpp"
#include "gfb/experiment.hpp"
#include "gfb/feedback_graph.hpp"
#include "gfb/games.hpp"
#include "gfb/graph_gen.hpp"
#include "gfb/hard_instance.hpp"
#include "gfb/quantities.hpp"

using namespace gfb;

namespace {

// --graph accepts a file path or a generator spec:
//   gen:grid:ROWSxCOLS     gen:complete:K   gen:edgeless:K   gen:chain:K
//   gen:er:K,p,seed        gen:tc:K,p,seed  gen:cycle:K
struct GraphArg {
    FeedbackGraph graph{0, {}};
    std::optional<GridGraph> grid;
};

GraphArg load_graph(const std::string& spec) {
    GraphArg out;
    if (spec.rfind("gen:", 0) != 0) {
        out.graph = read_graph_file(spec);
        return out;
    }
    std::string body = spec.substr(4);
    auto colon = body.find(':');
    std::string kind = body.substr(0, colon);
    std::string args = colon == std::string::npos ? "" : body.substr(colon + 1);
    auto parse_int = [](const std::string& s) { return std::stoi(s); };
    if (kind == "grid") {
        auto x = args.find('x');
        if (x == std::string::npos) throw InvalidInputError("gen:grid needs ROWSxCOLS");
        out.grid = make_grid(parse_int(args.substr(0, x)), parse_int(args.substr(x + 1)));
        out.graph = out.grid->graph;
        return out;
    }
    if (kind == "complete" || kind == "edgeless" || kind == "chain" || kind == "cycle") {
        int k = parse_int(args);
        if (kind == "complete") out.graph = make_complete(k);
        else if (kind == "edgeless") out.graph = make_edgeless(k);
        else if (kind == "chain") out.graph = make_chain(k);
        else out.graph = make_undirected_cycle(k);
        return out;
    }
    if (kind == "er" || kind == "tc") {
        std::istringstream ss(args);
        std::string tok;
        std::vector<std::string> parts;
        while (std::getline(ss, tok, ',')) parts.push_back(tok);
        if (parts.size() != 3) throw InvalidInputError("gen:" + kind + " needs K,p,seed");
        int k = parse_int(parts[0]);
        double p = std::stod(parts[1]);
        Rng rng(static_cast<std::uint64_t>(std::stoull(parts[2])));
        out.graph = kind == "er" ? erdos_renyi(k, p, rng) : random_transitive_closure(k, p, rng);
        return out;
    }
    throw InvalidInputError("unknown generator spec: " + spec);
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_text_file_atomic(out_path, text);
    }
}

std::string quantity_line(const QuantityReport& r) {
    std::string line = r.name + " " + std::to_string(r.value) + " " +
                       (r.method == Method::Exact ? "exact" : "approximate");
    for (const VertexSet& s : r.certificate) line += " " + s.to_string();
    return line + "\n";
}

int cmd_quantities(const std::string& graph_spec, int M, int exact_cap, std::uint64_t seed) {
    GraphArg g = load_graph(graph_spec);
    ExactCaps caps;
    if (exact_cap > 0) {
        caps.subset_search = exact_cap;
        caps.beta = exact_cap;
        caps.beta_dom = exact_cap;
    }
    std::string out;
    auto guard = [&out](const char* name, auto&& fn) {
        try {
            out += quantity_line(fn());
        } catch (const SizeLimitError&) {
            out += std::string(name) + " n/a size-limit\n";
        }
    };
    guard("alpha", [&] { return independence_number_exact(g.graph, caps.subset_search); });
    guard("delta", [&] {
        return dominating_number_exact(g.graph, g.graph.vertices(), caps.subset_search);
    });
    guard("mas", [&] { return mas_number_exact(g.graph, caps.subset_search); });
    out += "rho " + std::to_string(g.graph.longest_path_length()) + " exact\n";
    guard("beta_M", [&] { return beta_M_exact(g.graph, M, caps.beta); });
    guard("beta_bar_M", [&] { return beta_bar_M_exact(g.graph, M, caps.beta); });
    guard("beta_dom", [&] { return beta_dom_exact(g.graph, M, caps.beta_dom); });
    Rng rng(seed);
    VertexSet approx = approx_independent_set(g.graph, g.graph.vertices(), rng);
    out += "alpha_approx " + std::to_string(approx.size()) + " approximate " +
           approx.to_string() + "\n";
    VertexSet greedy = greedy_dominating_set(g.graph, g.graph.vertices());
    out += "delta_greedy " + std::to_string(greedy.size()) + " approximate " +
           greedy.to_string() + "\n";
    std::cout << out;
    return 0;
}

int cmd_game1(const std::string& graph_spec, int M, const std::string& adversary,
              const std::string& learner, std::uint64_t seed, const std::string& out_path) {
    GraphArg g = load_graph(graph_spec);
    GameIAdversary adv;
    if (adversary == "beta-witness") {
        adv = game1_adversary_beta_witness(g.graph, M);
    } else if (adversary == "exact") {
        adv = game1_adversary_exact(g.graph, M);
    } else {
        std::ifstream in(adversary);
        if (!in) throw InvalidInputError("cannot open adversary transcript: " + adversary);
        auto script = std::make_shared<GameTranscript>(GameTranscript::parse(in));
        adv = [script](const GameIState& state) -> VertexSet {
            int want = state.steps_played();
            int seen = 0;
            for (const auto& m : script->moves)
                if (m.adversary && seen++ == want) return m.set.value_or(VertexSet());
            return {};
        };
    }
    GameILearner lrn;
    if (learner == "approx") {
        auto rng = std::make_shared<Rng>(seed);
        lrn = [rng](const GameIState& state, VertexSet a) {
            return game1_learner_move(state, a, *rng);
        };
    } else if (learner == "exact") {
        lrn = game1_learner_exact(g.graph, M);
    } else {
        throw InvalidInputError("unknown learner: " + learner);
    }
    GameTranscript t = play_game1(g.graph, M, adv, lrn);
    emit(t.to_text(), out_path);
    return 0;
}

int cmd_game2(const std::string& graph_spec, int M, const std::string& adversary,
              const std::string& learner, std::uint64_t seed, const std::string& out_path) {
    GraphArg g = load_graph(graph_spec);
    GameIIAdversary adv;
    if (adversary == "random") {
        adv = game2_adversary_random(g.graph, M, seed);
    } else {
        std::ifstream in(adversary);
        if (!in) throw InvalidInputError("cannot open adversary transcript: " + adversary);
        auto script = std::make_shared<GameTranscript>(GameTranscript::parse(in));
        auto step_idx = std::make_shared<std::size_t>(0);
        adv = [script, step_idx](const GameIIState& state) -> std::optional<GameIIAdvMove> {
            (void)state;
            while (*step_idx < script->moves.size()) {
                const auto& m = script->moves[(*step_idx)++];
                if (m.adversary) return GameIIAdvMove{m.context, m.set};
            }
            return std::nullopt;
        };
    }
    GameIILearner lrn;
    if (learner == "greedy") {
        lrn = [](const GameIIState& state) { return game2_learner_greedy(state); };
    } else if (learner == "lex") {
        if (!g.grid)
            throw UnsupportedGraphError(
                "the lex learner needs grid labels; use --graph gen:grid:ROWSxCOLS");
        lrn = game2_learner_lex(*g.grid);
    } else {
        throw InvalidInputError("unknown learner: " + learner);
    }
    GameTranscript t = play_game2(g.graph, M, adv, lrn);
    emit(t.to_text(), out_path);
    return 0;
}

int cmd_lowerbound(const std::string& graph_spec, int M, long long T, std::uint64_t seed,
                   const std::string& out_dir) {
    GraphArg g = load_graph(graph_spec);
    Rng rng(seed);
    HardInstance hard = build_hard_instance(g.graph, M, T, rng);
    for (const std::string& w : hard.warnings) std::cerr << "warning: " << w << "\n";
    write_text_file_atomic(out_dir + "/instance.txt", mean_table_to_text(hard.instance.means()));
    write_text_file_atomic(out_dir + "/schedule.txt", schedule_to_text(hard.schedule));
    write_text_file_atomic(out_dir + "/hardspec.txt", hard.spec.summary());
    std::cout << "wrote instance.txt, schedule.txt, hardspec.txt to " << out_dir << "\n";
    return 0;
}

int cmd_simulate(const std::string& algo, const std::string& graph_spec,
                 const std::string& instance_arg, const std::string& schedule_arg, long long T,
                 double delta, int reps, std::uint64_t seed, int M_opt,
                 const std::string& out_path) {
    GraphArg g = load_graph(graph_spec);
    std::vector<RegretTrace> traces;
    for (int rep = 0; rep < reps; ++rep) {
        std::uint64_t cs = cell_seed(seed, algo, T, rep);
        std::optional<BanditInstance> instance;
        std::optional<ContextSchedule> schedule;
        int M;
        if (instance_arg == "hard") {
            Rng inst_rng(mix64(cs, hash_str("instance")));
            int want_M = M_opt > 0 ? M_opt : g.graph.num_vertices();
            HardInstance hard = build_hard_instance(g.graph, want_M, T, inst_rng);
            M = hard.instance.contexts();
            instance.emplace(std::move(hard.instance));
            if (schedule_arg == "blocks") schedule = std::move(hard.schedule);
        } else {
            MeanTable table = read_instance_file(instance_arg);
            M = table.M;
            instance.emplace(g.graph, std::move(table));
            if (schedule_arg == "blocks")
                throw InvalidInputError("--schedule blocks requires --instance hard");
        }
        if (!schedule) {
            if (schedule_arg == "random") {
                Rng sched_rng(mix64(cs, hash_str("schedule")));
                schedule = ContextSchedule::uniform_random(T, M, sched_rng);
            } else {
                schedule = read_schedule_file(schedule_arg);
            }
        }
        if (schedule->horizon() != T)
            throw InvalidInputError("schedule horizon " + std::to_string(schedule->horizon()) +
                                    " does not match --T " + std::to_string(T));
        PolicyConfig pc;
        pc.T = T;
        pc.delta = delta;
        std::uint64_t run_seed = mix64(cs, hash_str("policy"));
        RegretTrace trace;
        if (algo == "alg1")
            trace = alg1_run(*instance, *schedule, pc, run_seed);
        else if (algo == "alg2")
            trace = alg2_run(*instance, *schedule, pc, run_seed, nullptr,
                             g.grid ? &*g.grid : nullptr);
        else if (algo == "baseline")
            trace = baseline_no_crosslearn(*instance, *schedule, pc, run_seed);
        else
            throw InvalidInputError("unknown --algo: " + algo);
        trace.replication = rep;
        traces.push_back(std::move(trace));
    }
    emit(traces_to_csv(traces), out_path);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochastic contextual bandits with graph feedback: graph quantities, "
                 "sequential exploration games, arm-elimination policies, experiments"};
    app.require_subcommand(1);

    // quantities
    std::string q_graph;
    int q_M = 1, q_cap = 0;
    std::uint64_t q_seed = 1;
    auto* quantities = app.add_subcommand("quantities", "graph quantities with witnesses");
    quantities->add_option("--graph", q_graph, "graph file or gen:<spec>")->required();
    quantities->add_option("--M", q_M, "context count")->required();
    quantities->add_option("--exact-cap", q_cap, "override every exact-search cap");
    quantities->add_option("--seed", q_seed, "seed for the approximate routines");

    // game1
    std::string g1_graph, g1_adv = "beta-witness", g1_lrn = "approx", g1_out;
    int g1_M = 1;
    std::uint64_t g1_seed = 1;
    auto* game1 = app.add_subcommand("game1", "sequential game I");
    game1->add_option("--graph", g1_graph)->required();
    game1->add_option("--M", g1_M)->required();
    game1->add_option("--adversary", g1_adv, "beta-witness | exact | <transcript file>");
    game1->add_option("--learner", g1_lrn, "approx | exact");
    game1->add_option("--seed", g1_seed);
    game1->add_option("--out", g1_out, "transcript output path (default stdout)");

    // game2
    std::string g2_graph, g2_adv = "random", g2_lrn = "greedy", g2_out;
    int g2_M = 1;
    std::uint64_t g2_seed = 1;
    auto* game2 = app.add_subcommand("game2", "sequential game II");
    game2->add_option("--graph", g2_graph)->required();
    game2->add_option("--M", g2_M)->required();
    game2->add_option("--adversary", g2_adv, "random | <transcript file>");
    game2->add_option("--learner", g2_lrn, "greedy | lex");
    game2->add_option("--seed", g2_seed);
    game2->add_option("--out", g2_out);

    // lowerbound
    std::string lb_graph, lb_out = "out";
    int lb_M = 1;
    long long lb_T = 1000;
    std::uint64_t lb_seed = 1;
    auto* lowerbound = app.add_subcommand("lowerbound", "emit the hard-instance files");
    lowerbound->add_option("--graph", lb_graph)->required();
    lowerbound->add_option("--M", lb_M)->required();
    lowerbound->add_option("--T", lb_T)->required();
    lowerbound->add_option("--seed", lb_seed);
    lowerbound->add_option("--out", lb_out, "output directory")->required();

    // simulate
    std::string s_algo, s_graph, s_instance = "hard", s_schedule = "blocks", s_out;
    long long s_T = 1000;
    double s_delta = 0.05;
    int s_reps = 1, s_M = 0;
    std::uint64_t s_seed = 1;
    auto* simulate = app.add_subcommand("simulate", "run a policy, emit trace CSV");
    simulate->add_option("--algo", s_algo, "alg1 | alg2 | baseline")->required();
    simulate->add_option("--graph", s_graph)->required();
    simulate->add_option("--instance", s_instance, "hard | <instance file>");
    simulate->add_option("--schedule", s_schedule, "blocks | random | <schedule file>");
    simulate->add_option("--T", s_T)->required();
    simulate->add_option("--delta", s_delta);
    simulate->add_option("--reps", s_reps);
    simulate->add_option("--seed", s_seed);
    simulate->add_option("--M", s_M, "contexts for the hard instance (default K)");
    simulate->add_option("--out", s_out, "CSV output path (default stdout)");

    // run
    std::string r_config;
    auto* run = app.add_subcommand("run", "config-driven experiment");
    run->add_option("--config", r_config, "JSON config path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (quantities->parsed()) return cmd_quantities(q_graph, q_M, q_cap, q_seed);
        if (game1->parsed()) return cmd_game1(g1_graph, g1_M, g1_adv, g1_lrn, g1_seed, g1_out);
        if (game2->parsed()) return cmd_game2(g2_graph, g2_M, g2_adv, g2_lrn, g2_seed, g2_out);
        if (lowerbound->parsed()) return cmd_lowerbound(lb_graph, lb_M, lb_T, lb_seed, lb_out);
        if (simulate->parsed())
            return cmd_simulate(s_algo, s_graph, s_instance, s_schedule, s_T, s_delta, s_reps,
                                s_seed, s_M, s_out);
        if (run->parsed()) {
            ExperimentConfig config = read_experiment_config(r_config);
            if (config.mode == "compare-families") {
                std::cout << compare_graph_families(config);
            } else {
                ExperimentSummary summary = run_experiment(config);
                std::cout << summary.report;
            }
            return 0;
        }
    } catch (const DegenerateInstanceError& e) {
        std::cerr << "degenerate instance: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
