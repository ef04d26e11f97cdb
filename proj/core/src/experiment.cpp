#include "gfb/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "gfb/errors.hpp"
#include "gfb/quantities.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace gfb {

namespace {

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

int worker_count() {
    if (const char* env = std::getenv("GFB_WORKERS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Run fn(i) for i in [0, n) on the worker pool; outputs must be indexed, not
// appended, so the result is identical for any worker count.
void parallel_for(int n, const std::function<void(int)>& fn) {
    int workers = std::min(worker_count(), std::max(1, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            while (true) {
                int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace

FeedbackGraph GraphSource::build() const {
    if (!file.empty()) return read_graph_file(file);
    Rng rng(mix64(seed, hash_str("graph-gen")));
    if (generator == "erdos-renyi") return erdos_renyi(K, p, rng);
    if (generator == "grid") return make_grid(rows, cols).graph;
    if (generator == "chain") return make_chain(K);
    if (generator == "complete") return make_complete(K);
    if (generator == "edgeless") return make_edgeless(K);
    if (generator == "random-transitive-closure") return random_transitive_closure(K, p, rng);
    throw ValidationError("unknown graph generator: " + generator);
}

std::optional<GridGraph> GraphSource::build_grid() const {
    if (generator == "grid") return make_grid(rows, cols);
    return std::nullopt;
}

namespace {

void require(bool ok, std::vector<std::string>& bad, const std::string& field) {
    if (!ok) bad.push_back(field);
}

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig c;
    std::vector<std::string> bad;
    try {
        if (j.contains("schema_version")) c.schema_version = j.at("schema_version").get<int>();
        require(c.schema_version == 1, bad, "schema_version (must be 1)");
        if (j.contains("name")) c.name = j.at("name").get<std::string>();
        if (j.contains("mode")) c.mode = j.at("mode").get<std::string>();
        require(c.mode == "sweep" || c.mode == "compare-families", bad,
                "mode (sweep | compare-families)");
        if (j.contains("graph")) {
            const json& gj = j.at("graph");
            if (gj.contains("file")) c.graph.file = gj.at("file").get<std::string>();
            if (gj.contains("generator")) c.graph.generator = gj.at("generator").get<std::string>();
            if (gj.contains("K")) c.graph.K = gj.at("K").get<int>();
            if (gj.contains("rows")) c.graph.rows = gj.at("rows").get<int>();
            if (gj.contains("cols")) c.graph.cols = gj.at("cols").get<int>();
            if (gj.contains("p")) c.graph.p = gj.at("p").get<double>();
            if (gj.contains("seed")) c.graph.seed = gj.at("seed").get<std::uint64_t>();
        }
        bool has_file = !c.graph.file.empty();
        bool has_gen = !c.graph.generator.empty();
        require(has_file != has_gen, bad, "graph (exactly one of file/generator)");
        if (has_gen) {
            static const char* known[] = {"erdos-renyi", "grid",     "chain",
                                          "complete",    "edgeless", "random-transitive-closure"};
            bool ok = false;
            for (const char* k : known) ok = ok || c.graph.generator == k;
            require(ok, bad, "graph.generator (unknown name)");
            if (c.graph.generator == "grid") {
                require(c.graph.rows >= 1 && c.graph.cols >= 1, bad, "graph.rows/cols");
            } else {
                require(c.graph.K >= 1, bad, "graph.K");
            }
            if (c.graph.generator == "erdos-renyi" ||
                c.graph.generator == "random-transitive-closure")
                require(c.graph.p >= 0.0 && c.graph.p <= 1.0, bad, "graph.p (must be in [0,1])");
        }
        if (j.contains("M")) c.M = j.at("M").get<int>();
        require(c.M >= 1, bad, "M (must be >= 1)");
        if (j.contains("horizons")) c.horizons = j.at("horizons").get<std::vector<long long>>();
        require(!c.horizons.empty(), bad, "horizons (must be non-empty)");
        for (long long T : c.horizons) require(T >= 1, bad, "horizons (all must be positive)");
        if (j.contains("algorithms"))
            c.algorithms = j.at("algorithms").get<std::vector<std::string>>();
        require(!c.algorithms.empty(), bad, "algorithms (must be non-empty)");
        for (const std::string& a : c.algorithms)
            require(a == "alg1" || a == "alg2" || a == "baseline", bad,
                    "algorithms (alg1 | alg2 | baseline)");
        if (j.contains("delta")) c.delta = j.at("delta").get<double>();
        require(c.delta > 0.0 && c.delta < 1.0, bad, "delta (must be in (0,1))");
        if (j.contains("replications")) c.replications = j.at("replications").get<int>();
        require(c.replications >= 1, bad, "replications (must be >= 1)");
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
        require(!c.out_dir.empty(), bad, "out_dir");
        if (j.contains("instance")) c.instance = j.at("instance").get<std::string>();
        if (j.contains("schedule")) c.schedule = j.at("schedule").get<std::string>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config JSON error: ") + e.what());
    }
    if (!bad.empty()) {
        std::string msg = "invalid config fields:";
        for (const std::string& f : bad) msg += " " + f + ";";
        throw ValidationError(msg);
    }
    return c;
}

} // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json(j);
}

ExperimentConfig read_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInputError("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_experiment_config(text);
}

std::string experiment_config_to_json(const ExperimentConfig& c) {
    json gj;
    if (!c.graph.file.empty()) {
        gj["file"] = c.graph.file;
    } else {
        gj["generator"] = c.graph.generator;
        if (c.graph.generator == "grid") {
            gj["rows"] = c.graph.rows;
            gj["cols"] = c.graph.cols;
        } else {
            gj["K"] = c.graph.K;
        }
        if (c.graph.generator == "erdos-renyi" ||
            c.graph.generator == "random-transitive-closure") {
            gj["p"] = c.graph.p;
            gj["seed"] = c.graph.seed;
        }
    }
    json j{{"schema_version", c.schema_version},
           {"name", c.name},
           {"mode", c.mode},
           {"graph", gj},
           {"M", c.M},
           {"horizons", c.horizons},
           {"algorithms", c.algorithms},
           {"delta", c.delta},
           {"replications", c.replications},
           {"seed", c.seed},
           {"out_dir", c.out_dir},
           {"instance", c.instance},
           {"schedule", c.schedule}};
    return j.dump(2);
}

std::uint64_t cell_seed(std::uint64_t base, const std::string& algorithm, long long T, int rep) {
    return base ^ mix64(hash_str(algorithm.c_str()), static_cast<std::uint64_t>(T),
                        static_cast<std::uint64_t>(rep));
}

std::string traces_to_csv(const std::vector<RegretTrace>& traces) {
    std::string out = "rep,t,context,action,reward,inst_regret,cum_regret\n";
    for (const RegretTrace& tr : traces)
        for (const TraceRow& r : tr.rows) {
            out += std::to_string(tr.replication);
            out += ',';
            out += std::to_string(r.t);
            out += ',';
            out += std::to_string(r.context + 1);
            out += ',';
            out += std::to_string(r.action);
            out += ',';
            out += format_double(r.reward);
            out += ',';
            out += format_double(r.inst_regret);
            out += ',';
            out += format_double(r.cum_regret);
            out += '\n';
        }
    return out;
}

void write_text_file_atomic(const std::string& path, const std::string& content) {
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InvalidInputError("cannot open for writing: " + tmp.string());
        out << content;
    }
    fs::rename(tmp, target);
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw InvalidInputError("quantile of an empty sample");
    if (sorted.size() == 1) return sorted[0];
    double pos = p * static_cast<double>(sorted.size() - 1);
    auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

namespace {

struct CellTask {
    std::string algorithm;
    long long T;
    int rep;
};

RegretTrace run_cell(const ExperimentConfig& config, const FeedbackGraph& graph,
                     const std::optional<GridGraph>& grid, const CellTask& cell) {
    std::uint64_t cs = cell_seed(config.seed, cell.algorithm, cell.T, cell.rep);

    // instance + schedule
    std::optional<BanditInstance> instance;
    std::optional<ContextSchedule> schedule;
    if (config.instance == "hard") {
        Rng inst_rng(mix64(cs, hash_str("instance")));
        HardInstance hard = build_hard_instance(graph, config.M, cell.T, inst_rng);
        instance.emplace(std::move(hard.instance));
        if (config.schedule == "blocks")
            schedule = std::move(hard.schedule);
    } else {
        MeanTable table = read_instance_file(config.instance);
        if (table.M != config.M)
            throw ValidationError("instance file M=" + std::to_string(table.M) +
                                  " does not match config M=" + std::to_string(config.M));
        instance.emplace(graph, std::move(table));
        if (config.schedule == "blocks")
            throw ValidationError("schedule 'blocks' requires instance 'hard'");
    }
    if (!schedule) {
        if (config.schedule == "random") {
            Rng sched_rng(mix64(cs, hash_str("schedule")));
            schedule = ContextSchedule::uniform_random(cell.T, config.M, sched_rng);
        } else if (config.schedule != "blocks") {
            schedule = read_schedule_file(config.schedule);
            if (schedule->horizon() != cell.T)
                throw ValidationError("schedule file horizon does not match T=" +
                                      std::to_string(cell.T));
        }
    }

    PolicyConfig pc;
    pc.T = schedule->horizon();
    pc.delta = config.delta;
    std::uint64_t run_seed = mix64(cs, hash_str("policy"));
    RegretTrace trace;
    if (cell.algorithm == "alg1")
        trace = alg1_run(*instance, *schedule, pc, run_seed);
    else if (cell.algorithm == "alg2")
        trace = alg2_run(*instance, *schedule, pc, run_seed, nullptr,
                         grid ? &*grid : nullptr);
    else
        trace = baseline_no_crosslearn(*instance, *schedule, pc, run_seed);
    trace.replication = cell.rep;
    return trace;
}

std::string aggregate_to_csv(const std::vector<AggregateRow>& rows) {
    std::string out = "algorithm,T,replications,mean,median,q05,q95\n";
    for (const AggregateRow& r : rows) {
        out += r.algorithm + "," + std::to_string(r.T) + "," + std::to_string(r.replications) +
               "," + format_double(r.mean) + "," + format_double(r.median) + "," +
               format_double(r.q05) + "," + format_double(r.q95) + "\n";
    }
    return out;
}

} // namespace

ExperimentSummary run_experiment(const ExperimentConfig& config) {
    FeedbackGraph graph = config.graph.build();
    std::optional<GridGraph> grid = config.graph.build_grid();

    std::vector<CellTask> cells;
    for (const std::string& algo : config.algorithms)
        for (long long T : config.horizons)
            for (int rep = 0; rep < config.replications; ++rep)
                cells.push_back({algo, T, rep});

    std::vector<double> final_regret(cells.size(), 0.0);
    fs::path out_dir(config.out_dir);
    fs::create_directories(out_dir / "traces");

    parallel_for(static_cast<int>(cells.size()), [&](int i) {
        const CellTask& cell = cells[static_cast<std::size_t>(i)];
        RegretTrace trace = run_cell(config, graph, grid, cell);
        final_regret[static_cast<std::size_t>(i)] = trace.final_regret();
        std::string name = cell.algorithm + "_T" + std::to_string(cell.T) + "_rep" +
                           std::to_string(cell.rep) + ".csv";
        write_text_file_atomic((out_dir / "traces" / name).string(), traces_to_csv({trace}));
    });

    ExperimentSummary summary;
    std::size_t i = 0;
    for (const std::string& algo : config.algorithms)
        for (long long T : config.horizons) {
            std::vector<double> finals;
            for (int rep = 0; rep < config.replications; ++rep)
                finals.push_back(final_regret[i++]);
            std::vector<double> sorted = finals;
            std::sort(sorted.begin(), sorted.end());
            double mean = 0;
            for (double f : finals) mean += f;
            mean /= static_cast<double>(finals.size());
            summary.rows.push_back({algo, T, config.replications, mean,
                                    quantile_sorted(sorted, 0.5), quantile_sorted(sorted, 0.05),
                                    quantile_sorted(sorted, 0.95)});
        }

    // report: the aggregate plus scaling fits against beta_M and beta_dom
    std::string report = "experiment " + config.name + "\n";
    report += "graph K=" + std::to_string(graph.num_vertices()) +
              " edges=" + std::to_string(graph.num_edges()) + " M=" + std::to_string(config.M) +
              "\n\n";
    std::optional<int> beta, beta_dom_v;
    if (graph.num_vertices() <= 14) {
        beta = beta_M_exact(graph, config.M).value;
        report += "beta_M = " + std::to_string(*beta) + "\n";
    }
    if (graph.num_vertices() <= 10) {
        beta_dom_v = beta_dom_exact(graph, config.M).value;
        report += "beta_dom = " + std::to_string(*beta_dom_v) + "\n";
    }
    for (const std::string& algo : config.algorithms) {
        std::vector<std::pair<double, double>> pts_beta, pts_dom;
        for (const AggregateRow& r : summary.rows)
            if (r.algorithm == algo) {
                if (beta) pts_beta.emplace_back(static_cast<double>(*beta * r.T), r.mean);
                if (beta_dom_v) pts_dom.emplace_back(static_cast<double>(*beta_dom_v * r.T), r.mean);
            }
        if (beta && pts_beta.size() >= 3) {
            ScalingFit fit = scaling_fit(pts_beta);
            report += algo + " fit regret ~ c sqrt(beta_M T): c=" + format_double(fit.c) +
                      " R2=" + format_double(fit.r_squared) +
                      (fit.near_zero_slope ? " [near-zero slope]" : "") + "\n";
        }
        if (beta_dom_v && pts_dom.size() >= 3) {
            ScalingFit fit = scaling_fit(pts_dom);
            report += algo + " fit regret ~ c sqrt(beta_dom T): c=" + format_double(fit.c) +
                      " R2=" + format_double(fit.r_squared) +
                      (fit.near_zero_slope ? " [near-zero slope]" : "") + "\n";
        }
    }
    report += "\n" + aggregate_to_csv(summary.rows);
    summary.report = report;

    write_text_file_atomic((out_dir / "aggregate.csv").string(), aggregate_to_csv(summary.rows));
    write_text_file_atomic((out_dir / "report.txt").string(), report);
    return summary;
}

ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3)
        throw InvalidInputError("scaling_fit needs at least three horizon points");
    ScalingFit fit;
    double sxy = 0, sxx = 0;
    for (auto [qt, y] : points) {
        double x = std::sqrt(qt);
        sxy += x * y;
        sxx += x * x;
    }
    fit.c = sxx > 0 ? sxy / sxx : 0.0;
    double mean_y = 0;
    for (auto [qt, y] : points) mean_y += y;
    mean_y /= static_cast<double>(points.size());
    double ss_res = 0, ss_tot = 0;
    for (auto [qt, y] : points) {
        double pred = fit.c * std::sqrt(qt);
        fit.residuals.push_back(y - pred);
        ss_res += (y - pred) * (y - pred);
        ss_tot += (y - mean_y) * (y - mean_y);
    }
    fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : (ss_res == 0 ? 1.0 : 0.0);
    // secondary regression with intercept, to flag regret flat in T
    double mx = 0;
    for (auto [qt, y] : points) mx += std::sqrt(qt);
    mx /= static_cast<double>(points.size());
    double num = 0, den = 0;
    for (auto [qt, y] : points) {
        double x = std::sqrt(qt);
        num += (x - mx) * (y - mean_y);
        den += (x - mx) * (x - mx);
    }
    fit.slope = den > 0 ? num / den : 0.0;
    fit.near_zero_slope = std::abs(fit.slope) <= 1e-9 * std::max(1.0, std::abs(mean_y));
    return fit;
}

std::string compare_graph_families(const ExperimentConfig& config) {
    int K = config.graph.K > 0 ? config.graph.K : 6;
    FeedbackGraph directed = transitive_closure(make_chain(K));
    FeedbackGraph undirected = symmetrize(directed);

    std::string report = "graph-family comparison, K=" + std::to_string(K) + "\n";
    auto profile = [&report](const FeedbackGraph& g, const std::string& name, int M_max) {
        std::vector<int> prof = beta_M_profile(g, M_max);
        report += name + " beta_M profile:";
        for (int b : prof) report += " " + std::to_string(b);
        report += " (alpha=" + std::to_string(independence_number_exact(g).value) +
                  ", m=" + std::to_string(mas_number_exact(g).value) + ")\n";
        return prof;
    };
    int M_max = std::max(config.M, 1);
    profile(directed, "directed", std::max(M_max, K));
    std::vector<int> undirected_profile = profile(undirected, "undirected", std::max(M_max, K));
    int alpha_und = independence_number_exact(undirected).value;
    for (int b : undirected_profile)
        if (b != alpha_und)
            throw InternalError("undirected family must have beta_M = alpha for all M");

    // matched design: the same random mean table on both graphs, so the
    // regret difference comes from the feedback structure alone
    auto run_family = [&](const FeedbackGraph& g, const std::string& name) {
        int beta = beta_M_exact(g, config.M).value;
        int mas = mas_number_exact(g).value;
        report += "\n" + name + ": beta_M=" + std::to_string(beta) + " m=" + std::to_string(mas) +
                  "\n";
        for (long long T : config.horizons) {
            double mean = 0;
            for (int rep = 0; rep < config.replications; ++rep) {
                std::uint64_t cs = cell_seed(config.seed, "compare/alg2", T, rep);
                Rng mean_rng(mix64(cs, hash_str("means")));
                MeanTable table;
                table.M = config.M;
                table.K = K;
                for (int i = 0; i < config.M * K; ++i) table.mu.push_back(mean_rng.next_double());
                BanditInstance instance(g, std::move(table));
                Rng sched_rng(mix64(cs, hash_str("schedule")));
                ContextSchedule schedule =
                    ContextSchedule::uniform_random(T, config.M, sched_rng);
                PolicyConfig pc;
                pc.T = T;
                pc.delta = config.delta;
                RegretTrace trace =
                    alg2_run(instance, schedule, pc, mix64(cs, hash_str("policy")));
                mean += trace.final_regret();
            }
            mean /= static_cast<double>(config.replications);
            double per_beta = mean / std::sqrt(static_cast<double>(beta * T));
            double per_mas = mean / std::sqrt(static_cast<double>(mas * T));
            report += "  T=" + std::to_string(T) + " mean_regret=" + format_double(mean) +
                      " regret/sqrt(beta_M T)=" + format_double(per_beta) +
                      " regret/sqrt(m T)=" + format_double(per_mas) + "\n";
        }
    };
    run_family(directed, "directed");
    run_family(undirected, "undirected");

    fs::create_directories(config.out_dir);
    write_text_file_atomic((fs::path(config.out_dir) / "report.txt").string(), report);
    return report;
}

} // namespace gfb
