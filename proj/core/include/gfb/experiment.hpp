#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gfb/bandit.hpp"
#include "gfb/elimination.hpp"
#include "gfb/feedback_graph.hpp"
#include "gfb/graph_gen.hpp"
#include "gfb/hard_instance.hpp"

namespace gfb {

// Graph source: a file path or a named generator.
struct GraphSource {
    std::string file;       // exclusive with generator
    std::string generator;  // erdos-renyi | grid | chain | complete | edgeless |
                            // random-transitive-closure
    int K = 0;              // vertex count (non-grid generators)
    int rows = 0, cols = 0; // grid
    double p = 0.3;         // edge probability
    std::uint64_t seed = 0; // generator randomness

    FeedbackGraph build() const;
    std::optional<GridGraph> build_grid() const;  // set when generator == "grid"
};

struct ExperimentConfig {
    int schema_version = 1;
    std::string name = "experiment";
    std::string mode = "sweep";  // sweep | compare-families
    GraphSource graph;
    int M = 1;
    std::vector<long long> horizons;
    std::vector<std::string> algorithms;  // alg1 | alg2 | baseline
    double delta = 0.05;
    int replications = 1;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    std::string instance = "hard";   // "hard" or an instance-file path
    std::string schedule = "blocks"; // blocks | random | a schedule-file path
};

// Throws ValidationError listing every offending field.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig read_experiment_config(const std::string& path);
std::string experiment_config_to_json(const ExperimentConfig& config);

// Seed for one (algorithm, T, replication) cell; adding algorithms or
// horizons never perturbs existing cells.
std::uint64_t cell_seed(std::uint64_t base, const std::string& algorithm, long long T, int rep);

struct AggregateRow {
    std::string algorithm;
    long long T = 0;
    int replications = 0;
    double mean = 0, median = 0, q05 = 0, q95 = 0;
};

struct ExperimentSummary {
    std::vector<AggregateRow> rows;
    std::string report;  // contents of report.txt
};

// Runs every (algorithm, horizon, replication) cell, writes
// <out>/traces/<cell>.csv per cell plus <out>/aggregate.csv and
// <out>/report.txt, and returns the aggregate. Workers from GFB_WORKERS.
ExperimentSummary run_experiment(const ExperimentConfig& config);

struct ScalingFit {
    double c = 0;          // least squares for regret = c * sqrt(q * T)
    double r_squared = 0;
    double slope = 0;      // regret vs sqrt(qT) with intercept, for flagging
    bool near_zero_slope = false;
    std::vector<double> residuals;
};

// Points are (q*T, mean final regret); needs at least three of them.
ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& points);

// Matched directed family (transitive closure of a chain) against its
// undirected symmetrization: beta_M profiles, alg2 regret, and the regret
// normalized by sqrt(beta_M T) and sqrt(m T). Writes report files under
// config.out_dir and returns the report text.
std::string compare_graph_families(const ExperimentConfig& config);

// CSV plumbing shared with the CLI. Columns are frozen:
// rep,t,context,action,reward,inst_regret,cum_regret (context 1-based,
// action 0-based).
std::string traces_to_csv(const std::vector<RegretTrace>& traces);
void write_text_file_atomic(const std::string& path, const std::string& content);

// Interpolated quantile of a sorted sample (the linear "type 7" rule).
double quantile_sorted(const std::vector<double>& sorted, double p);

} // namespace gfb
