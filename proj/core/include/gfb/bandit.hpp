#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gfb/feedback_graph.hpp"
#include "gfb/rng.hpp"
#include "gfb/vertex_set.hpp"

namespace gfb {

enum class RewardFamily { Bernoulli, ClippedGaussian };

// Mean table of a stochastic instance, the part that lives in instance files.
struct MeanTable {
    int M = 0;
    int K = 0;
    std::vector<double> mu;  // row-major, mu[c*K + a]

    double at(int c, int a) const { return mu[static_cast<std::size_t>(c * K + a)]; }
};

// Instance file: header "M K", then M lines of K space-separated means.
// Means are serialized in shortest round-trip form, so write/read is exact.
MeanTable parse_mean_table(std::istream& in);
MeanTable read_instance_file(const std::string& path);
std::string mean_table_to_text(const MeanTable& t);
void write_instance_file(const MeanTable& t, const std::string& path);

// Stochastic contextual bandit environment with graph feedback across
// actions and complete cross-learning across contexts. Immutable.
class BanditInstance {
public:
    BanditInstance(FeedbackGraph graph, MeanTable means,
                   RewardFamily family = RewardFamily::Bernoulli, double gaussian_sd = 0.1);

    const FeedbackGraph& graph() const { return graph_; }
    int contexts() const { return means_.M; }
    int actions() const { return means_.K; }
    const MeanTable& means() const { return means_; }
    double mean(int c, int a) const { return means_.at(c, a); }
    double best_mean(int c) const { return best_mean_[static_cast<std::size_t>(c)]; }
    int best_action(int c) const { return best_action_[static_cast<std::size_t>(c)]; }
    double gap(int c, int a) const { return best_mean(c) - mean(c, a); }
    RewardFamily family() const { return family_; }
    double gaussian_sd() const { return sd_; }

private:
    FeedbackGraph graph_;
    MeanTable means_;
    RewardFamily family_;
    double sd_;
    std::vector<double> best_mean_;
    std::vector<int> best_action_;
};

enum class ScheduleKind { SelfAvoiding, General };

// The adversary's context choices for a whole run, 0-based internally
// (files are 1-based).
struct ContextSchedule {
    std::vector<int> contexts;
    ScheduleKind kind = ScheduleKind::General;

    long long horizon() const { return static_cast<long long>(contexts.size()); }
    int at(long long t) const { return contexts[static_cast<std::size_t>(t - 1)]; }  // t is 1-based

    // Context c repeated lens[c] times, in order; self-avoiding by shape.
    static ContextSchedule blocks(const std::vector<long long>& lens);
    static ContextSchedule uniform_random(long long T, int M, Rng& rng);
    static ContextSchedule constant(long long T, int c);
};

// True iff no context recurs after an intervening different context.
bool validate_self_avoiding(const ContextSchedule& schedule);

ContextSchedule parse_schedule(std::istream& in);
ContextSchedule read_schedule_file(const std::string& path);
std::string schedule_to_text(const ContextSchedule& s);
void write_schedule_file(const ContextSchedule& s, const std::string& path);

// One round of feedback: everything at (c, a) for c in [M], a in N_out(a_t).
struct FeedbackRecord {
    long long t = 0;
    int action = -1;
    VertexSet observed;          // N_out(action)
    std::vector<double> values;  // contexts major, observed actions ascending

    double value(int c, int a) const;
    bool has(int a) const { return observed.contains(a); }
};

// Sample the observable support for round t. Rewards are a pure function of
// (sampler seed, t, c, a); nothing outside the support is ever drawn.
FeedbackRecord step(const BanditInstance& instance, const ContextSchedule& schedule, long long t,
                    int action, const RewardSampler& sampler);

// Sum over rounds of (best mean under c_t) - (mean of the played action).
double pseudo_regret(const BanditInstance& instance, const ContextSchedule& schedule,
                     const std::vector<int>& actions);

// KL divergence between Bernoulli(p) and Bernoulli(q); p, q in (0, 1).
double kl_bernoulli(double p, double q);

} // namespace gfb
