#include "gfb/bandit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gfb/errors.hpp"

namespace gfb {

namespace {

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

} // namespace

MeanTable parse_mean_table(std::istream& in) {
    MeanTable t;
    if (!(in >> t.M >> t.K))
        throw InvalidInputError("instance file must start with 'M K'");
    if (t.M < 1 || t.K < 1) throw InvalidInputError("instance dimensions must be positive");
    if (t.K > FeedbackGraph::kMaxVertices)
        throw InvalidInputError("instance K exceeds the " +
                                std::to_string(FeedbackGraph::kMaxVertices) + "-vertex ceiling");
    if (t.M > 100000) throw InvalidInputError("instance M is implausibly large");
    t.mu.resize(static_cast<std::size_t>(t.M) * static_cast<std::size_t>(t.K));
    for (auto& m : t.mu)
        if (!(in >> m)) throw InvalidInputError("instance file ended before M*K means were read");
    return t;
}

MeanTable read_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInputError("cannot open instance file: " + path);
    return parse_mean_table(in);
}

std::string mean_table_to_text(const MeanTable& t) {
    std::string out = std::to_string(t.M) + " " + std::to_string(t.K) + "\n";
    for (int c = 0; c < t.M; ++c) {
        for (int a = 0; a < t.K; ++a) {
            if (a) out += ' ';
            out += format_double(t.at(c, a));
        }
        out += '\n';
    }
    return out;
}

void write_instance_file(const MeanTable& t, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvalidInputError("cannot open for writing: " + path);
    out << mean_table_to_text(t);
}

BanditInstance::BanditInstance(FeedbackGraph graph, MeanTable means, RewardFamily family,
                               double gaussian_sd)
    : graph_(std::move(graph)), means_(std::move(means)), family_(family), sd_(gaussian_sd) {
    if (means_.K != graph_.num_vertices())
        throw InvalidInputError("mean table has K=" + std::to_string(means_.K) +
                                " but the graph has " + std::to_string(graph_.num_vertices()) +
                                " vertices");
    if (static_cast<int>(means_.mu.size()) != means_.M * means_.K)
        throw InvalidInputError("mean table size does not match M*K");
    for (double m : means_.mu)
        if (!(m >= 0.0 && m <= 1.0))
            throw InvalidInputError("means must lie in [0,1]");
    best_mean_.resize(static_cast<std::size_t>(means_.M));
    best_action_.resize(static_cast<std::size_t>(means_.M));
    for (int c = 0; c < means_.M; ++c) {
        int arg = 0;
        double best = means_.at(c, 0);
        for (int a = 1; a < means_.K; ++a)
            if (means_.at(c, a) > best) {
                best = means_.at(c, a);
                arg = a;
            }
        best_mean_[static_cast<std::size_t>(c)] = best;
        best_action_[static_cast<std::size_t>(c)] = arg;
    }
}

ContextSchedule ContextSchedule::blocks(const std::vector<long long>& lens) {
    ContextSchedule s;
    s.kind = ScheduleKind::SelfAvoiding;
    for (std::size_t c = 0; c < lens.size(); ++c)
        for (long long i = 0; i < lens[c]; ++i) s.contexts.push_back(static_cast<int>(c));
    return s;
}

ContextSchedule ContextSchedule::uniform_random(long long T, int M, Rng& rng) {
    ContextSchedule s;
    s.kind = ScheduleKind::General;
    s.contexts.reserve(static_cast<std::size_t>(T));
    for (long long t = 0; t < T; ++t) s.contexts.push_back(rng.uniform_int(M));
    return s;
}

ContextSchedule ContextSchedule::constant(long long T, int c) {
    ContextSchedule s;
    s.kind = ScheduleKind::SelfAvoiding;
    s.contexts.assign(static_cast<std::size_t>(T), c);
    return s;
}

bool validate_self_avoiding(const ContextSchedule& schedule) {
    std::vector<int> seen;
    int prev = -1;
    for (int c : schedule.contexts) {
        if (c != prev) {
            if (std::find(seen.begin(), seen.end(), c) != seen.end()) return false;
            seen.push_back(c);
            prev = c;
        }
    }
    return true;
}

ContextSchedule parse_schedule(std::istream& in) {
    ContextSchedule s;
    int c;
    while (in >> c) {
        if (c < 1) throw InvalidInputError("schedule contexts are 1-indexed");
        s.contexts.push_back(c - 1);
    }
    s.kind = validate_self_avoiding(s) ? ScheduleKind::SelfAvoiding : ScheduleKind::General;
    return s;
}

ContextSchedule read_schedule_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInputError("cannot open schedule file: " + path);
    return parse_schedule(in);
}

std::string schedule_to_text(const ContextSchedule& s) {
    std::string out;
    for (int c : s.contexts) {
        out += std::to_string(c + 1);
        out += '\n';
    }
    return out;
}

void write_schedule_file(const ContextSchedule& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvalidInputError("cannot open for writing: " + path);
    out << schedule_to_text(s);
}

double FeedbackRecord::value(int c, int a) const {
    if (!observed.contains(a))
        throw InvalidInputError("action " + std::to_string(a) + " was not observed at round " +
                                std::to_string(t));
    int pos = 0;
    for (int w : observed) {
        if (w == a) break;
        ++pos;
    }
    return values[static_cast<std::size_t>(c * observed.size() + pos)];
}

FeedbackRecord step(const BanditInstance& instance, const ContextSchedule& schedule, long long t,
                    int action, const RewardSampler& sampler) {
    if (t < 1 || t > schedule.horizon())
        throw InvalidInputError("round " + std::to_string(t) + " outside 1..T");
    instance.graph().check_vertex(action);
    FeedbackRecord rec;
    rec.t = t;
    rec.action = action;
    rec.observed = instance.graph().out(action);
    rec.values.reserve(static_cast<std::size_t>(instance.contexts() * rec.observed.size()));
    for (int c = 0; c < instance.contexts(); ++c) {
        for (int a : rec.observed) {
            double mu = instance.mean(c, a);
            double r;
            if (instance.family() == RewardFamily::Bernoulli) {
                r = sampler.bernoulli(t, c, a, mu);
            } else {
                r = mu + instance.gaussian_sd() * sampler.normal(t, c, a);
                r = std::clamp(r, 0.0, 1.0);
            }
            rec.values.push_back(r);
        }
    }
    return rec;
}

double pseudo_regret(const BanditInstance& instance, const ContextSchedule& schedule,
                     const std::vector<int>& actions) {
    if (static_cast<long long>(actions.size()) != schedule.horizon())
        throw InvalidInputError("action sequence length differs from the schedule horizon");
    double total = 0;
    for (long long t = 1; t <= schedule.horizon(); ++t) {
        int c = schedule.at(t);
        total += instance.best_mean(c) - instance.mean(c, actions[static_cast<std::size_t>(t - 1)]);
    }
    return total;
}

double kl_bernoulli(double p, double q) {
    if (!(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0))
        throw DomainError("kl_bernoulli requires p, q in the open interval (0,1)");
    return p * std::log(p / q) + (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
}

} // namespace gfb
