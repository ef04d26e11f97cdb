#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gfb/bandit.hpp"
#include "gfb/errors.hpp"
#include "gfb/graph_gen.hpp"
#include "gfb/hard_instance.hpp"

using namespace gfb;

namespace {

BanditInstance uniform_instance(FeedbackGraph g, int M, double mu) {
    MeanTable t;
    t.M = M;
    t.K = g.num_vertices();
    t.mu.assign(static_cast<std::size_t>(M * t.K), mu);
    return BanditInstance(std::move(g), std::move(t));
}

} // namespace

TEST_CASE("step: support and zero means") {
    BanditInstance zero = uniform_instance(make_chain(3), 2, 0.0);
    ContextSchedule sched = ContextSchedule::constant(5, 0);
    RewardSampler sampler(3);
    FeedbackRecord rec = step(zero, sched, 1, 0, sampler);
    CHECK(rec.observed == VertexSet::of({0, 1}));
    for (int c = 0; c < 2; ++c)
        for (int a : rec.observed) CHECK(rec.value(c, a) == 0.0);

    CHECK_THROWS_AS(rec.value(0, 2), InvalidInputError);  // 2 is not observed from 0

    BanditInstance complete = uniform_instance(make_complete(4), 3, 0.5);
    rec = step(complete, ContextSchedule::constant(5, 0), 2, 1, sampler);
    CHECK(rec.observed == VertexSet::full(4));
    CHECK(rec.values.size() == 12);  // [M] x [K]

    CHECK_THROWS_AS(step(zero, sched, 0, 0, sampler), InvalidInputError);
    CHECK_THROWS_AS(step(zero, sched, 6, 0, sampler), InvalidInputError);
    CHECK_THROWS_AS(step(zero, sched, 1, 7, sampler), InvalidInputError);
}

TEST_CASE("step is deterministic given the seed, regardless of call order") {
    BanditInstance inst = uniform_instance(make_undirected_cycle(5), 2, 0.4);
    ContextSchedule sched = ContextSchedule::constant(10, 0);
    RewardSampler s1(99), s2(99);
    FeedbackRecord a = step(inst, sched, 7, 2, s1);
    step(inst, sched, 1, 0, s2);  // extra draws must not shift the stream
    FeedbackRecord b = step(inst, sched, 7, 2, s2);
    CHECK(a.values == b.values);
    CHECK(a.observed == b.observed);
}

TEST_CASE("empirical means converge to the table") {
    BanditInstance inst = uniform_instance(make_edgeless(2), 1, 0.3);
    RewardSampler sampler(17);
    long long n = 20000;
    ContextSchedule sched = ContextSchedule::constant(n, 0);
    double sum = 0;
    for (long long t = 1; t <= n; ++t) sum += step(inst, sched, t, 0, sampler).value(0, 0);
    double mean = sum / static_cast<double>(n);
    CHECK(std::abs(mean - 0.3) <= 4.0 * std::sqrt(std::log(static_cast<double>(n)) / n));

    // clipped Gaussian at the symmetric center keeps its mean
    MeanTable t;
    t.M = 1;
    t.K = 1;
    t.mu = {0.5};
    BanditInstance gauss(make_edgeless(1), t, RewardFamily::ClippedGaussian, 0.2);
    sum = 0;
    for (long long tt = 1; tt <= n; ++tt) sum += step(gauss, sched, tt, 0, sampler).value(0, 0);
    mean = sum / static_cast<double>(n);
    CHECK(std::abs(mean - 0.5) <= 4.0 * std::sqrt(std::log(static_cast<double>(n)) / n));
    for (long long tt = 1; tt <= 200; ++tt) {
        double v = step(gauss, sched, tt, 0, sampler).value(0, 0);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("pseudo_regret") {
    MeanTable t;
    t.M = 1;
    t.K = 2;
    t.mu = {1.0, 0.5};
    BanditInstance inst(make_edgeless(2), t);
    ContextSchedule sched = ContextSchedule::constant(10, 0);
    CHECK(pseudo_regret(inst, sched, std::vector<int>(10, 0)) == 0.0);
    CHECK(pseudo_regret(inst, sched, std::vector<int>(10, 1)) == doctest::Approx(5.0));

    // random policy vs an independent summation
    Rng rng(21);
    FeedbackGraph g = erdos_renyi(4, 0.3, rng);
    MeanTable rt;
    rt.M = 3;
    rt.K = 4;
    for (int i = 0; i < 12; ++i) rt.mu.push_back(rng.next_double());
    BanditInstance rinst(g, rt);
    ContextSchedule rsched = ContextSchedule::uniform_random(50, 3, rng);
    std::vector<int> actions;
    for (int i = 0; i < 50; ++i) actions.push_back(rng.uniform_int(4));
    double expect = 0;
    for (int i = 0; i < 50; ++i) {
        int c = rsched.contexts[static_cast<std::size_t>(i)];
        double best = 0;
        for (int a = 0; a < 4; ++a) best = std::max(best, rt.at(c, a));
        expect += best - rt.at(c, actions[static_cast<std::size_t>(i)]);
    }
    CHECK(pseudo_regret(rinst, rsched, actions) == doctest::Approx(expect));
    CHECK(pseudo_regret(rinst, rsched, actions) >= 0.0);
    CHECK_THROWS_AS(pseudo_regret(rinst, rsched, std::vector<int>(3, 0)), InvalidInputError);
}

TEST_CASE("kl_bernoulli") {
    CHECK(kl_bernoulli(0.3, 0.3) == 0.0);
    double direct = 0.25 * std::log(0.25 / 0.45) + 0.75 * std::log(0.75 / 0.55);
    CHECK(kl_bernoulli(0.25, 0.45) == doctest::Approx(direct).epsilon(1e-12));
    for (double delta : {0.01, 0.05, 0.1}) {
        CHECK(kl_bernoulli(0.25, 0.25 + 2 * delta) <= 64.0 * delta * delta / 3.0);
    }
    CHECK_THROWS_AS(kl_bernoulli(0.0, 0.5), DomainError);
    CHECK_THROWS_AS(kl_bernoulli(0.5, 1.0), DomainError);
}

TEST_CASE("validate_self_avoiding") {
    ContextSchedule s;
    s.contexts = {0, 0, 2, 1, 1, 1};  // 1 1 3 2 2 2
    CHECK(validate_self_avoiding(s));
    s.contexts = {0, 1, 1, 2, 0};  // 1 2 2 3 1
    CHECK_FALSE(validate_self_avoiding(s));
    s.contexts = {3, 3, 3};
    CHECK(validate_self_avoiding(s));
    s.contexts = {};
    CHECK(validate_self_avoiding(s));
}

TEST_CASE("schedule and instance files round trip") {
    ContextSchedule s;
    s.contexts = {0, 0, 1, 2};
    std::string text = schedule_to_text(s);
    CHECK(text == "1\n1\n2\n3\n");
    std::istringstream in(text);
    ContextSchedule parsed = parse_schedule(in);
    CHECK(parsed.contexts == s.contexts);
    CHECK(parsed.kind == ScheduleKind::SelfAvoiding);

    MeanTable t;
    t.M = 2;
    t.K = 3;
    t.mu = {0.1, 0.25 + std::sqrt(2.0) / 10, 1.0 / 3.0, 0.0, 1.0, 0.7071067811865476};
    std::string itext = mean_table_to_text(t);
    std::istringstream iin(itext);
    MeanTable back = parse_mean_table(iin);
    CHECK(back.M == 2);
    CHECK(back.K == 3);
    CHECK(back.mu == t.mu);  // bit-exact round trip
    CHECK(mean_table_to_text(back) == itext);

    std::istringstream badhdr("3\n");
    CHECK_THROWS_AS(parse_mean_table(badhdr), InvalidInputError);
    std::istringstream short_rows("2 2\n0.5 0.5\n0.5\n");
    CHECK_THROWS_AS(parse_mean_table(short_rows), InvalidInputError);
}

TEST_CASE("instance and schedule parsers survive mangled input") {
    const char charset[] = "0123456789 \n.-e";
    for (int trial = 0; trial < 300; ++trial) {
        Rng rng(mix64(0xF023, trial));
        std::string text;
        int len = rng.uniform_int(50);
        for (int i = 0; i < len; ++i)
            text += charset[rng.uniform_int(static_cast<int>(sizeof(charset)) - 1)];
        try {
            std::istringstream in(text);
            parse_mean_table(in);
        } catch (const Error&) {
        }
        try {
            std::istringstream in(text);
            parse_schedule(in);
        } catch (const Error&) {
        }
    }
}

TEST_CASE("bandit instance validation") {
    MeanTable t;
    t.M = 1;
    t.K = 2;
    t.mu = {0.5, 1.5};
    CHECK_THROWS_AS(BanditInstance(make_edgeless(2), t), InvalidInputError);
    t.mu = {0.5, 0.6};
    CHECK_THROWS_AS(BanditInstance(make_edgeless(3), t), InvalidInputError);
}

TEST_CASE("build_hard_instance: structure of the construction") {
    for (int trial = 0; trial < 40; ++trial) {
        Rng rng(mix64(211, trial));
        int k = 3 + rng.uniform_int(7);
        FeedbackGraph g = erdos_renyi(k, 0.3, rng);
        int M = 1 + rng.uniform_int(4);
        int beta = beta_M_exact(g, M).value;
        long long T = 5000;
        if (beta < 2) {
            CHECK_THROWS_AS(build_hard_instance(g, M, T, rng), DegenerateInstanceError);
            continue;
        }
        HardInstance hard = build_hard_instance(g, M, T, rng);
        const HardInstanceSpec& spec = hard.spec;

        CHECK(spec.delta_gap == doctest::Approx(std::sqrt(beta / (16.0 * T))));
        CHECK(spec.delta_gap < 0.25);
        CHECK(2 * spec.total_block_size() >= beta);
        CHECK(spec.blocks() <= M);

        long long sum_len = 0;
        VertexSet reached;
        for (int c = 0; c < spec.blocks(); ++c) {
            sum_len += spec.block_len[static_cast<std::size_t>(c)];
            VertexSet block = spec.block_set(c);
            CHECK(spec.block_size(c) >= 2);
            // disjoint from the out-neighborhood of every earlier block
            CHECK_FALSE(block.intersects(reached));
            reached |= g.out_neighbors(block);
            // in-block edges may point only to the head
            for (int v : block)
                for (int w : block)
                    if (v != w && w != spec.first_element(c)) CHECK_FALSE(g.has_edge(v, w));
        }
        CHECK(sum_len == T);
        CHECK(hard.schedule.horizon() == T);
        CHECK(validate_self_avoiding(hard.schedule));

        // mean display: best arm unique with margin Delta inside the block,
        // outsiders at least 1/4 behind
        for (int c = 0; c < spec.blocks(); ++c) {
            int best = spec.best_action(c);
            CHECK(hard.instance.best_action(c) == best);
            for (int a = 0; a < k; ++a) {
                if (a == best) continue;
                double gap = hard.instance.gap(c, a);
                if (spec.block_set(c).contains(a))
                    CHECK(gap >= spec.delta_gap - 1e-12);
                else
                    CHECK(gap >= 0.25 - 1e-12);
            }
        }
        // contexts beyond the blocks carry zero means
        for (int c = spec.blocks(); c < M; ++c)
            for (int a = 0; a < k; ++a) CHECK(hard.instance.mean(c, a) == 0.0);
    }
}

TEST_CASE("build_hard_instance: degenerate and short-horizon handling") {
    Rng rng(5);
    CHECK_THROWS_AS(build_hard_instance(make_complete(4), 1, 1000, rng),
                    DegenerateInstanceError);
    HardInstance hard = build_hard_instance(make_edgeless(4), 1, 10, rng);
    CHECK_FALSE(hard.warnings.empty());  // T below beta^3
    HardInstance long_run = build_hard_instance(make_edgeless(4), 1, 100, rng);
    CHECK(long_run.warnings.empty());
}

TEST_CASE("hard instance singleton merging") {
    // transitive chain: alpha = 1, beta_2 = 2 via {v},{w}; the two singleton
    // witness sets must merge into one block of size 2
    FeedbackGraph tc = transitive_closure(make_chain(4));
    Rng rng(9);
    int beta = beta_M_exact(tc, 2).value;
    CHECK(beta == 2);
    HardInstance hard = build_hard_instance(tc, 2, 1000, rng);
    CHECK(hard.spec.blocks() == 1);
    CHECK(hard.spec.block_size(0) == 2);
}
