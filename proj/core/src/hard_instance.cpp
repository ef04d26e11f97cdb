#include "gfb/hard_instance.hpp"

#include <algorithm>
#include <cmath>

namespace gfb {

int HardInstanceSpec::total_block_size() const {
    int total = 0;
    for (const auto& j : members) total += static_cast<int>(j.size());
    return total;
}

std::string HardInstanceSpec::summary() const {
    std::string out;
    out += "beta " + std::to_string(beta) + "\n";
    out += "blocks " + std::to_string(blocks()) + "\n";
    out += "delta " + std::to_string(delta_gap) + "\n";
    out += "T " + std::to_string(T) + "\n";
    for (int c = 0; c < blocks(); ++c) {
        out += "J" + std::to_string(c + 1) + " " + block_set(c).to_string() +
               " first " + std::to_string(first_element(c)) +
               " u " + std::to_string(u[static_cast<std::size_t>(c)]) +
               " best " + std::to_string(best_action(c)) +
               " len " + std::to_string(block_len[static_cast<std::size_t>(c)]) + "\n";
    }
    return out;
}

namespace {

// Reduce the beta_M witness tuple to blocks J_1..J_m: drop empty sets, merge
// a singleton into the following set (the singleton becomes the block's
// distinguished first element), drop a trailing singleton.
std::vector<std::vector<int>> reduce_witness(const FeedbackGraph& g,
                                             const std::vector<VertexSet>& witness) {
    std::vector<VertexSet> sets;
    for (VertexSet s : witness)
        if (!s.empty()) sets.push_back(s);

    std::vector<std::vector<int>> blocks;
    std::size_t i = 0;
    while (i < sets.size()) {
        if (sets[i].size() == 1 && i + 1 < sets.size()) {
            int head = sets[i].lowest();
            std::vector<int> block{head};
            for (int v : sets[i + 1]) block.push_back(v);
            blocks.push_back(std::move(block));
            i += 2;
        } else if (sets[i].size() == 1) {
            ++i;  // trailing singleton dropped
        } else {
            blocks.push_back(sets[i].to_vector());
            ++i;
        }
    }

    // construction guarantees, checked rather than re-proved
    VertexSet reached;
    for (const auto& block : blocks) {
        if (block.size() < 2) throw InternalError("hard instance: block of size < 2");
        VertexSet bs = VertexSet::of(block);
        if (bs.intersects(reached))
            throw InternalError("hard instance: blocks not disjoint from earlier reach");
        int head = block[0];
        for (int v : bs)
            for (int w : bs)
                if (v != w && g.has_edge(v, w) && w != head)
                    throw InternalError("hard instance: in-block edge not pointing to the head");
        reached |= g.out_neighbors(bs);
    }
    return blocks;
}

} // namespace

HardInstance build_hard_instance(const FeedbackGraph& g, int M, long long T, Rng& rng,
                                 int beta_cap) {
    if (M < 1) throw InvalidInputError("build_hard_instance: M must be >= 1");
    if (T < 1) throw InvalidInputError("build_hard_instance: T must be >= 1");
    QuantityReport beta = beta_M_exact(g, M, beta_cap);
    if (beta.value < 2)
        throw DegenerateInstanceError(
            "beta_M(G) = " + std::to_string(beta.value) +
            ": degenerate instance, the lower bound is trivial at beta_M < 2");

    HardInstanceSpec spec;
    spec.beta = beta.value;
    spec.T = T;
    spec.members = reduce_witness(g, beta.certificate);
    int m = spec.blocks();
    if (2 * spec.total_block_size() < spec.beta)
        throw InternalError("hard instance: sum of block sizes fell below beta/2");

    for (int c = 0; c < m; ++c)
        spec.u.push_back(1 + rng.uniform_int(spec.block_size(c)));
    spec.delta_gap = std::sqrt(static_cast<double>(spec.beta) / (16.0 * static_cast<double>(T)));

    // |T_c| proportional to K_c, floored, remainder to the last block
    int total_k = spec.total_block_size();
    long long assigned = 0;
    for (int c = 0; c < m; ++c) {
        long long len = T * spec.block_size(c) / total_k;
        spec.block_len.push_back(len);
        assigned += len;
    }
    spec.block_len.back() += T - assigned;

    // means: M contexts even though the schedule only visits the first m
    MeanTable table;
    table.M = M;
    table.K = g.num_vertices();
    table.mu.assign(static_cast<std::size_t>(M) * static_cast<std::size_t>(table.K), 0.0);
    double base = 0.25;
    for (int c = 0; c < m; ++c) {
        for (std::size_t pos = 0; pos < spec.members[static_cast<std::size_t>(c)].size(); ++pos) {
            int a = spec.members[static_cast<std::size_t>(c)][pos];
            double mu = base;
            if (static_cast<int>(pos) + 1 == spec.u[static_cast<std::size_t>(c)] &&
                spec.u[static_cast<std::size_t>(c)] != 1)
                mu = base + 2 * spec.delta_gap;
            else if (pos == 0)
                mu = base + spec.delta_gap;
            table.mu[static_cast<std::size_t>(c * table.K + a)] = mu;
        }
    }

    HardInstance out{spec,
                     BanditInstance(g, std::move(table), RewardFamily::Bernoulli),
                     ContextSchedule::blocks(spec.block_len),
                     {}};
    double beta_cubed = std::pow(static_cast<double>(spec.beta), 3.0);
    if (static_cast<double>(T) < beta_cubed)
        out.warnings.push_back("T = " + std::to_string(T) + " is below beta_M^3 = " +
                               std::to_string(static_cast<long long>(beta_cubed)) +
                               "; the lower-bound regime needs a longer horizon");
    return out;
}

} // namespace gfb
