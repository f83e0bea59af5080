#pragma once
#include <iosfwd>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "qrl/maze.hpp"
#include "qrl/rng.hpp"

namespace qrl {

// Projective-simulation agent. Policy is h-proportional; the update first
// refreshes glow (used edges to 1, the rest decaying by 1-eta), then damps
// every h toward 1 by gamma and adds glow-weighted reward:
//   h <- h - gamma*(h - 1) + g*reward.
// Rows are created lazily at h = 1, g = 0, so untouched percepts act uniform.
class PSAgent {
public:
    PSAgent(int action_count, double gamma, double eta);

    double gamma() const { return gamma_; }
    double eta() const { return eta_; }
    int action_count() const { return action_count_; }

    // P(a|s); uniform for percepts never updated
    std::vector<double> policy(int percept) const;

    // sample from policy; agent state unchanged
    int act(int percept, Rng& rng) const;

    // one learning step for a full epoch trace of (percept, action) pairs
    void update(std::span<const std::pair<int, int>> trace, int reward);

    double h_value(int percept, int action) const;
    double glow_value(int percept, int action) const;
    size_t known_percepts() const { return rows_.size(); }

    void save(std::ostream& os) const;
    static PSAgent load(std::istream& is);

private:
    struct Row {
        std::vector<double> h;
        std::vector<double> g;
    };
    Row& row(int percept);

    int action_count_;
    double gamma_;
    double eta_;
    std::map<int, Row> rows_;
};

// Deep independent copy; mutating the clone never touches the original.
inline PSAgent clone_agent(const PSAgent& agent) { return agent; }

struct RandomAgent {
    int action_count;
    std::vector<double> policy(int) const {
        return std::vector<double>(static_cast<size_t>(action_count), 1.0 / action_count);
    }
    int act(int, Rng& rng) const { return static_cast<int>(rng.uniform_int(static_cast<uint64_t>(action_count))); }
};

struct EpochRecord {
    std::vector<std::pair<int, int>> trace; // (percept before action, action)
    std::vector<int> response_percepts;     // environment responses
    int reward = 0;
};

template <typename Agent>
EpochRecord play_epoch(const EnvSpec& spec, const Agent& agent, Rng& rng) {
    EnvState st;
    epoch_reset(st, spec);
    EpochRecord rec;
    const int m = spec.episode_length();
    rec.trace.reserve(static_cast<size_t>(m));
    rec.response_percepts.reserve(static_cast<size_t>(m));
    for (int t = 0; t < m; ++t) {
        const int s = spec.percept_of(st.cell);
        const int a = agent.act(s, rng);
        const StepOutcome out = env_step(st, spec, a);
        rec.trace.emplace_back(s, a);
        rec.response_percepts.push_back(out.percept);
        if (out.reward) rec.reward = 1;
    }
    return rec;
}

// Exact probability that one epoch of the agent's current policy realizes a
// rewarding sequence; computed by enumeration, no sampling.
double epoch_reward_probability(const PSAgent& agent, const EnvSpec& spec);

// Replay-train a copy of the agent on one rewarding sequence for `epochs`
// epochs with reward 1 (the percepts come from the deterministic replay).
PSAgent replay_trained_copy(const PSAgent& agent, const EnvSpec& spec,
                            std::span<const int> rewarding_seq, int epochs);

} // namespace qrl
