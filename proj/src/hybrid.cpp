#include "qrl/hybrid.hpp"

#include <algorithm>
#include <stdexcept>

namespace qrl {

void explore(HybridAgent& agent, const EnvSpec& spec, const OracularizedOracle& oracle, Rng& rng,
             const BbhtOptions& options) {
    if (agent.phase_ != HybridPhase::exploring)
        throw std::logic_error("explore: agent already relinquished control");
    if (oracle.space() != spec.sequence_space())
        throw std::invalid_argument("explore: oracle does not match the environment");

    const uint64_t step_cost = 2ull * static_cast<uint64_t>(spec.episode_length());
    const uint64_t spent = agent.ledger_.interaction_steps();
    if (agent.exploration_budget_steps_ <= spent) return;
    const uint64_t budget_calls = (agent.exploration_budget_steps_ - spent) / step_cost;
    if (budget_calls == 0) return; // budget below one oracularized query

    BbhtOptions opts = options;
    opts.max_calls = opts.max_calls > 0 ? std::min(opts.max_calls, budget_calls) : budget_calls;
    const BbhtResult res = bbht_search(oracle.as_phase_oracle(), rng, agent.ledger_, opts);
    if (!res.found) return;

    std::vector<int> seq = decode_sequence(*res.found, spec.action_count(), spec.episode_length());
    const ReplayOutcome replay = replay_epoch(spec, seq);
    if (replay.reward != 1)
        throw std::logic_error("explore: search returned a non-rewarding sequence");
    agent.found_.push_back({std::move(seq), replay.percepts});
}

void train_lucky(HybridAgent& agent, const EnvSpec& spec, int replay_count) {
    if (agent.found_.empty()) return;
    agent.inner_ =
        replay_trained_copy(agent.inner_, spec, agent.found_.front().sequence, replay_count);
}

Transcript exploit(HybridAgent& agent, const EnvSpec& spec, const TesterSchedule& tester,
                   uint64_t epochs, Rng& rng) {
    if (agent.phase_ == HybridPhase::exploiting)
        throw std::logic_error("exploit: control was already relinquished");
    agent.phase_ = HybridPhase::exploiting;

    History hist;
    for (uint64_t e = 0; e < epochs; ++e) {
        hist.begin_epoch(spec.percept_of(spec.start_cell()));
        EnvState st;
        epoch_reset(st, spec);
        EpochRecord rec;
        for (int t = 0; t < spec.episode_length(); ++t) {
            const int s = spec.percept_of(st.cell);
            const int a = agent.inner_.act(s, rng);
            const StepOutcome out = env_step(st, spec, a);
            hist.push_action(a);
            hist.push_percept(out.percept, out.reward);
            rec.trace.emplace_back(s, a);
            if (out.reward) rec.reward = 1;
        }
        agent.inner_.update(rec.trace, rec.reward);
        agent.ledger_.charge_classical_epoch();
        if (rec.reward) agent.classical_rewards_ += 1;
    }
    return apply_tester(hist, tester);
}

TesterSchedule exploitation_window_schedule(uint64_t total_epochs, int episode_length,
                                            uint64_t tested_epochs) {
    if (tested_epochs > total_epochs)
        throw std::invalid_argument("exploitation_window_schedule: window exceeds run length");
    const uint64_t symbols_per_epoch = 2ull * static_cast<uint64_t>(episode_length) + 1;
    const uint64_t horizon = total_epochs * symbols_per_epoch;
    return TesterSchedule::window(horizon, (total_epochs - tested_epochs) * symbols_per_epoch,
                                  horizon);
}

void CompareConfig::validate(const EnvSpec& spec) const {
    const uint64_t m = static_cast<uint64_t>(spec.episode_length());
    if (total_steps == 0) throw std::invalid_argument("compare: total_steps must be positive");
    if (total_steps % m != 0)
        throw std::invalid_argument("compare: total_steps must be a multiple of the episode length");
    if (exploration_steps > total_steps)
        throw std::invalid_argument("compare: exploration_steps exceeds total_steps");
    if (exploration_steps % (2 * m) != 0)
        throw std::invalid_argument("compare: exploration_steps must be a multiple of 2M");
    if (tested_epochs * m > total_steps - exploration_steps)
        throw std::invalid_argument("compare: tested window does not fit after exploration");
    if (tested_epochs == 0) throw std::invalid_argument("compare: tested_epochs must be positive");
}

ArmOutcome run_classical_arm(const EnvSpec& spec, const CompareConfig& config, uint64_t seed) {
    config.validate(spec);
    const uint64_t m = static_cast<uint64_t>(spec.episode_length());
    const uint64_t epochs = config.total_steps / m;

    Rng rng(seed);
    PSAgent agent(spec.action_count(), config.gamma, config.eta);
    QueryLedger ledger(static_cast<uint32_t>(m));

    History hist;
    ArmOutcome out;
    for (uint64_t e = 0; e < epochs; ++e) {
        hist.begin_epoch(spec.percept_of(spec.start_cell()));
        EnvState st;
        epoch_reset(st, spec);
        EpochRecord rec;
        for (int t = 0; t < spec.episode_length(); ++t) {
            const int s = spec.percept_of(st.cell);
            const int a = agent.act(s, rng);
            const StepOutcome step = env_step(st, spec, a);
            hist.push_action(a);
            hist.push_percept(step.percept, step.reward);
            rec.trace.emplace_back(s, a);
            if (step.reward) rec.reward = 1;
        }
        agent.update(rec.trace, rec.reward);
        ledger.charge_classical_epoch();
        if (rec.reward) out.any_reward = true;
    }

    const TesterSchedule tester =
        exploitation_window_schedule(epochs, spec.episode_length(), config.tested_epochs);
    out.transcript = apply_tester(hist, tester);
    out.merit = epoch_reward_rate(out.transcript);
    out.oracle_calls = ledger.oracle_calls();
    out.interaction_steps = ledger.interaction_steps();
    out.classical_epochs = ledger.classical_epochs();
    return out;
}

ArmOutcome run_hybrid_arm(const EnvSpec& spec, const OracularizedOracle& oracle,
                          const CompareConfig& config, uint64_t seed) {
    config.validate(spec);
    const uint64_t m = static_cast<uint64_t>(spec.episode_length());

    Rng rng(seed);
    HybridAgent agent(PSAgent(spec.action_count(), config.gamma, config.eta),
                      config.exploration_steps, spec.episode_length());
    explore(agent, spec, oracle, rng, config.bbht);
    train_lucky(agent, spec, config.replay_count);

    const uint64_t remaining = config.total_steps - agent.ledger().interaction_steps();
    const uint64_t epochs = remaining / m;
    const TesterSchedule tester =
        exploitation_window_schedule(epochs, spec.episode_length(), config.tested_epochs);

    ArmOutcome out;
    out.transcript = exploit(agent, spec, tester, epochs, rng);
    out.merit = epoch_reward_rate(out.transcript);
    out.found_in_exploration = !agent.found().empty();
    out.any_reward = out.found_in_exploration || agent.classical_rewards() > 0;
    out.oracle_calls = agent.ledger().oracle_calls();
    out.interaction_steps = agent.ledger().interaction_steps();
    out.classical_epochs = agent.ledger().classical_epochs();
    return out;
}

ComparePair compare_budgeted(const EnvSpec& spec, const OracularizedOracle& oracle,
                             const CompareConfig& config, uint64_t seed) {
    return {run_classical_arm(spec, config, seed), run_hybrid_arm(spec, oracle, config, seed)};
}

} // namespace qrl
