#include "qrl/oraculize.hpp"

#include <utility>

namespace qrl {

void apply_reward_flip(RegisterBranch& branch) {
    switch (branch.kick) {
        case KickbackSystem::phi_minus:
            branch.phase = -branch.phase;
            break;
        case KickbackSystem::phi_plus:
            break;
        case KickbackSystem::zero:
            branch.kick = KickbackSystem::one;
            break;
        case KickbackSystem::one:
            branch.kick = KickbackSystem::zero;
            break;
    }
}

KickbackOutcome kickback_game(const EnvSpec& spec, std::span<const int> branch,
                              KickbackSystem kick) {
    if (static_cast<int>(branch.size()) != spec.episode_length())
        throw std::invalid_argument("kickback_game: branch length must equal episode length");

    RegisterBranch reg;
    reg.actions.assign(branch.begin(), branch.end());
    reg.kick = kick;

    EnvState st;
    epoch_reset(st, spec);
    for (int a : branch) {
        const StepOutcome out = env_step(st, spec, a);
        // the environment stores the action and emits the percept, which the
        // agent scavenges as it passes through the communication register
        reg.env_actions.push_back(a);
        reg.agent_percepts.push_back(out.percept);
        if (out.reward) apply_reward_flip(reg);
    }
    return {reg.phase, reg.agent_percepts, reg.env_actions, reg.kick};
}

RawGameOutcome raw_game(const EnvSpec& spec, std::span<const int> branch,
                        std::span<const int> implanted_percepts) {
    if (static_cast<int>(branch.size()) != spec.episode_length())
        throw std::invalid_argument("raw_game: branch length must equal episode length");
    if (implanted_percepts.size() != branch.size())
        throw std::invalid_argument("raw_game: implanted percepts must cover every step");

    RawGameOutcome out;
    out.residual_slots.assign(implanted_percepts.begin(), implanted_percepts.end());

    // Each step map rotates only within span{empty, s_{t+1}} and is its own
    // inverse; on any other slot content it acts as the identity.
    int cell = spec.start_cell();
    for (size_t t = 0; t < branch.size(); ++t) {
        cell = spec.transition(cell, branch[t]);
        const int expected = spec.percept_of(cell);
        int& slot = out.residual_slots[t];
        if (slot == expected)
            slot = kEmptySlot;
        else if (slot == kEmptySlot)
            slot = expected;
    }
    out.restored = true;
    for (int slot : out.residual_slots)
        if (slot != kEmptySlot) out.restored = false;
    out.actions_returned.assign(branch.begin(), branch.end());
    return out;
}

OracularizedOracle::OracularizedOracle(size_t space, int episode_length,
                                       std::vector<BranchReport> branches, PhaseOracle phase_view)
    : space_(space),
      episode_length_(episode_length),
      branches_(std::move(branches)),
      phase_view_(std::move(phase_view)) {}

OracularizedOracle OracularizedOracle::build(const EnvSpec& spec) {
    const uint64_t n = spec.sequence_space();
    if (n > kEnumerationGuard)
        throw std::length_error("OracularizedOracle: sequence space exceeds enumeration guard");

    std::vector<BranchReport> branches;
    std::vector<uint64_t> flipped;
    branches.reserve(static_cast<size_t>(n));
    for (uint64_t rank = 0; rank < n; ++rank) {
        const std::vector<int> seq = decode_sequence(rank, spec.action_count(), spec.episode_length());

        const KickbackOutcome kb = kickback_game(spec, seq, KickbackSystem::phi_minus);
        if (kb.kick_final != KickbackSystem::phi_minus)
            throw OracleConstructionError(rank, "oraculization: kickback unit left its eigenstate on branch " +
                                                    std::to_string(rank));

        // implant the scavenged percepts, then uncompute them with game 2
        const RawGameOutcome raw = raw_game(spec, seq, kb.percepts);
        if (!raw.restored)
            throw OracleConstructionError(rank, "oraculization: residual percept slots not restored on branch " +
                                                    std::to_string(rank));
        if (raw.actions_returned != seq)
            throw OracleConstructionError(rank, "oraculization: action register corrupted on branch " +
                                                    std::to_string(rank));

        branches.push_back({rank, kb.phase, raw.restored});
        if (kb.phase < 0) flipped.push_back(rank);
    }

    PhaseOracle view(static_cast<size_t>(n), std::move(flipped));
    return OracularizedOracle(static_cast<size_t>(n), spec.episode_length(), std::move(branches),
                              std::move(view));
}

int OracularizedOracle::phase(uint64_t rank) const {
    return branches_.at(static_cast<size_t>(rank)).phase;
}

void OracularizedOracle::apply(StateVector& state, QueryLedger& ledger) const {
    if (state.size() != space_)
        throw std::invalid_argument("OracularizedOracle: state dimension mismatch");
    apply_phase_flips(state, phase_view_.marked());
    ledger.charge_oracle_call(); // two full games: 2M interaction steps
}

} // namespace qrl
