#pragma once
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrl/ledger.hpp"
#include "qrl/maze.hpp"
#include "qrl/search.hpp"
#include "qrl/statevector.hpp"

namespace qrl {

// Register-level realization of the environment phase oracle for
// deterministic single-reward epochal environments. Each basis branch is
// simulated through two full games:
//
//   game 1  the agent commits the branch's actions and pre-implants the -1
//           eigenstate of the reward flip; the flip kicks back (-1)^reward
//           while the environment keeps the actions and the agent scavenges
//           the emitted percepts;
//   implant the scavenged percepts are placed back into the environment's
//           percept slots (the reward unit is re-prepared in the +1
//           eigenstate so the second game is phase-free);
//   game 2  the self-inverse step maps uncompute every percept slot back to
//           the empty state and the actions return to the agent.
//
// Branches of a deterministic environment never merge, so simulating each
// basis sequence separately is exact.

constexpr int kEmptySlot = -1;

enum class KickbackSystem { phi_minus, phi_plus, zero, one };

// One basis branch of the joint agent/environment registers.
struct RegisterBranch {
    std::vector<int> actions;        // branch label a_1..a_M
    int phase = 1;                   // accumulated sign
    std::vector<int> agent_percepts; // percepts currently held by the agent
    std::vector<int> env_actions;    // actions currently held by the environment
    std::vector<int> env_slots;      // environment percept slots; kEmptySlot when empty
    KickbackSystem kick = KickbackSystem::phi_minus;
};

// Apply the two-level reward flip to the kickback unit: eigenstates pick up
// their eigenvalue, computational states toggle.
void apply_reward_flip(RegisterBranch& branch);

struct KickbackOutcome {
    int phase = 1;
    std::vector<int> percepts;    // s_2 .. s_{M+1}, scavenged by the agent
    std::vector<int> env_actions; // the environment's copy of the branch
    KickbackSystem kick_final = KickbackSystem::phi_minus;
};

// Game 1: full interaction with the branch's committed actions and the
// kickback unit initialized to `kick` (phi_minus realizes the phase oracle).
KickbackOutcome kickback_game(const EnvSpec& spec, std::span<const int> branch,
                              KickbackSystem kick = KickbackSystem::phi_minus);

struct RawGameOutcome {
    bool restored = false;             // all slots returned to empty
    std::vector<int> actions_returned; // back in the agent register
    std::vector<int> residual_slots;   // slot contents after the involutions
};

// Game 2: replays the branch against implanted percept slots, applying each
// step map's involution. Slots holding exactly the branch's percepts return
// to empty; anything else is left behind and flagged.
RawGameOutcome raw_game(const EnvSpec& spec, std::span<const int> branch,
                        std::span<const int> implanted_percepts);

struct OracleConstructionError : std::runtime_error {
    OracleConstructionError(uint64_t branch_rank, const std::string& what)
        : std::runtime_error(what), branch(branch_rank) {}
    uint64_t branch;
};

struct BranchReport {
    uint64_t rank = 0;
    int phase = 1;
    bool restored = false;
};

// The composed effective oracle. Construction runs the full register-level
// protocol on every basis branch and verifies that the residual registers are
// branch-independent; applications then charge 2M interaction steps per call.
class OracularizedOracle {
public:
    static OracularizedOracle build(const EnvSpec& spec);

    size_t space() const { return space_; }
    int episode_length() const { return episode_length_; }
    int phase(uint64_t rank) const;
    bool is_marked(uint64_t rank) const { return phase(rank) < 0; }
    const std::vector<BranchReport>& branches() const { return branches_; }

    // phase-flip view usable by the generic searches
    const PhaseOracle& as_phase_oracle() const { return phase_view_; }

    void apply(StateVector& state, QueryLedger& ledger) const;

private:
    OracularizedOracle(size_t space, int episode_length, std::vector<BranchReport> branches,
                       PhaseOracle phase_view);

    size_t space_;
    int episode_length_;
    std::vector<BranchReport> branches_;
    PhaseOracle phase_view_;
};

} // namespace qrl
