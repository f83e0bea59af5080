#pragma once
#include <cstdint>
#include <span>
#include <vector>

#include "qrl/agent.hpp"
#include "qrl/interaction.hpp"
#include "qrl/ledger.hpp"
#include "qrl/maze.hpp"
#include "qrl/oraculize.hpp"
#include "qrl/rng.hpp"
#include "qrl/search.hpp"

namespace qrl {

enum class HybridPhase { exploring, exploiting };

struct FoundSequence {
    std::vector<int> sequence;
    std::vector<int> percepts; // scavenged during verification
};

// Quantum-enhanced agent: untested exploration through the oracularized
// environment, internal zero-step training of the classical model on found
// rewarding sequences, then tested classical exploitation. All environment
// access is charged to the ledger (2M per oracle call, M per epoch).
class HybridAgent {
public:
    HybridAgent(PSAgent inner, uint64_t exploration_budget_steps, int episode_length)
        : inner_(std::move(inner)),
          exploration_budget_steps_(exploration_budget_steps),
          ledger_(static_cast<uint32_t>(episode_length)) {}

    const PSAgent& inner() const { return inner_; }
    HybridPhase phase() const { return phase_; }
    uint64_t exploration_budget_steps() const { return exploration_budget_steps_; }
    const std::vector<FoundSequence>& found() const { return found_; }
    const QueryLedger& ledger() const { return ledger_; }
    uint64_t classical_rewards() const { return classical_rewards_; }

    friend void explore(HybridAgent&, const EnvSpec&, const OracularizedOracle&, Rng&,
                        const BbhtOptions&);
    friend void train_lucky(HybridAgent&, const EnvSpec&, int);
    friend Transcript exploit(HybridAgent&, const EnvSpec&, const TesterSchedule&, uint64_t, Rng&);

private:
    PSAgent inner_;
    uint64_t exploration_budget_steps_;
    QueryLedger ledger_;
    HybridPhase phase_ = HybridPhase::exploring;
    std::vector<FoundSequence> found_;
    uint64_t classical_rewards_ = 0;
};

// Run unknown-count search against the oracularized environment until a
// rewarding sequence is found or the exploration budget is exhausted. Found
// sequences are re-verified on insertion and stored with their percepts.
void explore(HybridAgent& agent, const EnvSpec& spec, const OracularizedOracle& oracle, Rng& rng,
             const BbhtOptions& options = {});

// Replace the inner model with a copy replay-trained on the first found
// rewarding sequence; uses no interaction steps. No-op when nothing was found.
void train_lucky(HybridAgent& agent, const EnvSpec& spec, int replay_count);

// Play `epochs` classical epochs under the tester and return the tested
// transcript. Transitions the agent to the exploiting phase (once, ever).
Transcript exploit(HybridAgent& agent, const EnvSpec& spec, const TesterSchedule& tester,
                   uint64_t epochs, Rng& rng);

// Tester that records only the last `tested_epochs` epochs of a run of
// `total_epochs` epochs (each epoch spans 2M+1 history steps).
TesterSchedule exploitation_window_schedule(uint64_t total_epochs, int episode_length,
                                            uint64_t tested_epochs);

struct CompareConfig {
    double gamma = 0.0;
    double eta = 1.0;
    int replay_count = 10;
    uint64_t total_steps = 0;       // identical budget for both arms
    uint64_t exploration_steps = 0; // hybrid's exploration cap (2M per oracle call)
    uint64_t tested_epochs = 0;     // sporadic tester window at the end of the run
    BbhtOptions bbht{};

    void validate(const EnvSpec& spec) const; // throws std::invalid_argument
};

struct ArmOutcome {
    double merit = 0.0; // per-epoch reward rate over the tested window
    uint64_t oracle_calls = 0;
    uint64_t interaction_steps = 0;
    uint64_t classical_epochs = 0;
    bool found_in_exploration = false;
    bool any_reward = false; // any reward during the whole run, tested or not
    Transcript transcript;   // the tested window as the tester recorded it
};

struct ComparePair {
    ArmOutcome classical_arm;
    ArmOutcome hybrid_arm;
};

ArmOutcome run_classical_arm(const EnvSpec& spec, const CompareConfig& config, uint64_t seed);
ArmOutcome run_hybrid_arm(const EnvSpec& spec, const OracularizedOracle& oracle,
                          const CompareConfig& config, uint64_t seed);

// Budget-matched comparison under the same sporadic tester; both arms are
// seeded identically, so a zero exploration budget degenerates the hybrid to
// a transcript-identical copy of the classical baseline.
ComparePair compare_budgeted(const EnvSpec& spec, const OracularizedOracle& oracle,
                             const CompareConfig& config, uint64_t seed);

} // namespace qrl
