#pragma once
#include <cstdint>
#include <stdexcept>

namespace qrl {

// Interaction-step accounting shared by every search and experiment.
// One oracle query costs two full games (2M steps); one classical epoch
// costs M steps. The accounting identity is re-checked on every charge;
// a violation aborts the run.
class QueryLedger {
public:
    QueryLedger() = default;
    explicit QueryLedger(uint32_t episode_length) : episode_length_(episode_length) {}

    void charge_oracle_call() {
        oracle_calls_ += 1;
        interaction_steps_ += 2ull * episode_length_;
        ensure_consistent();
    }

    void charge_classical_epoch() {
        classical_epochs_ += 1;
        interaction_steps_ += episode_length_;
        ensure_consistent();
    }

    uint64_t oracle_calls() const { return oracle_calls_; }
    uint64_t interaction_steps() const { return interaction_steps_; }
    uint64_t classical_epochs() const { return classical_epochs_; }
    uint32_t episode_length() const { return episode_length_; }

    bool consistent() const {
        return interaction_steps_ ==
               2ull * episode_length_ * oracle_calls_ +
                   static_cast<uint64_t>(episode_length_) * classical_epochs_;
    }

    void ensure_consistent() const {
        if (!consistent())
            throw std::logic_error("QueryLedger: interaction-step accounting violated");
    }

private:
    uint32_t episode_length_ = 0;
    uint64_t oracle_calls_ = 0;
    uint64_t interaction_steps_ = 0;
    uint64_t classical_epochs_ = 0;
};

} // namespace qrl
