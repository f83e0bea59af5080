#pragma once
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qrl {

// Percept and action identifier sets. Identifiers are strings; percepts and
// actions must not collide so a single communication channel can carry both.
struct Alphabets {
    std::vector<std::string> percepts;
    std::vector<std::string> actions;

    void validate() const; // throws std::invalid_argument
};

enum class SymbolKind { percept, action };

struct HistoryStep {
    SymbolKind kind;
    int symbol; // index into the percept or action alphabet
    int reward; // 0|1, meaningful on percept steps only
    int epoch;  // epoch the step belongs to
};

// The realized interaction record. Each epoch opens with the percept the
// environment presents after reset, followed by strictly alternating
// action/percept steps. Rewards ride on percept steps.
class History {
public:
    void begin_epoch(int percept);
    void push_action(int action);
    void push_percept(int percept, int reward);

    size_t size() const { return steps_.size(); }
    bool empty() const { return steps_.empty(); }
    const HistoryStep& step(size_t i) const { return steps_.at(i); }
    const std::vector<HistoryStep>& steps() const { return steps_; }
    int epoch_count() const { return epoch_count_; }

private:
    std::vector<HistoryStep> steps_;
    int epoch_count_ = 0;
};

// Which history steps a monitoring system records. An all-true schedule is
// the classical tester; any false entry makes it sporadic.
struct TesterSchedule {
    std::vector<bool> tested; // size == horizon

    size_t horizon() const { return tested.size(); }
    bool all_tested() const;

    static TesterSchedule classical(size_t horizon);
    static TesterSchedule untested(size_t horizon);
    // tested exactly on [from, to)
    static TesterSchedule window(size_t horizon, size_t from, size_t to);
};

struct TranscriptEntry {
    uint64_t step; // index into the original history
    int epoch;
    SymbolKind kind;
    int symbol;
    int reward;
};

struct Transcript {
    std::vector<TranscriptEntry> entries;

    size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }
};

// Record the tested subsequence of a history. Untested steps leave no trace.
// Throws std::length_error if the history is longer than the schedule.
Transcript apply_tester(const History& history, const TesterSchedule& schedule);

// Re-filter an existing transcript by a schedule over original step indices.
Transcript filter_transcript(const Transcript& transcript, const TesterSchedule& schedule);

// Mean reward per percept entry with original step index in [step_lo, step_hi).
// Empty windows yield 0 by convention.
double average_reward(const Transcript& transcript, uint64_t step_lo, uint64_t step_hi);
double average_reward(const Transcript& transcript);

// Fraction of epochs covered by the transcript that carry a reward. This is
// the finite-horizon per-epoch figure of merit used by the experiments.
double epoch_reward_rate(const Transcript& transcript);

// Number of rewarded epochs visible in the transcript.
uint64_t rewarded_epochs(const Transcript& transcript);

// CSV with columns: step,epoch,kind,symbol,reward,tested
void write_transcript_csv(std::ostream& os, const Transcript& transcript, const Alphabets& alphabets);

} // namespace qrl
