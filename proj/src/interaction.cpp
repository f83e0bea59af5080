#include "qrl/interaction.hpp"

#include <algorithm>
#include <ostream>
#include <set>
#include <stdexcept>

namespace qrl {

void Alphabets::validate() const {
    if (percepts.empty()) throw std::invalid_argument("Alphabets: percept set is empty");
    if (actions.empty()) throw std::invalid_argument("Alphabets: action set is empty");
    std::set<std::string> seen(percepts.begin(), percepts.end());
    if (seen.size() != percepts.size())
        throw std::invalid_argument("Alphabets: duplicate percept identifier");
    for (const auto& a : actions) {
        if (!seen.insert(a).second)
            throw std::invalid_argument("Alphabets: action identifier collides with percept set: " + a);
    }
    if (seen.size() != percepts.size() + actions.size())
        throw std::invalid_argument("Alphabets: duplicate action identifier");
}

void History::begin_epoch(int percept) {
    steps_.push_back({SymbolKind::percept, percept, 0, epoch_count_});
    epoch_count_ += 1;
}

void History::push_action(int action) {
    if (steps_.empty() || steps_.back().kind != SymbolKind::percept)
        throw std::logic_error("History: action must follow a percept");
    steps_.push_back({SymbolKind::action, action, 0, steps_.back().epoch});
}

void History::push_percept(int percept, int reward) {
    if (steps_.empty() || steps_.back().kind != SymbolKind::action)
        throw std::logic_error("History: percept must open an epoch or answer an action");
    if (reward != 0 && reward != 1)
        throw std::invalid_argument("History: reward must be 0 or 1");
    steps_.push_back({SymbolKind::percept, percept, reward, steps_.back().epoch});
}

bool TesterSchedule::all_tested() const {
    return std::all_of(tested.begin(), tested.end(), [](bool b) { return b; });
}

TesterSchedule TesterSchedule::classical(size_t horizon) {
    return {std::vector<bool>(horizon, true)};
}

TesterSchedule TesterSchedule::untested(size_t horizon) {
    return {std::vector<bool>(horizon, false)};
}

TesterSchedule TesterSchedule::window(size_t horizon, size_t from, size_t to) {
    TesterSchedule s{std::vector<bool>(horizon, false)};
    for (size_t i = from; i < to && i < horizon; ++i) s.tested[i] = true;
    return s;
}

Transcript apply_tester(const History& history, const TesterSchedule& schedule) {
    if (history.size() > schedule.horizon())
        throw std::length_error("apply_tester: history exceeds tester schedule horizon");
    Transcript t;
    for (size_t i = 0; i < history.size(); ++i) {
        if (!schedule.tested[i]) continue;
        const HistoryStep& s = history.step(i);
        t.entries.push_back({static_cast<uint64_t>(i), s.epoch, s.kind, s.symbol, s.reward});
    }
    return t;
}

Transcript filter_transcript(const Transcript& transcript, const TesterSchedule& schedule) {
    Transcript t;
    for (const auto& e : transcript.entries) {
        if (e.step < schedule.horizon() && schedule.tested[e.step]) t.entries.push_back(e);
    }
    return t;
}

double average_reward(const Transcript& transcript, uint64_t step_lo, uint64_t step_hi) {
    uint64_t percepts = 0;
    uint64_t total = 0;
    for (const auto& e : transcript.entries) {
        if (e.step < step_lo || e.step >= step_hi) continue;
        if (e.kind != SymbolKind::percept) continue;
        percepts += 1;
        total += static_cast<uint64_t>(e.reward);
    }
    if (percepts == 0) return 0.0;
    return static_cast<double>(total) / static_cast<double>(percepts);
}

double average_reward(const Transcript& transcript) {
    return average_reward(transcript, 0, UINT64_MAX);
}

double epoch_reward_rate(const Transcript& transcript) {
    std::set<int> epochs;
    std::set<int> rewarded;
    for (const auto& e : transcript.entries) {
        if (e.kind != SymbolKind::percept) continue;
        epochs.insert(e.epoch);
        if (e.reward) rewarded.insert(e.epoch);
    }
    if (epochs.empty()) return 0.0;
    return static_cast<double>(rewarded.size()) / static_cast<double>(epochs.size());
}

uint64_t rewarded_epochs(const Transcript& transcript) {
    std::set<int> rewarded;
    for (const auto& e : transcript.entries) {
        if (e.kind == SymbolKind::percept && e.reward) rewarded.insert(e.epoch);
    }
    return rewarded.size();
}

void write_transcript_csv(std::ostream& os, const Transcript& transcript, const Alphabets& alphabets) {
    os << "step,epoch,kind,symbol,reward,tested\n";
    for (const auto& e : transcript.entries) {
        const bool is_percept = e.kind == SymbolKind::percept;
        const std::string& name = is_percept ? alphabets.percepts.at(static_cast<size_t>(e.symbol))
                                             : alphabets.actions.at(static_cast<size_t>(e.symbol));
        os << e.step << ',' << e.epoch << ',' << (is_percept ? "percept" : "action") << ',' << name
           << ',';
        if (is_percept) os << e.reward;
        os << ",1\n";
    }
}

} // namespace qrl
