#include "qrl/agent.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qrl {

PSAgent::PSAgent(int action_count, double gamma, double eta)
    : action_count_(action_count), gamma_(gamma), eta_(eta) {
    if (action_count <= 0) throw std::invalid_argument("PSAgent: action_count must be positive");
    if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("PSAgent: gamma must be in [0,1]");
    if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("PSAgent: eta must be in [0,1]");
}

PSAgent::Row& PSAgent::row(int percept) {
    auto it = rows_.find(percept);
    if (it == rows_.end()) {
        Row r{std::vector<double>(static_cast<size_t>(action_count_), 1.0),
              std::vector<double>(static_cast<size_t>(action_count_), 0.0)};
        it = rows_.emplace(percept, std::move(r)).first;
    }
    return it->second;
}

std::vector<double> PSAgent::policy(int percept) const {
    auto it = rows_.find(percept);
    if (it == rows_.end())
        return std::vector<double>(static_cast<size_t>(action_count_), 1.0 / action_count_);
    const auto& h = it->second.h;
    double total = 0.0;
    for (double v : h) total += v;
    std::vector<double> p(h.size());
    for (size_t i = 0; i < h.size(); ++i) p[i] = h[i] / total;
    return p;
}

int PSAgent::act(int percept, Rng& rng) const {
    auto it = rows_.find(percept);
    if (it == rows_.end()) return static_cast<int>(rng.uniform_int(static_cast<uint64_t>(action_count_)));
    return static_cast<int>(rng.sample_weights(it->second.h));
}

void PSAgent::update(std::span<const std::pair<int, int>> trace, int reward) {
    if (trace.empty()) throw std::invalid_argument("PSAgent::update: empty trace");
    if (reward != 0 && reward != 1) throw std::invalid_argument("PSAgent::update: reward must be 0 or 1");
    for (const auto& [s, a] : trace) {
        if (a < 0 || a >= action_count_) throw std::invalid_argument("PSAgent::update: action out of range");
        row(s); // materialize
    }
    for (auto& [percept, r] : rows_)
        for (double& g : r.g) g *= (1.0 - eta_);
    for (const auto& [s, a] : trace) rows_.at(s).g[static_cast<size_t>(a)] = 1.0;
    const double lambda = static_cast<double>(reward);
    for (auto& [percept, r] : rows_)
        for (size_t i = 0; i < r.h.size(); ++i)
            r.h[i] = r.h[i] - gamma_ * (r.h[i] - 1.0) + r.g[i] * lambda;
}

double PSAgent::h_value(int percept, int action) const {
    auto it = rows_.find(percept);
    if (it == rows_.end()) return 1.0;
    return it->second.h.at(static_cast<size_t>(action));
}

double PSAgent::glow_value(int percept, int action) const {
    auto it = rows_.find(percept);
    if (it == rows_.end()) return 0.0;
    return it->second.g.at(static_cast<size_t>(action));
}

void PSAgent::save(std::ostream& os) const {
    os.precision(17);
    os << "gamma " << gamma_ << "\n";
    os << "eta " << eta_ << "\n";
    os << "action_count " << action_count_ << "\n";
    for (const auto& [percept, r] : rows_) {
        for (int a = 0; a < action_count_; ++a)
            os << "h " << percept << ' ' << a << ' ' << r.h[static_cast<size_t>(a)] << "\n";
        for (int a = 0; a < action_count_; ++a)
            os << "g " << percept << ' ' << a << ' ' << r.g[static_cast<size_t>(a)] << "\n";
    }
}

PSAgent PSAgent::load(std::istream& is) {
    double gamma = 0.0, eta = 0.0;
    int action_count = 0;
    struct Entry { char table; int percept; int action; double value; };
    std::vector<Entry> entries;
    std::string line;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key) || key[0] == '#') continue;
        if (key == "gamma") ls >> gamma;
        else if (key == "eta") ls >> eta;
        else if (key == "action_count") ls >> action_count;
        else if (key == "h" || key == "g") {
            Entry e{key[0], 0, 0, 0.0};
            if (!(ls >> e.percept >> e.action >> e.value))
                throw std::invalid_argument("agent snapshot: malformed table line");
            entries.push_back(e);
        } else {
            throw std::invalid_argument("agent snapshot: unknown key '" + key + "'");
        }
    }
    PSAgent agent(action_count, gamma, eta);
    for (const Entry& e : entries) {
        Row& r = agent.row(e.percept);
        auto& table = (e.table == 'h') ? r.h : r.g;
        table.at(static_cast<size_t>(e.action)) = e.value;
    }
    return agent;
}

double epoch_reward_probability(const PSAgent& agent, const EnvSpec& spec) {
    double total = 0.0;
    for (uint64_t rank : enumerate_rewarding_ranks(spec)) {
        std::vector<int> seq = decode_sequence(rank, spec.action_count(), spec.episode_length());
        double p = 1.0;
        int cell = spec.start_cell();
        for (int a : seq) {
            p *= agent.policy(spec.percept_of(cell))[static_cast<size_t>(a)];
            cell = spec.transition(cell, a);
        }
        total += p;
    }
    return total;
}

PSAgent replay_trained_copy(const PSAgent& agent, const EnvSpec& spec,
                            std::span<const int> rewarding_seq, int epochs) {
    PSAgent trained = clone_agent(agent);
    if (epochs <= 0) return trained;
    std::vector<std::pair<int, int>> trace;
    int cell = spec.start_cell();
    for (int a : rewarding_seq) {
        trace.emplace_back(spec.percept_of(cell), a);
        cell = spec.transition(cell, a);
    }
    for (int e = 0; e < epochs; ++e) trained.update(trace, 1);
    return trained;
}

} // namespace qrl
