#include "qrl/search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qrl {

PhaseOracle::PhaseOracle(size_t space, std::vector<uint64_t> marked)
    : space_(space), marked_(std::move(marked)) {
    if (space_ == 0) throw std::invalid_argument("PhaseOracle: empty space");
    std::sort(marked_.begin(), marked_.end());
    if (!marked_.empty() && marked_.back() >= space_)
        throw std::invalid_argument("PhaseOracle: marked rank out of range");
}

PhaseOracle PhaseOracle::from_predicate(size_t space, const std::function<bool(uint64_t)>& marked) {
    std::vector<uint64_t> ranks;
    for (uint64_t r = 0; r < space; ++r)
        if (marked(r)) ranks.push_back(r);
    return PhaseOracle(space, std::move(ranks));
}

PhaseOracle PhaseOracle::from_spec(const EnvSpec& spec) {
    return PhaseOracle(static_cast<size_t>(spec.sequence_space()), enumerate_rewarding_ranks(spec));
}

bool PhaseOracle::is_marked(uint64_t rank) const {
    return std::binary_search(marked_.begin(), marked_.end(), rank);
}

void PhaseOracle::apply(StateVector& state, QueryLedger& ledger) const {
    if (state.size() != space_) throw std::invalid_argument("PhaseOracle: state dimension mismatch");
    apply_phase_flips(state, marked_);
    ledger.charge_oracle_call();
}

double grover_success_probability(uint64_t j, uint64_t k, uint64_t n) {
    if (n == 0) throw std::invalid_argument("grover_success_probability: empty space");
    if (k == 0) return 0.0;
    if (k > n) throw std::invalid_argument("grover_success_probability: k exceeds n");
    const double theta = std::asin(std::sqrt(static_cast<double>(k) / static_cast<double>(n)));
    const double s = std::sin(static_cast<double>(2 * j + 1) * theta);
    return s * s;
}

uint64_t grover_optimal_iterations(uint64_t k, uint64_t n) {
    if (k == 0 || k > n) throw std::invalid_argument("grover_optimal_iterations: need 1 <= k <= n");
    const double theta = std::asin(std::sqrt(static_cast<double>(k) / static_cast<double>(n)));
    const long j = std::lround(M_PI / (4.0 * theta) - 0.5);
    return j > 0 ? static_cast<uint64_t>(j) : 0;
}

GroverResult grover_search_known_k(const PhaseOracle& oracle, uint64_t k, Rng& rng,
                                   QueryLedger& ledger) {
    if (k == 0) throw std::invalid_argument("grover_search_known_k: no solution exists (k = 0)");
    const uint64_t j = grover_optimal_iterations(k, oracle.space());
    StateVector state = StateVector::uniform(oracle.space());
    for (uint64_t it = 0; it < j; ++it) {
        oracle.apply(state, ledger);
        diffusion(state);
    }
    const uint64_t outcome = state.measure(rng);
    return {outcome, oracle.is_marked(outcome), j};
}

BbhtResult bbht_search(const PhaseOracle& oracle, Rng& rng, QueryLedger& ledger,
                       const BbhtOptions& options) {
    const double sqrt_n = std::sqrt(static_cast<double>(oracle.space()));
    uint64_t cap = static_cast<uint64_t>(std::ceil(options.c_stop * sqrt_n));
    if (options.max_calls > 0) cap = std::min(cap, options.max_calls);

    BbhtResult res;
    double m = 1.0;
    while (res.calls < cap) {
        const uint64_t limit = static_cast<uint64_t>(std::ceil(m));
        const uint64_t j = rng.uniform_int(limit);
        StateVector state = StateVector::uniform(oracle.space());
        bool out_of_calls = false;
        for (uint64_t it = 0; it < j; ++it) {
            if (res.calls >= cap) {
                out_of_calls = true;
                break;
            }
            oracle.apply(state, ledger);
            res.calls += 1;
            diffusion(state);
        }
        if (out_of_calls || res.calls >= cap) break;

        const uint64_t outcome = state.measure(rng);
        ledger.charge_oracle_call(); // classical check of the candidate
        res.calls += 1;
        res.rounds += 1;
        if (oracle.is_marked(outcome)) {
            res.found = outcome;
            return res;
        }
        m = std::min(options.growth * m, sqrt_n);
    }
    return res;
}

DhResult dh_extremum(std::span<const double> values, ExtremumMode mode, Rng& rng,
                     QueryLedger& ledger, const DhOptions& options) {
    const size_t n = values.size();
    if (n == 0) throw std::invalid_argument("dh_extremum: empty table");

    const double sqrt_n = std::sqrt(static_cast<double>(n));
    const uint64_t budget = static_cast<uint64_t>(std::ceil(options.c_dh * sqrt_n));
    const uint64_t inner_cap = static_cast<uint64_t>(std::ceil(options.bbht.c_stop * sqrt_n));

    auto better = [&](double candidate, double threshold) {
        return mode == ExtremumMode::minimize ? candidate < threshold : candidate > threshold;
    };

    DhResult res;
    res.index = static_cast<size_t>(rng.uniform_int(n));
    res.threshold_trace.emplace_back(res.index, values[res.index]);

    std::vector<uint64_t> marked;
    auto rebuild_marked = [&]() {
        marked.clear();
        const double threshold = values[res.index];
        for (size_t i = 0; i < n; ++i)
            if (better(values[i], threshold)) marked.push_back(static_cast<uint64_t>(i));
    };
    rebuild_marked();

    uint64_t calls_since_improve = 0;
    double m = 1.0;
    while (res.calls < budget && calls_since_improve < inner_cap) {
        const uint64_t limit = static_cast<uint64_t>(std::ceil(m));
        const uint64_t j = rng.uniform_int(limit);
        StateVector state = StateVector::uniform(n);
        bool out_of_calls = false;
        for (uint64_t it = 0; it < j; ++it) {
            if (res.calls >= budget || calls_since_improve >= inner_cap) {
                out_of_calls = true;
                break;
            }
            apply_phase_flips(state, marked);
            diffusion(state);
            ledger.charge_oracle_call();
            res.calls += 1;
            calls_since_improve += 1;
        }
        if (out_of_calls || res.calls >= budget || calls_since_improve >= inner_cap) break;

        const uint64_t outcome = state.measure(rng);
        ledger.charge_oracle_call(); // classical threshold comparison
        res.calls += 1;
        res.verifications += 1;
        calls_since_improve += 1;
        if (better(values[outcome], values[res.index])) {
            res.index = static_cast<size_t>(outcome);
            res.threshold_trace.emplace_back(res.index, values[res.index]);
            rebuild_marked();
            calls_since_improve = 0;
            m = 1.0;
        } else {
            m = std::min(options.bbht.growth * m, sqrt_n);
        }
    }
    res.budget_exhausted = res.calls >= budget;
    return res;
}

} // namespace qrl
