#pragma once
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qrl/ledger.hpp"
#include "qrl/maze.hpp"
#include "qrl/rng.hpp"
#include "qrl/statevector.hpp"

namespace qrl {

// Phase oracle over a rank space: ranks in `marked` pick up a -1 phase.
// Every application charges one oracle call to the ledger.
class PhaseOracle {
public:
    PhaseOracle(size_t space, std::vector<uint64_t> marked);

    static PhaseOracle from_predicate(size_t space, const std::function<bool(uint64_t)>& marked);
    // Direct realization of the reward predicate of a deterministic maze.
    static PhaseOracle from_spec(const EnvSpec& spec);

    size_t space() const { return space_; }
    size_t marked_count() const { return marked_.size(); }
    std::span<const uint64_t> marked() const { return marked_; }
    bool is_marked(uint64_t rank) const;

    void apply(StateVector& state, QueryLedger& ledger) const;

private:
    size_t space_;
    std::vector<uint64_t> marked_; // sorted
};

// Closed-form success probability after j Grover iterations,
// sin^2((2j+1) * asin(sqrt(k/n))); defined as 0 for k = 0.
double grover_success_probability(uint64_t j, uint64_t k, uint64_t n);

// Iteration count maximizing the closed form: round(pi/(4 theta) - 1/2).
uint64_t grover_optimal_iterations(uint64_t k, uint64_t n);

struct GroverResult {
    uint64_t outcome;
    bool marked;
    uint64_t iterations;
};

// Known marked count: run the optimal iteration count and measure.
// Throws std::invalid_argument for k = 0.
GroverResult grover_search_known_k(const PhaseOracle& oracle, uint64_t k, Rng& rng,
                                   QueryLedger& ledger);

struct BbhtOptions {
    double growth = 6.0 / 5.0; // critical-length growth factor
    double c_stop = 30.0;      // total-call cap multiplier: cap = ceil(c_stop * sqrt(N))
    uint64_t max_calls = 0;    // extra external cap; 0 means none
};

struct BbhtResult {
    std::optional<uint64_t> found;
    uint64_t calls = 0;  // oracle-equivalent calls, including classical checks
    uint32_t rounds = 0;
};

// Amplitude amplification with unknown marked count. Each round draws an
// iteration count uniformly below the current critical length, measures, and
// checks the outcome classically (one extra oracle-equivalent call). Stops on
// success or once the call cap is consumed exactly.
BbhtResult bbht_search(const PhaseOracle& oracle, Rng& rng, QueryLedger& ledger,
                       const BbhtOptions& options = {});

enum class ExtremumMode { minimize, maximize };

struct DhOptions {
    double c_dh = 22.5; // total-call budget multiplier: budget = ceil(c_dh * sqrt(N))
    BbhtOptions bbht{};
};

struct DhResult {
    size_t index = 0;
    uint64_t calls = 0;
    uint64_t verifications = 0; // classical threshold comparisons performed
    // threshold holders in order, starting from the random initial pick
    std::vector<std::pair<size_t, double>> threshold_trace;
    bool budget_exhausted = false;
};

// Threshold-descent extremum finding: repeated unknown-count searches over
// the strictly-better-than-threshold set, best-so-far returned when the call
// budget runs out or a full search finds no improvement.
DhResult dh_extremum(std::span<const double> values, ExtremumMode mode, Rng& rng,
                     QueryLedger& ledger, const DhOptions& options = {});

} // namespace qrl
