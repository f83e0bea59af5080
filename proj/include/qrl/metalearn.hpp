#pragma once
#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qrl/agent.hpp"
#include "qrl/ledger.hpp"
#include "qrl/maze.hpp"
#include "qrl/rng.hpp"
#include "qrl/search.hpp"
#include "qrl/statevector.hpp"

namespace qrl {

// Discrete metaparameter space of the PS agent: a gamma axis times an eta
// axis, either of which may be a single fixed value. Flattened index
// k = i_gamma * |eta| + i_eta.
struct MetaParamGrid {
    std::vector<double> gamma_values;
    std::vector<double> eta_values;

    void validate() const; // throws std::invalid_argument
    size_t size() const { return gamma_values.size() * eta_values.size(); }
    std::pair<double, double> config_at(size_t index) const;
    std::string label_at(size_t index) const; // "gamma=..,eta=.."
};

// Evaluation protocol for one metaparameter configuration: train a fresh
// agent for train_epochs, then average reward over eval_epochs with learning
// frozen, over `replicates` runs whose seeds are a pure function of
// (policy_seed, grid index, replicate). Deterministic by construction.
struct EvalContext {
    const EnvSpec* spec = nullptr;
    int train_epochs = 0;
    int eval_epochs = 0;
    int replicates = 32;
    uint64_t policy_seed = 0;

    void validate() const;
};

double eval_config(double gamma, double eta, const EvalContext& ctx, size_t grid_index);

// Lazily evaluated, cached eval(k) table with query accounting: queries()
// counts charged lookups, evaluations() counts cache misses. Lazy cache
// fills are not synchronized; materialize() before sharing across workers
// (the counters themselves are atomic).
class EvalTable {
public:
    EvalTable(MetaParamGrid grid, EvalContext ctx);

    // Direct table over precomputed values (synthetic tables in tests/CLI).
    EvalTable(MetaParamGrid grid, std::vector<double> values);

    size_t size() const { return grid_.size(); }
    const MetaParamGrid& grid() const { return grid_; }

    double value(size_t index) const;          // charged lookup
    void materialize() const;                  // evaluate all entries (no charges)
    std::vector<double> values_snapshot() const;

    uint64_t queries() const { return queries_; }
    uint64_t evaluations() const { return evaluations_; }
    void reset_query_count() { queries_ = 0; }

private:
    double evaluate(size_t index) const;

    MetaParamGrid grid_;
    std::optional<EvalContext> ctx_;
    mutable std::vector<std::optional<double>> cache_;
    mutable std::atomic<uint64_t> queries_ = 0;
    mutable std::atomic<uint64_t> evaluations_ = 0;
};

struct GridSearchResult {
    size_t index = 0;
    double best = 0.0;
    uint64_t queries = 0; // always the table size
};

// Exhaustive argmax, ties to the lowest index.
GridSearchResult grid_search(const EvalTable& table);

struct UnimodalSearchResult {
    size_t index = 0;
    double best = 0.0;
    uint64_t queries = 0;         // hard-capped by 2*ceil(log2(n))
    bool audited = false;         // full-sweep audit was run
    bool audit_unimodal = false;  // strictly rises then strictly falls
};

// True iff the values strictly increase to a peak and strictly decrease after
// it (monotone tables count, with the peak at a boundary).
bool is_strictly_unimodal(std::span<const double> values);

// Bisection on the discrete derivative sign. Returns a local peak; on
// strictly unimodal tables this is the global argmax. With audit=true the
// full table is swept afterwards and flagged (test mode).
UnimodalSearchResult unimodal_search(const EvalTable& table, bool audit = false);

struct QuantumMetaOptResult {
    size_t index = 0;
    double best = 0.0;
    uint64_t oracle_calls = 0;
    uint64_t table_queries = 0;
    std::vector<std::pair<size_t, double>> threshold_trace;
};

// Extremum finding over the eval table in max mode (min-finder on negated
// values); each candidate verification charges one table query.
QuantumMetaOptResult quantum_meta_opt(const EvalTable& table, Rng& rng, QueryLedger& ledger,
                                      const DhOptions& options = {});

// Uniform superposition over (k, eval-bin) pairs, the small-scale metalearning
// state: rank(k, b) = k * bins + b with b = bin(eval(k)).
struct SuperposedMetaState {
    StateVector state;
    size_t bins = 0;
    size_t grid_size = 0;

    uint64_t rank_of(size_t k, size_t bin) const { return k * bins + bin; }
    std::pair<size_t, size_t> split_rank(uint64_t rank) const {
        return {static_cast<size_t>(rank / bins), static_cast<size_t>(rank % bins)};
    }
};

size_t eval_bin(double value, size_t bins);

SuperposedMetaState build_superposed_state(const EvalTable& table, size_t bins = 16);

// Preimage of a bin: every k whose eval falls in it.
std::vector<size_t> bin_preimage(const EvalTable& table, size_t bins, size_t bin);

} // namespace qrl
