#include "qrl/metalearn.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qrl {

void MetaParamGrid::validate() const {
    if (gamma_values.empty() || eta_values.empty())
        throw std::invalid_argument("MetaParamGrid: axes must be non-empty");
    for (double v : gamma_values)
        if (v < 0.0 || v > 1.0) throw std::invalid_argument("MetaParamGrid: gamma outside [0,1]");
    for (double v : eta_values)
        if (v < 0.0 || v > 1.0) throw std::invalid_argument("MetaParamGrid: eta outside [0,1]");
}

std::pair<double, double> MetaParamGrid::config_at(size_t index) const {
    if (index >= size()) throw std::out_of_range("MetaParamGrid: index out of range");
    return {gamma_values[index / eta_values.size()], eta_values[index % eta_values.size()]};
}

std::string MetaParamGrid::label_at(size_t index) const {
    auto [gamma, eta] = config_at(index);
    std::ostringstream os;
    os.precision(12);
    os << "gamma=" << gamma << ";eta=" << eta;
    return os.str();
}

void EvalContext::validate() const {
    if (spec == nullptr) throw std::invalid_argument("EvalContext: missing environment");
    if (train_epochs < 0) throw std::invalid_argument("EvalContext: train_epochs must be >= 0");
    if (eval_epochs <= 0) throw std::invalid_argument("EvalContext: eval_epochs must be positive");
    if (replicates <= 0) throw std::invalid_argument("EvalContext: replicates must be positive");
}

double eval_config(double gamma, double eta, const EvalContext& ctx, size_t grid_index) {
    ctx.validate();
    const EnvSpec& spec = *ctx.spec;
    double total = 0.0;
    for (int rep = 0; rep < ctx.replicates; ++rep) {
        Rng rng(derive_seed(ctx.policy_seed, grid_index, static_cast<uint64_t>(rep)));
        PSAgent agent(spec.action_count(), gamma, eta);
        for (int e = 0; e < ctx.train_epochs; ++e) {
            const EpochRecord rec = play_epoch(spec, agent, rng);
            agent.update(rec.trace, rec.reward);
        }
        int rewards = 0;
        for (int e = 0; e < ctx.eval_epochs; ++e) {
            const EpochRecord rec = play_epoch(spec, agent, rng); // learning frozen
            rewards += rec.reward;
        }
        total += static_cast<double>(rewards) / static_cast<double>(ctx.eval_epochs);
    }
    return total / static_cast<double>(ctx.replicates);
}

EvalTable::EvalTable(MetaParamGrid grid, EvalContext ctx) : grid_(std::move(grid)), ctx_(ctx) {
    grid_.validate();
    ctx.validate();
    cache_.resize(grid_.size());
}

EvalTable::EvalTable(MetaParamGrid grid, std::vector<double> values) : grid_(std::move(grid)) {
    grid_.validate();
    if (values.size() != grid_.size())
        throw std::invalid_argument("EvalTable: values size does not match grid");
    cache_.resize(values.size());
    for (size_t i = 0; i < values.size(); ++i) cache_[i] = values[i];
}

double EvalTable::evaluate(size_t index) const {
    if (index >= cache_.size()) throw std::out_of_range("EvalTable: index out of range");
    if (!cache_[index]) {
        auto [gamma, eta] = grid_.config_at(index);
        cache_[index] = eval_config(gamma, eta, *ctx_, index);
        evaluations_ += 1;
    }
    return *cache_[index];
}

double EvalTable::value(size_t index) const {
    queries_ += 1;
    return evaluate(index);
}

void EvalTable::materialize() const {
    for (size_t i = 0; i < cache_.size(); ++i) evaluate(i);
}

std::vector<double> EvalTable::values_snapshot() const {
    materialize();
    std::vector<double> out(cache_.size());
    for (size_t i = 0; i < cache_.size(); ++i) out[i] = *cache_[i];
    return out;
}

GridSearchResult grid_search(const EvalTable& table) {
    if (table.size() == 0) throw std::invalid_argument("grid_search: empty table");
    GridSearchResult res;
    res.best = table.value(0);
    res.queries = 1;
    for (size_t i = 1; i < table.size(); ++i) {
        const double v = table.value(i);
        res.queries += 1;
        if (v > res.best) {
            res.best = v;
            res.index = i;
        }
    }
    return res;
}

bool is_strictly_unimodal(std::span<const double> values) {
    size_t i = 0;
    while (i + 1 < values.size() && values[i] < values[i + 1]) ++i;
    while (i + 1 < values.size() && values[i] > values[i + 1]) ++i;
    return i + 1 == values.size() || values.empty();
}

UnimodalSearchResult unimodal_search(const EvalTable& table, bool audit) {
    const size_t n = table.size();
    if (n == 0) throw std::invalid_argument("unimodal_search: empty table");

    UnimodalSearchResult res;
    size_t lo = 0, hi = n - 1;
    while (lo < hi) {
        const size_t mid = lo + (hi - lo) / 2;
        const double left = table.value(mid);
        const double right = table.value(mid + 1);
        res.queries += 2;
        if (left < right)
            lo = mid + 1;
        else
            hi = mid;
    }
    res.index = lo;
    res.best = table.value(res.index);

    if (audit) {
        res.audited = true;
        res.audit_unimodal = is_strictly_unimodal(table.values_snapshot());
    }
    return res;
}

QuantumMetaOptResult quantum_meta_opt(const EvalTable& table, Rng& rng, QueryLedger& ledger,
                                      const DhOptions& options) {
    // The simulator needs the whole table to realize the oracle; query
    // accounting charges only what the algorithm itself consumes.
    const std::vector<double> values = table.values_snapshot();
    std::vector<double> negated(values.size());
    for (size_t i = 0; i < values.size(); ++i) negated[i] = -values[i];

    const DhResult dh = dh_extremum(negated, ExtremumMode::minimize, rng, ledger, options);

    QuantumMetaOptResult res;
    res.index = dh.index;
    res.best = table.value(dh.index);
    res.oracle_calls = dh.calls;
    // one charged evaluation per verified candidate plus the initial threshold
    res.table_queries = dh.verifications + 1;
    for (const auto& [idx, v] : dh.threshold_trace) res.threshold_trace.emplace_back(idx, -v);
    return res;
}

size_t eval_bin(double value, size_t bins) {
    if (bins == 0) throw std::invalid_argument("eval_bin: bins must be positive");
    const double clamped = std::clamp(value, 0.0, 1.0);
    const size_t bin = static_cast<size_t>(clamped * static_cast<double>(bins));
    return std::min(bin, bins - 1);
}

SuperposedMetaState build_superposed_state(const EvalTable& table, size_t bins) {
    const size_t n = table.size();
    if (bins == 0) throw std::invalid_argument("build_superposed_state: bins must be positive");
    if (n * bins > kEnumerationGuard)
        throw std::length_error("build_superposed_state: state exceeds enumeration guard");

    SuperposedMetaState meta;
    meta.bins = bins;
    meta.grid_size = n;
    meta.state = StateVector(n * bins);
    const std::vector<double> values = table.values_snapshot();
    const double amp = 1.0 / std::sqrt(static_cast<double>(n));
    for (size_t k = 0; k < n; ++k)
        meta.state[meta.rank_of(k, eval_bin(values[k], bins))] = amp;
    return meta;
}

std::vector<size_t> bin_preimage(const EvalTable& table, size_t bins, size_t bin) {
    std::vector<size_t> out;
    const std::vector<double> values = table.values_snapshot();
    for (size_t k = 0; k < values.size(); ++k)
        if (eval_bin(values[k], bins) == bin) out.push_back(k);
    return out;
}

} // namespace qrl
