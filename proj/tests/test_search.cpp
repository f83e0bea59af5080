#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "qrl/agent.hpp"
#include "qrl/search.hpp"

using namespace qrl;

namespace {

std::vector<double> shuffled_values(size_t n, Rng& rng) {
    std::vector<double> vals(n);
    for (size_t i = 0; i < n; ++i) vals[i] = static_cast<double>(i);
    for (size_t i = n - 1; i > 0; --i) std::swap(vals[i], vals[rng.uniform_int(i + 1)]);
    return vals;
}

} // namespace

TEST_CASE("bbht succeeds immediately when everything is marked") {
    const PhaseOracle oracle(8, {0, 1, 2, 3, 4, 5, 6, 7});
    Rng rng(1);
    QueryLedger ledger(3);
    const BbhtResult res = bbht_search(oracle, rng, ledger, {});
    REQUIRE(res.found.has_value());
    CHECK(res.rounds == 1);
    CHECK(res.calls == 1); // first round draws j = 0, one verification call
    CHECK(ledger.interaction_steps() == 6);
}

TEST_CASE("bbht with no solutions spends exactly the cap") {
    const PhaseOracle oracle(4, {});
    Rng rng(2);
    QueryLedger ledger(2);
    const BbhtResult res = bbht_search(oracle, rng, ledger, {});
    CHECK_FALSE(res.found.has_value());
    const uint64_t cap = static_cast<uint64_t>(std::ceil(30.0 * std::sqrt(4.0)));
    CHECK(res.calls == cap);
    CHECK(ledger.oracle_calls() == cap);
    ledger.ensure_consistent();
}

TEST_CASE("bbht external call cap is honored exactly") {
    const PhaseOracle oracle(16, {});
    Rng rng(3);
    QueryLedger ledger(0);
    BbhtOptions opts;
    opts.max_calls = 7;
    const BbhtResult res = bbht_search(oracle, rng, ledger, opts);
    CHECK_FALSE(res.found.has_value());
    CHECK(res.calls == 7);
}

TEST_CASE("bbht on the 1x8 corridor stays quadratically cheap") {
    const EnvSpec spec = make_low_connectivity_maze(7);
    const PhaseOracle oracle = PhaseOracle::from_spec(spec);
    const double sqrt_n = std::sqrt(static_cast<double>(oracle.space()));

    const int seeds = 500;
    double total_calls = 0.0;
    for (int s = 0; s < seeds; ++s) {
        Rng rng(derive_seed(7007, static_cast<uint64_t>(s)));
        QueryLedger ledger(7);
        const BbhtResult res = bbht_search(oracle, rng, ledger, {});
        REQUIRE(res.found.has_value());
        CHECK(oracle.is_marked(*res.found));
        ledger.ensure_consistent();
        CHECK(ledger.interaction_steps() == 14 * res.calls);
        total_calls += static_cast<double>(res.calls);
    }
    const double mean_calls = total_calls / seeds;
    CHECK(mean_calls <= 8.0 * sqrt_n);

    // classical benchmark: uniform-random trials to first reward average near N
    const RandomAgent agent{4};
    const int classical_seeds = 200;
    double total_trials = 0.0;
    for (int s = 0; s < classical_seeds; ++s) {
        Rng rng(derive_seed(7008, static_cast<uint64_t>(s)));
        uint64_t trials = 0;
        while (true) {
            ++trials;
            if (play_epoch(spec, agent, rng).reward) break;
        }
        total_trials += static_cast<double>(trials);
    }
    const double mean_trials = total_trials / classical_seeds;
    // quadratic separation: the quantum search is far below the classical mean
    CHECK(mean_trials > 10.0 * mean_calls);
}

TEST_CASE("dh_extremum finds the minimum of a small table every time") {
    const std::vector<double> table = {3.0, 1.0, 2.0};
    for (uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(derive_seed(11, seed));
        QueryLedger ledger(0);
        const DhResult res = dh_extremum(table, ExtremumMode::minimize, rng, ledger, {});
        CHECK(res.index == 1);
    }
}

TEST_CASE("dh_extremum on a constant table keeps the initial pick") {
    const std::vector<double> table(8, 5.0);
    for (uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(derive_seed(13, seed));
        QueryLedger ledger(0);
        const DhResult res = dh_extremum(table, ExtremumMode::minimize, rng, ledger, {});
        CHECK(res.threshold_trace.size() == 1); // no strict improvement ever fires
        CHECK(res.index == res.threshold_trace.front().first);
    }
}

TEST_CASE("dh_extremum on random permutations: argmin rate and budget") {
    const size_t n = 64;
    const uint64_t budget = static_cast<uint64_t>(std::ceil(22.5 * std::sqrt(static_cast<double>(n))));
    int hits = 0;
    const int seeds = 200;
    for (int s = 0; s < seeds; ++s) {
        Rng rng(derive_seed(17, static_cast<uint64_t>(s)));
        const std::vector<double> vals = shuffled_values(n, rng);
        QueryLedger ledger(0);
        const DhResult res = dh_extremum(vals, ExtremumMode::minimize, rng, ledger, {});
        CHECK(res.calls <= budget);

        // threshold never worsens within a run
        for (size_t i = 1; i < res.threshold_trace.size(); ++i)
            CHECK(res.threshold_trace[i].second < res.threshold_trace[i - 1].second);

        const size_t argmin = static_cast<size_t>(
            std::min_element(vals.begin(), vals.end()) - vals.begin());
        if (res.index == argmin) ++hits;
    }
    CHECK(static_cast<double>(hits) / seeds >= 0.5);
}

TEST_CASE("dh_extremum maximize mode and threshold monotonicity") {
    Rng rng(23);
    const std::vector<double> vals = shuffled_values(32, rng);
    QueryLedger ledger(0);
    const DhResult res = dh_extremum(vals, ExtremumMode::maximize, rng, ledger, {});
    for (size_t i = 1; i < res.threshold_trace.size(); ++i)
        CHECK(res.threshold_trace[i].second > res.threshold_trace[i - 1].second);
    // the returned value never falls below the initial random threshold
    CHECK(vals[res.index] >= res.threshold_trace.front().second);
}

TEST_CASE("dh_extremum rejects empty tables") {
    Rng rng(1);
    QueryLedger ledger(0);
    CHECK_THROWS_AS(dh_extremum(std::vector<double>{}, ExtremumMode::minimize, rng, ledger, {}),
                    std::invalid_argument);
}

TEST_CASE("ledger accounting identity") {
    QueryLedger ledger(5);
    ledger.charge_oracle_call();
    ledger.charge_oracle_call();
    ledger.charge_classical_epoch();
    CHECK(ledger.oracle_calls() == 2);
    CHECK(ledger.classical_epochs() == 1);
    CHECK(ledger.interaction_steps() == 2 * 5 * 2 + 5 * 1);
    CHECK(ledger.consistent());
    CHECK_NOTHROW(ledger.ensure_consistent());
}
