#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "qrl/metalearn.hpp"
#include "qrl/stats.hpp"

using namespace qrl;

namespace {

MetaParamGrid index_grid(size_t n) {
    // n synthetic configurations along the gamma axis
    MetaParamGrid grid;
    for (size_t i = 0; i < n; ++i)
        grid.gamma_values.push_back(static_cast<double>(i) / std::max<size_t>(1, n - 1));
    grid.eta_values = {1.0};
    return grid;
}

EvalTable synthetic_table(std::vector<double> values) {
    MetaParamGrid grid = index_grid(values.size());
    return EvalTable(std::move(grid), std::move(values));
}

std::vector<double> random_unimodal(Rng& rng, size_t n) {
    // strictly increasing to a random peak, strictly decreasing after
    const size_t peak = rng.uniform_int(n);
    std::vector<double> vals(n);
    double v = 0.5;
    for (size_t i = 0; i <= peak; ++i) {
        vals[i] = v;
        v += 0.01 + rng.uniform_double() * 0.1;
    }
    std::vector<double> right;
    v = vals[peak];
    for (size_t i = peak + 1; i < n; ++i) {
        v -= 0.01 + rng.uniform_double() * 0.1;
        vals[i] = v;
    }
    return vals;
}

} // namespace

TEST_CASE("grid flattening and validation") {
    MetaParamGrid grid{{0.0, 0.5, 1.0}, {0.25, 0.75}};
    CHECK(grid.size() == 6);
    CHECK(grid.config_at(0) == std::pair<double, double>{0.0, 0.25});
    CHECK(grid.config_at(3) == std::pair<double, double>{0.5, 0.75});
    CHECK(grid.label_at(5) == "gamma=1;eta=0.75");
    CHECK_THROWS_AS(grid.config_at(6), std::out_of_range);
    CHECK_THROWS_AS((MetaParamGrid{{}, {0.5}}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((MetaParamGrid{{1.5}, {0.5}}.validate()), std::invalid_argument);
}

TEST_CASE("eval_config is deterministic under the seed policy") {
    const EnvSpec spec = make_reference_maze();
    EvalContext ctx;
    ctx.spec = &spec;
    ctx.train_epochs = 20;
    ctx.eval_epochs = 20;
    ctx.replicates = 8;
    ctx.policy_seed = 99;

    const double a = eval_config(0.1, 0.8, ctx, 3);
    const double b = eval_config(0.1, 0.8, ctx, 3);
    CHECK(a == b); // bit identical

    // the seed policy separates grid indices and replicates
    CHECK(derive_seed(ctx.policy_seed, 3, 0) != derive_seed(ctx.policy_seed, 4, 0));
    CHECK(derive_seed(ctx.policy_seed, 3, 0) != derive_seed(ctx.policy_seed, 3, 1));
}

TEST_CASE("zero training evaluates at the uniform-agent baseline") {
    const EnvSpec spec = make_reference_maze();
    EvalContext ctx;
    ctx.spec = &spec;
    ctx.train_epochs = 0;
    ctx.eval_epochs = 50;
    ctx.replicates = 32;
    ctx.policy_seed = 7;

    const double v = eval_config(0.3, 0.7, ctx, 0);
    // 1600 Bernoulli(1/8) samples: 4 sigma is about 0.033
    CHECK(std::abs(v - 0.125) < 0.035);
}

TEST_CASE("full forgetting evaluates near the uniform baseline") {
    const EnvSpec spec = make_reference_maze();
    EvalContext ctx;
    ctx.spec = &spec;
    ctx.train_epochs = 50;
    ctx.eval_epochs = 50;
    ctx.replicates = 32;
    ctx.policy_seed = 7;

    const double v = eval_config(1.0, 0.5, ctx, 1);
    CHECK(std::abs(v - 0.125) < 0.05);
}

TEST_CASE("eval table caching and query accounting") {
    EvalTable table = synthetic_table({0.1, 0.9, 0.3});
    CHECK(table.queries() == 0);
    CHECK(table.value(1) == doctest::Approx(0.9));
    CHECK(table.value(1) == doctest::Approx(0.9));
    CHECK(table.queries() == 2);
}

TEST_CASE("grid search examples") {
    {
        EvalTable table = synthetic_table({0.1, 0.9, 0.3});
        const GridSearchResult res = grid_search(table);
        CHECK(res.index == 1);
        CHECK(res.best == doctest::Approx(0.9));
        CHECK(res.queries == 3);
    }
    {
        EvalTable table = synthetic_table({0.4, 0.4, 0.4, 0.4});
        CHECK(grid_search(table).index == 0); // ties to the lowest index
    }
}

TEST_CASE("unimodal search on synthetic tables") {
    SUBCASE("peak at 9 of 16 within the query cap") {
        std::vector<double> vals(16);
        for (size_t i = 0; i < 16; ++i)
            vals[i] = 1.0 - 0.05 * std::abs(static_cast<double>(i) - 9.0);
        EvalTable table = synthetic_table(vals);
        const UnimodalSearchResult res = unimodal_search(table);
        CHECK(res.index == 9);
        CHECK(res.queries <= 8); // 2 * log2(16)
    }
    SUBCASE("monotone increasing peaks at the last index") {
        std::vector<double> vals;
        for (int i = 0; i < 13; ++i) vals.push_back(0.05 * i);
        EvalTable table = synthetic_table(vals);
        CHECK(unimodal_search(table).index == 12);
    }
    SUBCASE("monotone decreasing peaks at index 0") {
        std::vector<double> vals;
        for (int i = 0; i < 13; ++i) vals.push_back(1.0 - 0.05 * i);
        EvalTable table = synthetic_table(vals);
        CHECK(unimodal_search(table).index == 0);
    }
}

TEST_CASE("unimodal search equals grid search on audited tables, within the log cap") {
    Rng rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        const size_t n = 2 + rng.uniform_int(63);
        const std::vector<double> vals = random_unimodal(rng, n);
        REQUIRE(is_strictly_unimodal(vals));

        EvalTable table = synthetic_table(vals);
        const UnimodalSearchResult u = unimodal_search(table, true);
        CHECK(u.audited);
        CHECK(u.audit_unimodal);
        CHECK(u.queries <= 2 * static_cast<uint64_t>(std::ceil(std::log2(static_cast<double>(n)))));

        EvalTable fresh = synthetic_table(vals);
        CHECK(u.index == grid_search(fresh).index);
    }
}

TEST_CASE("non-unimodal tables are flagged but still yield a local peak") {
    const std::vector<double> twin_peaks = {0.1, 0.8, 0.2, 0.2, 0.9, 0.1};
    REQUIRE_FALSE(is_strictly_unimodal(twin_peaks));
    EvalTable table = synthetic_table(twin_peaks);
    const UnimodalSearchResult res = unimodal_search(table, true);
    CHECK(res.audited);
    CHECK_FALSE(res.audit_unimodal);
    // local peak: no strictly better neighbor
    if (res.index > 0) CHECK(twin_peaks[res.index] >= twin_peaks[res.index - 1]);
    if (res.index + 1 < twin_peaks.size()) CHECK(twin_peaks[res.index] >= twin_peaks[res.index + 1]);
}

TEST_CASE("empirical gamma curve on the reference maze passes the audit") {
    const EnvSpec spec = make_reference_maze();
    EvalContext ctx;
    ctx.spec = &spec;
    ctx.train_epochs = 60;
    ctx.eval_epochs = 60;
    ctx.replicates = 96;
    ctx.policy_seed = 4242;

    MetaParamGrid grid{{0.0, 0.05, 0.1, 0.15, 0.2, 0.3}, {1.0}};
    EvalTable table(grid, ctx);

    // forgetting hurts in a stationary maze: the curve falls away from gamma=0
    const std::vector<double> curve = table.values_snapshot();
    CHECK(is_strictly_unimodal(curve));

    const UnimodalSearchResult u = unimodal_search(table, true);
    CHECK(u.audit_unimodal);
    EvalTable fresh(grid, ctx);
    CHECK(u.index == grid_search(fresh).index);
}

TEST_CASE("quantum_meta_opt exhausts tiny tables") {
    EvalTable table = synthetic_table({0.2, 0.7, 0.4});
    for (uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(derive_seed(21, seed));
        QueryLedger ledger(0);
        const QuantumMetaOptResult res = quantum_meta_opt(table, rng, ledger);
        CHECK(res.index == 1);
        CHECK(res.best == doctest::Approx(0.7));
    }
}

TEST_CASE("quantum_meta_opt on permutation tables: argmax rate, monotone threshold") {
    const size_t n = 64;
    int hits = 0;
    const int seeds = 200;
    for (int s = 0; s < seeds; ++s) {
        Rng rng(derive_seed(22, static_cast<uint64_t>(s)));
        std::vector<double> vals(n);
        for (size_t i = 0; i < n; ++i) vals[i] = static_cast<double>(i) / (n - 1);
        for (size_t i = n - 1; i > 0; --i) std::swap(vals[i], vals[rng.uniform_int(i + 1)]);

        EvalTable table = synthetic_table(vals);
        QueryLedger ledger(0);
        const QuantumMetaOptResult res = quantum_meta_opt(table, rng, ledger);

        // the threshold only ever improves, so the result cannot fall below
        // the initial random threshold
        for (size_t i = 1; i < res.threshold_trace.size(); ++i)
            CHECK(res.threshold_trace[i].second > res.threshold_trace[i - 1].second);
        CHECK(res.best >= res.threshold_trace.front().second);
        CHECK(res.oracle_calls <=
              static_cast<uint64_t>(std::ceil(22.5 * std::sqrt(static_cast<double>(n)))));

        const size_t argmax =
            static_cast<size_t>(std::max_element(vals.begin(), vals.end()) - vals.begin());
        if (res.index == argmax) ++hits;
    }
    CHECK(static_cast<double>(hits) / seeds >= 0.5);
}

TEST_CASE("superposed metalearning state") {
    SUBCASE("constant table occupies a single eval bin uniformly") {
        EvalTable table = synthetic_table(std::vector<double>(8, 0.5));
        const SuperposedMetaState meta = build_superposed_state(table, 16);
        const size_t bin = eval_bin(0.5, 16);
        for (size_t k = 0; k < 8; ++k)
            CHECK(std::norm(meta.state[meta.rank_of(k, bin)]) == doctest::Approx(1.0 / 8.0));
        CHECK(meta.state.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("measuring the k register is uniform within 3 sigma") {
        EvalTable table = synthetic_table({0.1, 0.4, 0.6, 0.9});
        const SuperposedMetaState meta = build_superposed_state(table, 16);
        Rng rng(33);
        const int draws = 100000;
        std::vector<int> counts(4, 0);
        for (int i = 0; i < draws; ++i)
            counts[meta.split_rank(meta.state.measure(rng)).first] += 1;
        const double p = 0.25;
        const double sigma = std::sqrt(p * (1 - p) / draws);
        for (int c : counts)
            CHECK(std::abs(static_cast<double>(c) / draws - p) <= 3.0 * sigma);
    }
    SUBCASE("post-selecting the best bin collapses onto the argmax set") {
        EvalTable table = synthetic_table({0.30, 0.91, 0.55, 0.92, 0.91999});
        const size_t bins = 16;
        size_t best_bin = 0;
        for (double v : table.values_snapshot()) best_bin = std::max(best_bin, eval_bin(v, bins));
        const std::vector<size_t> pre = bin_preimage(table, bins, best_bin);
        // 0.91, 0.92 and 0.91999 share the top bin; ties stay in superposition
        CHECK(pre == std::vector<size_t>{1, 3, 4});
    }
    SUBCASE("state size guard") {
        EvalTable table = synthetic_table(std::vector<double>(4, 0.5));
        CHECK_THROWS_AS(build_superposed_state(table, kEnumerationGuard), std::length_error);
    }
}
