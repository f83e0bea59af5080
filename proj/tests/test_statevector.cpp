#include <cmath>

#include "doctest.h"
#include "qrl/search.hpp"
#include "qrl/statevector.hpp"

using namespace qrl;

TEST_CASE("uniform and basis states are normalized") {
    CHECK(StateVector::uniform(16).norm() == doctest::Approx(1.0).epsilon(1e-14));
    const StateVector b = StateVector::basis(8, 5);
    CHECK(b.norm() == doctest::Approx(1.0));
    CHECK(b.probability(5) == doctest::Approx(1.0));
    CHECK_THROWS_AS(StateVector::basis(4, 4), std::invalid_argument);
}

TEST_CASE("phase oracle marks exactly the flagged ranks") {
    QueryLedger ledger(0);

    SUBCASE("empty predicate is the identity") {
        const PhaseOracle oracle(4, {});
        StateVector s = StateVector::uniform(4);
        const StateVector before = s;
        oracle.apply(s, ledger);
        for (size_t i = 0; i < 4; ++i) CHECK(s[i] == before[i]);
        CHECK(ledger.oracle_calls() == 1);
    }
    SUBCASE("marked basis state flips sign") {
        const PhaseOracle oracle(4, {2});
        StateVector s = StateVector::basis(4, 2);
        oracle.apply(s, ledger);
        CHECK(s[2].real() == doctest::Approx(-1.0));
    }
    SUBCASE("linearity on a two-branch superposition") {
        const PhaseOracle oracle(4, {0});
        StateVector s(4);
        s[0] = 1.0 / std::sqrt(2.0);
        s[1] = 1.0 / std::sqrt(2.0);
        oracle.apply(s, ledger);
        CHECK(s[0].real() == doctest::Approx(-1.0 / std::sqrt(2.0)));
        CHECK(s[1].real() == doctest::Approx(1.0 / std::sqrt(2.0)));
        CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("diffusion: uniform fixed point, involution, exact N=4 step") {
    SUBCASE("uniform state is fixed") {
        StateVector s = StateVector::uniform(8);
        diffusion(s);
        for (size_t i = 0; i < 8; ++i)
            CHECK(s[i].real() == doctest::Approx(1.0 / std::sqrt(8.0)).epsilon(1e-14));
    }
    SUBCASE("applying twice is the identity") {
        QueryLedger ledger(0);
        const PhaseOracle oracle(8, {3, 5});
        StateVector s = StateVector::uniform(8);
        oracle.apply(s, ledger);
        const StateVector before = s;
        diffusion(s);
        diffusion(s);
        for (size_t i = 0; i < 8; ++i) {
            CHECK(std::abs(s[i].real() - before[i].real()) < 1e-12);
            CHECK(std::abs(s[i].imag() - before[i].imag()) < 1e-12);
        }
    }
    SUBCASE("one oracle + diffusion concentrates N=4, k=1 exactly") {
        QueryLedger ledger(0);
        const PhaseOracle oracle(4, {1});
        StateVector s = StateVector::uniform(4);
        oracle.apply(s, ledger);
        diffusion(s);
        CHECK(s.probability(1) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("grover closed form values") {
    CHECK(grover_success_probability(0, 3, 12) == doctest::Approx(0.25)); // j=0 is k/N
    CHECK(grover_success_probability(1, 1, 4) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(grover_success_probability(3, 1, 16) == doctest::Approx(0.9613189697).epsilon(1e-9));
    CHECK(grover_success_probability(2, 2, 16) == doctest::Approx(121.0 / 128.0).epsilon(1e-12));
    CHECK(grover_success_probability(5, 0, 16) == 0.0);
    CHECK_THROWS_AS(grover_success_probability(1, 5, 4), std::invalid_argument);
}

TEST_CASE("optimal iteration counts") {
    CHECK(grover_optimal_iterations(1, 4) == 1);
    CHECK(grover_optimal_iterations(2, 16) == 2);
    CHECK(grover_optimal_iterations(4, 4) == 0); // k = N measures immediately
    CHECK_THROWS_AS(grover_optimal_iterations(0, 4), std::invalid_argument);
}

TEST_CASE("simulated marked mass tracks the closed form") {
    for (uint64_t n : {4ull, 16ull, 64ull, 256ull}) {
        for (uint64_t k : {uint64_t{1}, uint64_t{2}, n / 4}) {
            if (k == 0 || k > n) continue;
            std::vector<uint64_t> marked;
            for (uint64_t i = 0; i < k; ++i) marked.push_back(i * (n / k));
            const PhaseOracle oracle(n, marked);

            const double theta = std::asin(std::sqrt(static_cast<double>(k) / static_cast<double>(n)));
            const uint64_t j_max = 2 * static_cast<uint64_t>(std::ceil(M_PI / (4.0 * theta)));

            QueryLedger ledger(0);
            StateVector s = StateVector::uniform(n);
            CHECK(s.marked_mass(oracle.marked()) ==
                  doctest::Approx(grover_success_probability(0, k, n)).epsilon(1e-9));
            for (uint64_t j = 1; j <= j_max; ++j) {
                oracle.apply(s, ledger);
                diffusion(s);
                CHECK(std::abs(s.marked_mass(oracle.marked()) -
                               grover_success_probability(j, k, n)) < 1e-9);
                CHECK(std::abs(s.norm() - 1.0) < 1e-12);
            }
        }
    }
}

TEST_CASE("known-k search on N=4 always returns the marked item") {
    const PhaseOracle oracle(4, {3});
    for (uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(derive_seed(1, seed));
        QueryLedger ledger(2);
        const GroverResult res = grover_search_known_k(oracle, 1, rng, ledger);
        CHECK(res.marked);
        CHECK(res.outcome == 3);
        CHECK(res.iterations == 1);
        CHECK(ledger.oracle_calls() == 1);
        CHECK(ledger.interaction_steps() == 4);
    }
}

TEST_CASE("known-k search on the reference maze: formula and simulation agree") {
    const EnvSpec spec = make_reference_maze();
    const PhaseOracle oracle = PhaseOracle::from_spec(spec);
    REQUIRE(oracle.marked_count() == 2);

    const uint64_t j = grover_optimal_iterations(2, 16);
    CHECK(j == 2);
    const double expected = grover_success_probability(j, 2, 16);
    CHECK(expected == doctest::Approx(0.9453125).epsilon(1e-12));

    // simulated amplitude mass equals the closed form
    QueryLedger ledger(2);
    StateVector s = StateVector::uniform(16);
    for (uint64_t it = 0; it < j; ++it) {
        oracle.apply(s, ledger);
        diffusion(s);
    }
    CHECK(s.marked_mass(oracle.marked()) == doctest::Approx(expected).epsilon(1e-9));

    // sampled success frequency within 3 sigma of the closed form
    const int seeds = 2000;
    int hits = 0;
    for (int i = 0; i < seeds; ++i) {
        Rng rng(derive_seed(2, static_cast<uint64_t>(i)));
        QueryLedger run_ledger(2);
        hits += grover_search_known_k(oracle, 2, rng, run_ledger).marked;
    }
    const double freq = static_cast<double>(hits) / seeds;
    const double sigma = std::sqrt(expected * (1 - expected) / seeds);
    CHECK(std::abs(freq - expected) <= 3.0 * sigma);
}

TEST_CASE("known-k search edge cases") {
    const PhaseOracle all(4, {0, 1, 2, 3});
    Rng rng(9);
    QueryLedger ledger(1);
    const GroverResult res = grover_search_known_k(all, 4, rng, ledger);
    CHECK(res.iterations == 0);
    CHECK(res.marked);

    const PhaseOracle none(4, {});
    CHECK_THROWS_AS(grover_search_known_k(none, 0, rng, ledger), std::invalid_argument);
}

TEST_CASE("measurement of a basis state is deterministic") {
    const StateVector s = StateVector::basis(16, 11);
    Rng rng(4);
    for (int i = 0; i < 20; ++i) CHECK(s.measure(rng) == 11);
}

TEST_CASE("norm check flags drifted states") {
    StateVector s = StateVector::uniform(4);
    CHECK_NOTHROW(s.check_normalized());
    s[0] = 2.0;
    CHECK_THROWS_AS(s.check_normalized(), std::logic_error);
}
