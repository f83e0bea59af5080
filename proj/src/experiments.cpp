#include "qrl/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "qrl/hybrid.hpp"
#include "qrl/metalearn.hpp"
#include "qrl/oraculize.hpp"
#include "qrl/stats.hpp"

namespace qrl {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string sequence_string(const EnvSpec& spec, std::span<const int> seq) {
    std::string out;
    for (int a : seq) out += spec.alphabets().actions.at(static_cast<size_t>(a));
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content,
                std::vector<std::string>& written) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << content;
    written.push_back(path.string());
}

struct OutputSink {
    std::filesystem::path dir;
    bool enabled = false;
    std::vector<std::string>* written = nullptr;

    void emit(const std::string& name, const std::string& content) const {
        if (enabled) write_file(dir / name, content, *written);
    }
};

OutputSink make_sink(const ExperimentConfig& config, RunReport& report, bool required) {
    OutputSink sink;
    if (config.out_dir.empty()) {
        if (required) throw ConfigError("out", "missing output directory");
        return sink;
    }
    sink.dir = config.out_dir;
    std::filesystem::create_directories(sink.dir);
    sink.enabled = true;
    sink.written = &report.files_written;
    return sink;
}

int run_verify_oracle(const ExperimentConfig& config, RunReport& report, std::ostream& log) {
    const EnvSpec spec = load_maze_file(config.maze_path);
    const uint64_t n = spec.sequence_space();
    const PhaseOracle direct = PhaseOracle::from_spec(spec);
    const uint64_t k = direct.marked_count();
    log << "maze " << config.maze_path << ": N=" << n << " k=" << k
        << " k/N=" << fmt(static_cast<double>(k) / static_cast<double>(n)) << "\n";

    const OracularizedOracle oracle = OracularizedOracle::build(spec);

    std::ostringstream branches;
    branches << "branch,sequence,phase,restored\n";
    uint64_t agree = 0;
    for (const BranchReport& b : oracle.branches()) {
        const std::vector<int> seq = decode_sequence(b.rank, spec.action_count(), spec.episode_length());
        const int expected = direct.is_marked(b.rank) ? -1 : 1;
        const bool ok = b.phase == expected && b.restored;
        if (ok) ++agree;
        branches << b.rank << ',' << sequence_string(spec, seq) << ',' << (b.phase > 0 ? "+1" : "-1")
                 << ',' << (b.restored ? 1 : 0) << "\n";
        log << "branch " << sequence_string(spec, seq) << " phase " << (b.phase > 0 ? "+1" : "-1")
            << (ok ? "" : "  MISMATCH") << "\n";
    }

    // probe application to show the per-call cost accounting
    QueryLedger ledger(static_cast<uint32_t>(spec.episode_length()));
    StateVector probe = StateVector::uniform(oracle.space());
    oracle.apply(probe, ledger);

    const bool equivalent = agree == n;
    std::ostringstream sum;
    sum << (equivalent ? "EQUIVALENT" : "MISMATCH") << ", " << agree << "/" << n << " branches, 2M="
        << 2 * spec.episode_length() << " steps/call";
    report.summary = sum.str();
    log << report.summary << "\n";
    log << "ledger after probe call: oracle_calls=" << ledger.oracle_calls()
        << " interaction_steps=" << ledger.interaction_steps() << "\n";

    OutputSink sink = make_sink(config, report, false);
    sink.emit("branches.csv", branches.str());
    std::ostringstream s;
    s << "metric,value\n";
    s << "space," << n << "\n";
    s << "marked," << k << "\n";
    s << "branches_equivalent," << agree << "\n";
    s << "steps_per_call," << 2 * spec.episode_length() << "\n";
    s << "verdict," << (equivalent ? "EQUIVALENT" : "MISMATCH") << "\n";
    sink.emit("summary.csv", s.str());
    sink.emit("config_echo.txt", config.echo());

    return equivalent ? 0 : 2;
}

int run_explore(const ExperimentConfig& config, RunReport& report, std::ostream& log) {
    const EnvSpec spec = load_maze_file(config.maze_path);
    const OracularizedOracle oracle = OracularizedOracle::build(spec);

    struct Row {
        uint64_t seed_index = 0;
        bool found = false;
        uint64_t oracle_calls = 0;
        uint64_t interaction_steps = 0;
        std::string sequence;
    };
    std::vector<Row> rows(config.seeds);
    parallel_for(config.seeds, config.workers, [&](size_t i) {
        Rng rng(derive_seed(config.master_seed, i));
        HybridAgent agent(PSAgent(spec.action_count(), config.gamma, config.eta),
                          config.budget_steps, spec.episode_length());
        explore(agent, spec, oracle, rng);
        Row& r = rows[i];
        r.seed_index = i;
        r.found = !agent.found().empty();
        r.oracle_calls = agent.ledger().oracle_calls();
        r.interaction_steps = agent.ledger().interaction_steps();
        if (r.found) r.sequence = sequence_string(spec, agent.found().front().sequence);
    });

    std::ostringstream raw;
    raw << "seed,found,oracle_calls,interaction_steps,sequence\n";
    std::vector<double> calls, found;
    for (const Row& r : rows) {
        raw << r.seed_index << ',' << (r.found ? 1 : 0) << ',' << r.oracle_calls << ','
            << r.interaction_steps << ',' << r.sequence << "\n";
        calls.push_back(static_cast<double>(r.oracle_calls));
        found.push_back(r.found ? 1.0 : 0.0);
    }
    const MeanStats calls_stats = mean_stats(calls);
    const MeanStats found_stats = mean_stats(found);

    std::ostringstream s;
    s << "metric,value\n";
    s << "seeds," << config.seeds << "\n";
    s << "find_frequency," << fmt(found_stats.mean) << "\n";
    s << "mean_oracle_calls," << fmt(calls_stats.mean) << "\n";
    s << "budget_steps," << config.budget_steps << "\n";

    std::ostringstream sum;
    sum << "explore: find_frequency=" << fmt(found_stats.mean)
        << " mean_oracle_calls=" << fmt(calls_stats.mean) << " over " << config.seeds << " seeds";
    report.summary = sum.str();
    log << report.summary << "\n";

    OutputSink sink = make_sink(config, report, true);
    sink.emit("raw.csv", raw.str());
    sink.emit("summary.csv", s.str());
    sink.emit("config_echo.txt", config.echo());
    return 0;
}

int run_learn(const ExperimentConfig& config, RunReport& report, std::ostream& log) {
    const EnvSpec spec = load_maze_file(config.maze_path);
    const OracularizedOracle oracle = OracularizedOracle::build(spec);
    const uint64_t m = static_cast<uint64_t>(spec.episode_length());

    CompareConfig cc;
    cc.gamma = config.gamma;
    cc.eta = config.eta;
    cc.replay_count = config.replay_count;
    cc.total_steps = config.budget_steps;
    cc.tested_epochs = config.tested_epochs;
    cc.exploration_steps = config.exploration_steps;
    if (cc.exploration_steps == 0) {
        // default split: half the budget, rounded down to whole oracle calls
        cc.exploration_steps = (config.budget_steps / 2) / (2 * m) * (2 * m);
    }
    cc.validate(spec);

    std::vector<ComparePair> pairs(config.seeds);
    parallel_for(config.seeds, config.workers, [&](size_t i) {
        pairs[i] = compare_budgeted(spec, oracle, cc, derive_seed(config.master_seed, i));
    });

    std::ostringstream raw;
    raw << "seed,arm,merit,oracle_calls,interaction_steps\n";
    std::vector<double> classical, hybrid;
    for (size_t i = 0; i < pairs.size(); ++i) {
        const ArmOutcome& c = pairs[i].classical_arm;
        const ArmOutcome& h = pairs[i].hybrid_arm;
        raw << i << ",classical," << fmt(c.merit) << ',' << c.oracle_calls << ','
            << c.interaction_steps << "\n";
        raw << i << ",hybrid," << fmt(h.merit) << ',' << h.oracle_calls << ','
            << h.interaction_steps << "\n";
        classical.push_back(c.merit);
        hybrid.push_back(h.merit);
    }
    const MeanStats cs = mean_stats(classical);
    const MeanStats hs = mean_stats(hybrid);
    const bool disjoint_ci = cs.ci_hi < hs.ci_lo || hs.ci_hi < cs.ci_lo;

    std::ostringstream s;
    s << "metric,value\n";
    s << "seeds," << config.seeds << "\n";
    s << "classical_mean," << fmt(cs.mean) << "\n";
    s << "classical_stderr," << fmt(cs.std_error) << "\n";
    s << "classical_ci_lo," << fmt(cs.ci_lo) << "\n";
    s << "classical_ci_hi," << fmt(cs.ci_hi) << "\n";
    s << "hybrid_mean," << fmt(hs.mean) << "\n";
    s << "hybrid_stderr," << fmt(hs.std_error) << "\n";
    s << "hybrid_ci_lo," << fmt(hs.ci_lo) << "\n";
    s << "hybrid_ci_hi," << fmt(hs.ci_hi) << "\n";
    s << "merit_ratio," << fmt(cs.mean > 0 ? hs.mean / cs.mean : INFINITY) << "\n";
    s << "ci_disjoint," << (disjoint_ci ? 1 : 0) << "\n";
    s << "budget_steps," << config.budget_steps << "\n";
    s << "exploration_steps," << cc.exploration_steps << "\n";
    s << "tested_epochs," << config.tested_epochs << "\n";

    std::ostringstream sum;
    sum << "learn: classical=" << fmt(cs.mean) << " hybrid=" << fmt(hs.mean) << " over "
        << config.seeds << " seeds";
    report.summary = sum.str();
    log << report.summary << "\n";

    OutputSink sink = make_sink(config, report, true);
    sink.emit("raw.csv", raw.str());
    sink.emit("summary.csv", s.str());
    sink.emit("config_echo.txt", config.echo());
    return 0;
}

int run_metalearn(const ExperimentConfig& config, RunReport& report, std::ostream& log) {
    const EnvSpec spec = load_maze_file(config.maze_path);
    MetaParamGrid grid{config.gamma_values, config.eta_values};
    grid.validate();

    EvalContext ctx;
    ctx.spec = &spec;
    ctx.train_epochs = config.train_epochs;
    ctx.eval_epochs = config.eval_epochs;
    ctx.replicates = config.replicates;
    ctx.policy_seed = config.master_seed;
    EvalTable table(grid, ctx);
    table.materialize();

    std::ostringstream table_csv;
    table_csv << "index,gamma,eta,eval\n";
    const std::vector<double> values = table.values_snapshot();
    for (size_t i = 0; i < values.size(); ++i) {
        auto [g, e] = grid.config_at(i);
        table_csv << i << ',' << fmt(g) << ',' << fmt(e) << ',' << fmt(values[i]) << "\n";
    }

    std::ostringstream raw;
    raw << "method,best_k,best_eval,queries,oracle_calls\n";
    std::ostringstream sum;
    if (config.method == MetaMethod::grid) {
        table.reset_query_count();
        const GridSearchResult res = grid_search(table);
        raw << "grid," << grid.label_at(res.index) << ',' << fmt(res.best) << ',' << res.queries
            << ",0\n";
        sum << "metalearn grid: best " << grid.label_at(res.index) << " eval " << fmt(res.best);
    } else if (config.method == MetaMethod::unimodal) {
        table.reset_query_count();
        const UnimodalSearchResult res = unimodal_search(table, true);
        raw << "unimodal," << grid.label_at(res.index) << ',' << fmt(res.best) << ',' << res.queries
            << ",0\n";
        sum << "metalearn unimodal: best " << grid.label_at(res.index) << " eval " << fmt(res.best)
            << (res.audit_unimodal ? " (audit: unimodal)" : " (audit: NOT unimodal)");
    } else {
        std::vector<QuantumMetaOptResult> results(config.seeds);
        parallel_for(config.seeds, config.workers, [&](size_t i) {
            Rng rng(derive_seed(config.master_seed, i));
            QueryLedger ledger(0); // abstract table oracle: query counting only
            results[i] = quantum_meta_opt(table, rng, ledger);
        });
        double best_seen = 0.0;
        size_t best_index = 0;
        for (const auto& r : results) {
            raw << "quantum," << grid.label_at(r.index) << ',' << fmt(r.best) << ','
                << r.table_queries << ',' << r.oracle_calls << "\n";
            if (r.best > best_seen) {
                best_seen = r.best;
                best_index = r.index;
            }
        }
        sum << "metalearn quantum: best " << grid.label_at(best_index) << " eval " << fmt(best_seen)
            << " over " << config.seeds << " seeds";
    }

    report.summary = sum.str();
    log << report.summary << "\n";

    OutputSink sink = make_sink(config, report, true);
    sink.emit("raw.csv", raw.str());
    sink.emit("eval_table.csv", table_csv.str());
    std::ostringstream s;
    s << "metric,value\n";
    s << "grid_size," << grid.size() << "\n";
    s << "evaluations," << table.evaluations() << "\n";
    s << "method," << to_string(config.method) << "\n";
    sink.emit("summary.csv", s.str());
    sink.emit("config_echo.txt", config.echo());
    return 0;
}

} // namespace

void parallel_for(size_t n, unsigned workers, const std::function<void(size_t)>& f) {
    if (n == 0) return;
    if (workers <= 1 || n == 1) {
        for (size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    const unsigned count = std::min<size_t>(workers, n);
    pool.reserve(count);
    for (unsigned w = 0; w < count; ++w) {
        pool.emplace_back([&]() {
            for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) f(i);
        });
    }
    for (auto& t : pool) t.join();
}

RunReport run_experiment(const ExperimentConfig& config, std::ostream& log) {
    RunReport report;
    try {
        config.validate();
        switch (config.kind) {
            case ExperimentKind::verify_oracle:
                report.exit_code = run_verify_oracle(config, report, log);
                break;
            case ExperimentKind::explore:
                report.exit_code = run_explore(config, report, log);
                break;
            case ExperimentKind::learn:
                report.exit_code = run_learn(config, report, log);
                break;
            case ExperimentKind::metalearn:
                report.exit_code = run_metalearn(config, report, log);
                break;
        }
    } catch (const OracleConstructionError& e) {
        report.exit_code = 2;
        report.failure = e.what();
        log << "verification failure: " << e.what() << "\n";
    } catch (const ConfigError& e) {
        report.exit_code = 1;
        report.failure = e.what();
        log << "validation failure: " << e.what() << "\n";
    } catch (const std::exception& e) {
        report.exit_code = 1;
        report.failure = e.what();
        log << "validation failure: " << e.what() << "\n";
    }
    return report;
}

} // namespace qrl
