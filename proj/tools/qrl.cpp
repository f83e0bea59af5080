// qrl - simulation lab for quantum-enhanced reinforcement learning.
//
// Subcommands: verify-oracle, explore, learn, metalearn. The learn and
// metalearn experiments read a key-value config file; explore and
// verify-oracle are driven from flags. Exit codes: 0 success, 1 validation
// failure, 2 verification failure.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qrl/config.hpp"
#include "qrl/experiments.hpp"

namespace {

struct CommonFlags {
    std::optional<std::string> out;
    std::optional<unsigned> workers;
    std::optional<uint64_t> master_seed;

    void attach(CLI::App* cmd) {
        cmd->add_option("--out", out, "output directory");
        cmd->add_option("--workers", workers, "parallel worker count");
        cmd->add_option("--master-seed", master_seed, "master seed for all randomness");
    }

    void apply(qrl::ExperimentConfig& cfg) const {
        if (out) cfg.out_dir = *out;
        if (workers) cfg.workers = *workers;
        if (master_seed) cfg.master_seed = *master_seed;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum-enhanced reinforcement learning lab"};
    app.require_subcommand(1);

    std::string maze_path, config_path;
    uint64_t budget = 0, seeds = 100;

    CommonFlags verify_flags, explore_flags, learn_flags, meta_flags;

    CLI::App* verify = app.add_subcommand("verify-oracle",
                                          "check the register-level oracle against the direct one");
    verify->add_option("maze", maze_path, "maze file")->required();
    verify_flags.attach(verify);

    CLI::App* explore_cmd =
        app.add_subcommand("explore", "quantum exploration runs on an oracularized maze");
    explore_cmd->add_option("maze", maze_path, "maze file")->required();
    explore_cmd->add_option("--budget", budget, "exploration budget in interaction steps")->required();
    explore_cmd->add_option("--seeds", seeds, "number of seeded runs");
    explore_flags.attach(explore_cmd);

    CLI::App* learn = app.add_subcommand("learn", "budget-matched hybrid vs classical comparison");
    learn->add_option("config", config_path, "experiment config file")->required();
    learn_flags.attach(learn);

    CLI::App* meta = app.add_subcommand("metalearn", "metaparameter search experiments");
    meta->add_option("config", config_path, "experiment config file")->required();
    meta_flags.attach(meta);

    CLI11_PARSE(app, argc, argv);

    qrl::ExperimentConfig cfg;
    try {
        if (verify->parsed()) {
            cfg.kind = qrl::ExperimentKind::verify_oracle;
            cfg.maze_path = maze_path;
            verify_flags.apply(cfg);
        } else if (explore_cmd->parsed()) {
            cfg.kind = qrl::ExperimentKind::explore;
            cfg.maze_path = maze_path;
            cfg.budget_steps = budget;
            cfg.seeds = seeds;
            explore_flags.apply(cfg);
        } else if (learn->parsed()) {
            cfg = qrl::ExperimentConfig::parse_file(config_path);
            cfg.kind = qrl::ExperimentKind::learn;
            learn_flags.apply(cfg);
        } else if (meta->parsed()) {
            cfg = qrl::ExperimentConfig::parse_file(config_path);
            cfg.kind = qrl::ExperimentKind::metalearn;
            meta_flags.apply(cfg);
        }
    } catch (const std::exception& e) {
        std::cerr << "validation failure: " << e.what() << "\n";
        return 1;
    }

    const qrl::RunReport report = qrl::run_experiment(cfg, std::cout);
    if (report.exit_code != 0 && !report.failure.empty())
        std::cerr << report.failure << "\n";
    return report.exit_code;
}
