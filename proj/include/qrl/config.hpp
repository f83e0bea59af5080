#pragma once
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrl {

struct ConfigError : std::runtime_error {
    ConfigError(const std::string& field_name, const std::string& what)
        : std::runtime_error("config field '" + field_name + "': " + what), field(field_name) {}
    std::string field;
};

enum class ExperimentKind { verify_oracle, explore, learn, metalearn };

enum class MetaMethod { grid, unimodal, quantum };

// Flat key-value experiment description. Everything an experiment touches is
// in here; identical configs reproduce byte-identical CSV outputs.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::verify_oracle;
    std::string maze_path;
    std::string out_dir;
    unsigned workers = 1;
    uint64_t master_seed = 1;
    uint64_t seeds = 1;

    // learn / explore
    double gamma = 0.0;
    double eta = 1.0;
    int replay_count = 10;
    uint64_t budget_steps = 0;       // total interaction budget B
    uint64_t exploration_steps = 0;  // 0 = default split (half of B, rounded to 2M)
    uint64_t tested_epochs = 0;

    // metalearn
    MetaMethod method = MetaMethod::grid;
    std::vector<double> gamma_values;
    std::vector<double> eta_values;
    int train_epochs = 50;
    int eval_epochs = 50;
    int replicates = 32;

    static ExperimentConfig parse(std::istream& is);
    static ExperimentConfig parse_file(const std::string& path);

    void validate() const; // throws ConfigError naming the offending field

    // Normalized echo for provenance; fixed key order.
    std::string echo() const;
};

std::string to_string(ExperimentKind kind);
std::string to_string(MetaMethod method);

} // namespace qrl
