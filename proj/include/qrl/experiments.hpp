#pragma once
#include <functional>
#include <iosfwd>
#include <string>
#include <thread>
#include <vector>

#include "qrl/config.hpp"

namespace qrl {

// Exit codes: 0 success, 1 validation failure, 2 verification failure.
struct RunReport {
    int exit_code = 0;
    std::string summary;       // human-readable recap, also written to out dir
    std::string failure;       // populated when exit_code != 0
    std::vector<std::string> files_written;
};

// Dispatch an experiment: load the environment, run all seeds (optionally in
// parallel), and emit raw.csv, summary.csv and config_echo.txt under out_dir.
// Never throws for config/verification problems; they land in the report.
RunReport run_experiment(const ExperimentConfig& config, std::ostream& log);

// Deterministic parallel map: f(i) for i in [0, n), merged in index order.
void parallel_for(size_t n, unsigned workers, const std::function<void(size_t)>& f);

} // namespace qrl
