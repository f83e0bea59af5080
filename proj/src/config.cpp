#include "qrl/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace qrl {

namespace {

std::vector<double> parse_double_list(const std::string& field, const std::string& text) {
    std::vector<double> out;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) {
        try {
            size_t used = 0;
            out.push_back(std::stod(item, &used));
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
            if (used != item.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw ConfigError(field, "cannot parse list entry '" + item + "'");
        }
    }
    if (out.empty()) throw ConfigError(field, "empty list");
    return out;
}

uint64_t parse_u64(const std::string& field, const std::string& text) {
    uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw ConfigError(field, "cannot parse unsigned integer '" + text + "'");
    return v;
}

double parse_double(const std::string& field, const std::string& text) {
    try {
        size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(field, "cannot parse number '" + text + "'");
    }
}

} // namespace

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::verify_oracle: return "verify-oracle";
        case ExperimentKind::explore: return "explore";
        case ExperimentKind::learn: return "learn";
        case ExperimentKind::metalearn: return "metalearn";
    }
    return "?";
}

std::string to_string(MetaMethod method) {
    switch (method) {
        case MetaMethod::grid: return "grid";
        case MetaMethod::unimodal: return "unimodal";
        case MetaMethod::quantum: return "quantum";
    }
    return "?";
}

ExperimentConfig ExperimentConfig::parse(std::istream& is) {
    ExperimentConfig cfg;
    std::string line;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key) || key[0] == '#') continue;
        std::string rest;
        std::getline(ls, rest);
        const size_t begin = rest.find_first_not_of(" \t");
        rest = begin == std::string::npos ? std::string{} : rest.substr(begin);
        const size_t end = rest.find_last_not_of(" \t\r");
        rest = end == std::string::npos ? std::string{} : rest.substr(0, end + 1);
        if (rest.empty()) throw ConfigError(key, "missing value");

        if (key == "experiment") {
            if (rest == "verify-oracle") cfg.kind = ExperimentKind::verify_oracle;
            else if (rest == "explore") cfg.kind = ExperimentKind::explore;
            else if (rest == "learn") cfg.kind = ExperimentKind::learn;
            else if (rest == "metalearn") cfg.kind = ExperimentKind::metalearn;
            else throw ConfigError(key, "unknown experiment '" + rest + "'");
        } else if (key == "maze") cfg.maze_path = rest;
        else if (key == "out") cfg.out_dir = rest;
        else if (key == "workers") cfg.workers = static_cast<unsigned>(parse_u64(key, rest));
        else if (key == "master_seed") cfg.master_seed = parse_u64(key, rest);
        else if (key == "seeds") cfg.seeds = parse_u64(key, rest);
        else if (key == "gamma") cfg.gamma = parse_double(key, rest);
        else if (key == "eta") cfg.eta = parse_double(key, rest);
        else if (key == "replay_count") cfg.replay_count = static_cast<int>(parse_u64(key, rest));
        else if (key == "budget_steps") cfg.budget_steps = parse_u64(key, rest);
        else if (key == "exploration_steps") cfg.exploration_steps = parse_u64(key, rest);
        else if (key == "tested_epochs") cfg.tested_epochs = parse_u64(key, rest);
        else if (key == "method") {
            if (rest == "grid") cfg.method = MetaMethod::grid;
            else if (rest == "unimodal") cfg.method = MetaMethod::unimodal;
            else if (rest == "quantum") cfg.method = MetaMethod::quantum;
            else throw ConfigError(key, "unknown method '" + rest + "'");
        } else if (key == "gamma_values") cfg.gamma_values = parse_double_list(key, rest);
        else if (key == "eta_values") cfg.eta_values = parse_double_list(key, rest);
        else if (key == "train_epochs") cfg.train_epochs = static_cast<int>(parse_u64(key, rest));
        else if (key == "eval_epochs") cfg.eval_epochs = static_cast<int>(parse_u64(key, rest));
        else if (key == "replicates") cfg.replicates = static_cast<int>(parse_u64(key, rest));
        else throw ConfigError(key, "unknown key");
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config", "cannot open " + path);
    return parse(f);
}

void ExperimentConfig::validate() const {
    if (maze_path.empty()) throw ConfigError("maze", "missing environment file");
    if (workers == 0) throw ConfigError("workers", "must be positive");
    switch (kind) {
        case ExperimentKind::verify_oracle:
            break;
        case ExperimentKind::explore:
            if (budget_steps == 0) throw ConfigError("budget_steps", "must be positive");
            if (seeds == 0) throw ConfigError("seeds", "must be positive");
            break;
        case ExperimentKind::learn:
            if (budget_steps == 0) throw ConfigError("budget_steps", "must be positive");
            if (tested_epochs == 0) throw ConfigError("tested_epochs", "must be positive");
            if (seeds == 0) throw ConfigError("seeds", "must be positive");
            if (exploration_steps > budget_steps)
                throw ConfigError("exploration_steps", "exceeds budget_steps");
            if (gamma < 0.0 || gamma > 1.0) throw ConfigError("gamma", "must be in [0,1]");
            if (eta < 0.0 || eta > 1.0) throw ConfigError("eta", "must be in [0,1]");
            if (replay_count < 0) throw ConfigError("replay_count", "must be >= 0");
            break;
        case ExperimentKind::metalearn:
            if (gamma_values.empty()) throw ConfigError("gamma_values", "missing list");
            if (eta_values.empty()) throw ConfigError("eta_values", "missing list");
            if (train_epochs < 0) throw ConfigError("train_epochs", "must be >= 0");
            if (eval_epochs <= 0) throw ConfigError("eval_epochs", "must be positive");
            if (replicates <= 0) throw ConfigError("replicates", "must be positive");
            if (method == MetaMethod::quantum && seeds == 0)
                throw ConfigError("seeds", "must be positive");
            if (method == MetaMethod::unimodal && gamma_values.size() > 1 && eta_values.size() > 1)
                throw ConfigError("method", "unimodal search needs a one-dimensional grid");
            break;
    }
}

std::string ExperimentConfig::echo() const {
    std::ostringstream os;
    os.precision(17);
    os << "experiment " << to_string(kind) << "\n";
    os << "maze " << maze_path << "\n";
    os << "workers " << workers << "\n";
    os << "master_seed " << master_seed << "\n";
    os << "seeds " << seeds << "\n";
    if (kind == ExperimentKind::learn || kind == ExperimentKind::explore) {
        os << "budget_steps " << budget_steps << "\n";
    }
    if (kind == ExperimentKind::learn) {
        os << "gamma " << gamma << "\n";
        os << "eta " << eta << "\n";
        os << "replay_count " << replay_count << "\n";
        os << "exploration_steps " << exploration_steps << "\n";
        os << "tested_epochs " << tested_epochs << "\n";
    }
    if (kind == ExperimentKind::metalearn) {
        os << "method " << to_string(method) << "\n";
        auto list = [&os](const char* key, const std::vector<double>& vs) {
            os << key << " ";
            for (size_t i = 0; i < vs.size(); ++i) os << (i ? "," : "") << vs[i];
            os << "\n";
        };
        list("gamma_values", gamma_values);
        list("eta_values", eta_values);
        os << "train_epochs " << train_epochs << "\n";
        os << "eval_epochs " << eval_epochs << "\n";
        os << "replicates " << replicates << "\n";
    }
    return os.str();
}

} // namespace qrl
