#include "qrl/maze.hpp"

#include <array>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qrl {

namespace {

constexpr std::array<int, 4> kDx = {1, 0, -1, 0};
constexpr std::array<int, 4> kDy = {0, 1, 0, -1};
constexpr std::array<const char*, 4> kActionNames = {"R", "U", "L", "D"};

std::string cell_name(Cell c) {
    return std::to_string(c.x) + "_" + std::to_string(c.y);
}

} // namespace

void GridMaze::validate() const {
    if (width <= 0) throw std::invalid_argument("maze: width must be positive");
    if (height <= 0) throw std::invalid_argument("maze: height must be positive");
    if (episode_length <= 0) throw std::invalid_argument("maze: episode_length must be positive");
    if (!in_bounds(start)) throw std::invalid_argument("maze: start out of bounds");
    if (!in_bounds(goal)) throw std::invalid_argument("maze: goal out of bounds");
    if (start == goal) throw std::invalid_argument("maze: start equals goal");
    for (const auto& [lo, hi] : walls) {
        if (lo < 0 || hi >= width * height)
            throw std::invalid_argument("maze: wall references out-of-bounds cell");
        Cell a = cell_at(lo), b = cell_at(hi);
        if (std::abs(a.x - b.x) + std::abs(a.y - b.y) != 1)
            throw std::invalid_argument("maze: wall must join adjacent cells");
    }
}

bool GridMaze::blocked(Cell a, Cell b) const {
    int ia = cell_index(a), ib = cell_index(b);
    if (ia > ib) std::swap(ia, ib);
    return walls.count({ia, ib}) > 0;
}

void GridMaze::add_wall(Cell a, Cell b) {
    int ia = cell_index(a), ib = cell_index(b);
    if (ia > ib) std::swap(ia, ib);
    walls.insert({ia, ib});
}

EnvSpec::EnvSpec(GridMaze maze) : maze_(std::move(maze)) {
    maze_.validate();
    for (int i = 0; i < maze_.width * maze_.height; ++i)
        alphabets_.percepts.push_back(cell_name(maze_.cell_at(i)));
    for (const char* a : kActionNames) alphabets_.actions.push_back(a);
    alphabets_.validate();
    start_cell_ = maze_.cell_index(maze_.start);
    goal_cell_ = maze_.cell_index(maze_.goal);
}

int EnvSpec::transition(int cell, int action) const {
    if (action < 0 || action >= action_count())
        throw std::invalid_argument("transition: unknown action");
    if (cell == goal_cell_) return cell; // absorbing
    Cell from = maze_.cell_at(cell);
    Cell to{from.x + kDx[static_cast<size_t>(action)], from.y + kDy[static_cast<size_t>(action)]};
    if (!maze_.in_bounds(to) || maze_.blocked(from, to)) return cell;
    return maze_.cell_index(to);
}

uint64_t EnvSpec::sequence_space() const {
    uint64_t n = 1;
    for (int t = 0; t < episode_length(); ++t) {
        if (n > (1ull << 62) / 4) throw std::overflow_error("sequence_space: |A|^M overflows");
        n *= 4;
    }
    return n;
}

StepOutcome env_step(EnvState& state, const EnvSpec& spec, int action) {
    if (state.step >= spec.episode_length())
        throw std::logic_error("env_step: epoch overflow, reset required");
    state.cell = spec.transition(state.cell, action);
    state.step += 1;
    state.stored_actions.push_back(action);
    int reward = 0;
    if (state.cell == spec.goal_cell() && !state.rewarded) {
        reward = 1;
        state.rewarded = true;
    }
    return {spec.percept_of(state.cell), reward};
}

void epoch_reset(EnvState& state, const EnvSpec& spec) {
    state.cell = spec.start_cell();
    state.step = 0;
    state.rewarded = false;
    state.stored_actions.clear();
}

ReplayOutcome replay_epoch(const EnvSpec& spec, std::span<const int> seq) {
    if (static_cast<int>(seq.size()) != spec.episode_length())
        throw std::invalid_argument("replay_epoch: sequence length must equal episode length");
    EnvState st;
    epoch_reset(st, spec);
    ReplayOutcome out;
    for (int a : seq) {
        StepOutcome step = env_step(st, spec, a);
        out.percepts.push_back(step.percept);
        if (step.reward) out.reward = 1;
    }
    return out;
}

int lambda_of_spec(const EnvSpec& spec, std::span<const int> seq) {
    return replay_epoch(spec, seq).reward;
}

uint64_t encode_sequence(std::span<const int> seq, int base) {
    uint64_t rank = 0;
    for (int a : seq) {
        if (a < 0 || a >= base) throw std::invalid_argument("encode_sequence: symbol out of range");
        rank = rank * static_cast<uint64_t>(base) + static_cast<uint64_t>(a);
    }
    return rank;
}

std::vector<int> decode_sequence(uint64_t rank, int base, int length) {
    std::vector<int> seq(static_cast<size_t>(length));
    for (int t = length - 1; t >= 0; --t) {
        seq[static_cast<size_t>(t)] = static_cast<int>(rank % static_cast<uint64_t>(base));
        rank /= static_cast<uint64_t>(base);
    }
    if (rank != 0) throw std::invalid_argument("decode_sequence: rank out of range");
    return seq;
}

std::vector<uint64_t> enumerate_rewarding_ranks(const EnvSpec& spec) {
    const uint64_t n = spec.sequence_space();
    if (n > kEnumerationGuard)
        throw std::length_error("enumerate_rewarding: sequence space exceeds enumeration guard");
    std::vector<uint64_t> marked;
    for (uint64_t rank = 0; rank < n; ++rank) {
        std::vector<int> seq = decode_sequence(rank, spec.action_count(), spec.episode_length());
        if (lambda_of_spec(spec, seq)) marked.push_back(rank);
    }
    return marked;
}

std::vector<std::vector<int>> enumerate_rewarding(const EnvSpec& spec) {
    std::vector<std::vector<int>> out;
    for (uint64_t rank : enumerate_rewarding_ranks(spec))
        out.push_back(decode_sequence(rank, spec.action_count(), spec.episode_length()));
    return out;
}

EnvSpec make_low_connectivity_maze(int m) {
    if (m < 1) throw std::invalid_argument("make_low_connectivity_maze: m must be >= 1");
    GridMaze maze;
    maze.width = m + 1;
    maze.height = 1;
    maze.start = {0, 0};
    maze.goal = {m, 0};
    maze.episode_length = m;
    return EnvSpec(maze);
}

EnvSpec make_reference_maze() {
    GridMaze maze;
    maze.width = 2;
    maze.height = 2;
    maze.start = {0, 0};
    maze.goal = {1, 1};
    maze.episode_length = 2;
    return EnvSpec(maze);
}

EnvSpec load_maze(std::istream& is) {
    GridMaze maze;
    bool have_start = false, have_goal = false;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key) || key[0] == '#') continue;
        auto fail = [&](const std::string& what) {
            throw std::invalid_argument("maze file line " + std::to_string(lineno) + ": " + what);
        };
        if (key == "width") {
            if (!(ls >> maze.width)) fail("width needs an integer");
        } else if (key == "height") {
            if (!(ls >> maze.height)) fail("height needs an integer");
        } else if (key == "episode_length") {
            if (!(ls >> maze.episode_length)) fail("episode_length needs an integer");
        } else if (key == "start") {
            if (!(ls >> maze.start.x >> maze.start.y)) fail("start needs two integers");
            have_start = true;
        } else if (key == "goal") {
            if (!(ls >> maze.goal.x >> maze.goal.y)) fail("goal needs two integers");
            have_goal = true;
        } else if (key == "wall") {
            Cell a, b;
            if (!(ls >> a.x >> a.y >> b.x >> b.y)) fail("wall needs four integers");
            if (maze.width <= 0 || maze.height <= 0) fail("wall before width/height");
            maze.add_wall(a, b);
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    if (!have_start) throw std::invalid_argument("maze file: missing start");
    if (!have_goal) throw std::invalid_argument("maze file: missing goal");
    return EnvSpec(maze);
}

EnvSpec load_maze_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("maze file: cannot open " + path);
    return load_maze(f);
}

void save_maze(std::ostream& os, const EnvSpec& spec) {
    const GridMaze& m = spec.maze();
    os << "width " << m.width << "\n";
    os << "height " << m.height << "\n";
    os << "start " << m.start.x << ' ' << m.start.y << "\n";
    os << "goal " << m.goal.x << ' ' << m.goal.y << "\n";
    os << "episode_length " << m.episode_length << "\n";
    for (const auto& [lo, hi] : m.walls) {
        Cell a = m.cell_at(lo), b = m.cell_at(hi);
        os << "wall " << a.x << ' ' << a.y << ' ' << b.x << ' ' << b.y << "\n";
    }
}

} // namespace qrl
