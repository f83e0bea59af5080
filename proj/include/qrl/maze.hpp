#pragma once
#include <cstdint>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qrl/interaction.hpp"

namespace qrl {

struct Cell {
    int x = 0;
    int y = 0;
    bool operator==(const Cell&) const = default;
};

// Deterministic epoch-type gridworld. Walls block travel between adjacent
// cells in both directions; bumping a wall or the boundary keeps the agent
// in place; the goal is absorbing; an epoch lasts exactly episode_length
// actions and pays at most one reward, on first goal arrival.
struct GridMaze {
    int width = 0;
    int height = 0;
    Cell start;
    Cell goal;
    int episode_length = 0;
    // unordered cell-index pairs stored normalized (lo, hi)
    std::set<std::pair<int, int>> walls;

    void validate() const; // throws std::invalid_argument
    int cell_index(Cell c) const { return c.y * width + c.x; }
    Cell cell_at(int index) const { return {index % width, index / width}; }
    bool in_bounds(Cell c) const { return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height; }
    bool blocked(Cell a, Cell b) const;
    void add_wall(Cell a, Cell b);
};

// Action order is fixed; sequence ranks are base-4 with the first action as
// the most significant digit.
enum MazeAction : int { act_right = 0, act_up = 1, act_left = 2, act_down = 3 };

class EnvSpec {
public:
    explicit EnvSpec(GridMaze maze);

    const GridMaze& maze() const { return maze_; }
    const Alphabets& alphabets() const { return alphabets_; }
    int action_count() const { return 4; }
    int episode_length() const { return maze_.episode_length; }
    int start_cell() const { return start_cell_; }
    int goal_cell() const { return goal_cell_; }
    int percept_of(int cell) const { return cell; }

    // deterministic total transition; goal is absorbing
    int transition(int cell, int action) const;

    // |actions|^M; throws std::overflow_error past 2^62
    uint64_t sequence_space() const;

private:
    GridMaze maze_;
    Alphabets alphabets_;
    int start_cell_ = 0;
    int goal_cell_ = 0;
};

struct EnvState {
    int cell = 0;
    int step = 0;       // actions taken this epoch, in [0, M]
    bool rewarded = false;
    std::vector<int> stored_actions; // the environment's own memory of the epoch
};

struct StepOutcome {
    int percept; // percept of the new cell
    int reward;  // 1 on first goal arrival this epoch
};

// One interaction step. Throws std::logic_error when stepping past the
// episode length without a reset.
StepOutcome env_step(EnvState& state, const EnvSpec& spec, int action);

void epoch_reset(EnvState& state, const EnvSpec& spec);

struct ReplayOutcome {
    int reward = 0;                 // lambda of the sequence
    std::vector<int> percepts;      // environment responses s_2 .. s_{M+1}
};

// Replay a full-length action sequence from reset through env_step.
ReplayOutcome replay_epoch(const EnvSpec& spec, std::span<const int> seq);

// Reward predicate over full-length action sequences; implemented by replay
// so consistency with the interactive environment holds by construction.
int lambda_of_spec(const EnvSpec& spec, std::span<const int> seq);

// Sequence rank codec (base |actions|, first action most significant).
uint64_t encode_sequence(std::span<const int> seq, int base);
std::vector<int> decode_sequence(uint64_t rank, int base, int length);

// Exhaustive set of rewarding sequence ranks, sorted. Refuses spaces larger
// than 2^24 (std::length_error).
std::vector<uint64_t> enumerate_rewarding_ranks(const EnvSpec& spec);
std::vector<std::vector<int>> enumerate_rewarding(const EnvSpec& spec);

constexpr uint64_t kEnumerationGuard = 1ull << 24;

// Corridor maze of length m+1 with M = m: exactly one rewarding sequence,
// so the reward density is |actions|^-m.
EnvSpec make_low_connectivity_maze(int m);

// The 2x2 reference maze: start (0,0), goal (1,1), M = 2, k = 2, N = 16.
EnvSpec make_reference_maze();

// Structured-text serialization (width/height/start/goal/episode_length/wall lines).
EnvSpec load_maze(std::istream& is);
EnvSpec load_maze_file(const std::string& path);
void save_maze(std::ostream& os, const EnvSpec& spec);

} // namespace qrl
