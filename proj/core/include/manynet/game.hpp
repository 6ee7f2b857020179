#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "manynet/genome.hpp"
#include "manynet/rng.hpp"

namespace manynet {

// Stage dimensions in game units; sprite positions are clamped to the stage.
inline constexpr double kStageWidth = 480.0;
inline constexpr double kStageHeight = 360.0;
inline constexpr double kBranchEps = 1e-6; // false-side margin for Touching
inline constexpr double kBranchK = 1.0;    // Korel constant

enum class CmpOp { Lt, Le, Eq, Ne, Ge, Gt };
enum class Axis { X, Y };

/// Guard of an If statement. Every predicate evaluation is instrumented with
/// a branch distance toward both outcomes.
struct Predicate {
    enum class Kind { Touching, KeyDown, VarCmp, PosCmp };
    Kind kind = Kind::KeyDown;
    std::string spriteA, spriteB; // Touching
    std::string action;           // KeyDown
    std::string var;              // VarCmp
    std::string sprite;           // PosCmp
    Axis axis = Axis::X;          // PosCmp
    CmpOp op = CmpOp::Lt;         // VarCmp / PosCmp
    double value = 0.0;           // VarCmp / PosCmp
};

struct Effect {
    enum class Kind { Noop, Win, Stop, MoveBy, MoveTo, SetX, SetY, RandomX, SetVar, AddVar };
    Kind kind = Kind::Noop;
    std::string sprite; // movement targets
    std::string var;    // variable targets
    double a = 0.0, b = 0.0;
};

struct Stmt {
    enum class Kind { Atomic, If };
    Kind kind = Kind::Atomic;
    int id = -1;
    std::string label; // optional, for tests and tooling
    Effect effect;     // Atomic
    Predicate predicate;
    std::vector<Stmt> thenBody;
    std::vector<Stmt> elseBody;
};

struct Script {
    enum class Trigger { OnStart, EveryTick };
    Trigger trigger = Trigger::EveryTick;
    std::vector<Stmt> body;
};

struct SpriteSpec {
    std::string name;
    double x = 0.0, y = 0.0;
    double radius = 8.0;
    double jitterX = 0.0, jitterY = 0.0; // uniform seed-dependent start offset
};

struct VariableSpec {
    std::string name;
    double initial = 0.0;
    double min = 0.0, max = 1.0; // declared range, also used for feature scaling
};

struct Rect {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
};

/// An instrumented mini-game program: sprites, variables, blocking walls and
/// triggered scripts over them. Immutable once built.
struct GameSpec {
    std::string id;
    std::vector<SpriteSpec> sprites;
    std::vector<VariableSpec> variables;
    std::vector<Rect> walls;
    std::vector<Script> scripts;
    std::vector<std::string> actions; // ordered action labels, index 0 by convention a no-op
    int episodeTicks = 300;
    std::set<int> winningStatementIds; // statements whose execution wins the game

    int spriteIndex(const std::string& name) const;
    int variableIndex(const std::string& name) const;
    int actionIndex(const std::string& name) const;
    int featureCount() const { return 2 * static_cast<int>(sprites.size()) + static_cast<int>(variables.size()); }
    int statementCount() const;
    const Stmt* findStatement(int id) const;
    const Stmt* findLabeled(const std::string& label) const;

    /// Throws std::invalid_argument when a structural invariant is broken
    /// (duplicate names, dangling references, non-unique statement ids, ...).
    void validate() const;
};

struct GameState {
    std::vector<double> spriteX, spriteY;
    std::vector<double> vars;
    int tick = 0;
    Rng rng{0}; // in-episode randomness (drop columns etc.)
    bool stopped = false;
    bool won = false;
    int currentAction = 0;
};

using BranchKey = std::pair<int, bool>; // (If statement id, outcome)

/// Everything one episode reveals: executed statements, taken branch
/// outcomes, minimum branch distances for every evaluated predicate, and
/// subsampled feature snapshots.
struct ExecutionTrace {
    std::map<int, int> executedCounts;
    std::map<int, int> firstExecutedTick;
    std::map<BranchKey, int> branchFirstTick; // taken outcomes only
    std::map<BranchKey, double> minBranchDistance;
    std::vector<std::vector<double>> sampledStates;
    int ticksRun = 0;
    bool won = false;
    bool stoppedEarly = false;

    bool executed(int stmtId) const { return executedCounts.count(stmtId) > 0; }
    bool branchTaken(int stmtId, bool outcome) const { return branchFirstTick.count({stmtId, outcome}) > 0; }

    /// Concatenated feature snapshots at 25/50/75/100% of the episode.
    std::vector<double> behaviorDescriptor() const;

    bool operator==(const ExecutionTrace&) const = default;
};

/// Korel-style distance of the predicate's evaluation in `state` from the
/// desired outcome; 0 iff the outcome already holds.
double branchDistance(const Predicate& predicate, const GameSpec& spec, const GameState& state,
                      bool desiredOutcome, int currentAction);

bool evalPredicate(const Predicate& predicate, const GameSpec& spec, const GameState& state, int currentAction);

/// Seed-dependent initial state: declared positions offset uniformly within
/// each sprite's jitter box. OnStart scripts are NOT yet run.
GameState initialState(const GameSpec& spec, std::uint64_t seed);

/// Runs the OnStart scripts once, recording coverage into the trace.
void runStartScripts(const GameSpec& spec, GameState& state, ExecutionTrace& trace);

/// Advances one tick: sets the pressed action, runs the EveryTick scripts in
/// declaration order with full instrumentation, then advances the counter.
/// Throws std::logic_error when called on a stopped state.
void step(const GameSpec& spec, GameState& state, int action, ExecutionTrace& trace);

/// Fixed-order normalized observation: sprite x/width, y/height, then each
/// variable scaled to [-1, 1] by its declared range.
std::vector<double> extractFeatures(const GameSpec& spec, const GameState& state);

struct EpisodeOptions {
    std::ostream* traceDump = nullptr; // one line per tick with executed statement ids
};

/// Plays one full episode: argmax action selection over the genome's outputs
/// each tick (ties to the lowest action index), until episodeTicks or the
/// program stops. Pure function of (spec, genome, seed).
ExecutionTrace runEpisode(const GameSpec& spec, const Genome& genome, std::uint64_t seed,
                          const EpisodeOptions& options = {});

/// Built-in analogue mini-games: CoinMaze, Catcher, Dodger.
std::vector<GameSpec> builtinGames();
const GameSpec& builtinGame(const std::string& id);

} // namespace manynet
