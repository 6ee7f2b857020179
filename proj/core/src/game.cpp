#include "manynet/game.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace manynet {

namespace {

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

bool circleIntersectsRect(double cx, double cy, double r, const Rect& rect) {
    const double nx = clamp(cx, rect.x0, rect.x1);
    const double ny = clamp(cy, rect.y0, rect.y1);
    const double dx = cx - nx, dy = cy - ny;
    return dx * dx + dy * dy < r * r;
}

CmpOp negate(CmpOp op) {
    switch (op) {
    case CmpOp::Lt: return CmpOp::Ge;
    case CmpOp::Le: return CmpOp::Gt;
    case CmpOp::Eq: return CmpOp::Ne;
    case CmpOp::Ne: return CmpOp::Eq;
    case CmpOp::Ge: return CmpOp::Lt;
    case CmpOp::Gt: return CmpOp::Le;
    }
    return CmpOp::Lt;
}

bool evalCmp(CmpOp op, double a, double b) {
    switch (op) {
    case CmpOp::Lt: return a < b;
    case CmpOp::Le: return a <= b;
    case CmpOp::Eq: return a == b;
    case CmpOp::Ne: return a != b;
    case CmpOp::Ge: return a >= b;
    case CmpOp::Gt: return a > b;
    }
    return false;
}

// Distance of (a op b) from evaluating to true, with constant K.
double cmpTrueDistance(CmpOp op, double a, double b) {
    switch (op) {
    case CmpOp::Lt: return a < b ? 0.0 : a - b + kBranchK;
    case CmpOp::Le: return a <= b ? 0.0 : a - b + kBranchK;
    case CmpOp::Eq: return std::fabs(a - b);
    case CmpOp::Ne: return a != b ? 0.0 : kBranchK;
    case CmpOp::Ge: return a >= b ? 0.0 : b - a + kBranchK;
    case CmpOp::Gt: return a > b ? 0.0 : b - a + kBranchK;
    }
    return 0.0;
}

int countStatements(const std::vector<Stmt>& body) {
    int n = 0;
    for (const auto& stmt : body) {
        ++n;
        if (stmt.kind == Stmt::Kind::If) n += countStatements(stmt.thenBody) + countStatements(stmt.elseBody);
    }
    return n;
}

const Stmt* findInBody(const std::vector<Stmt>& body, int id) {
    for (const auto& stmt : body) {
        if (stmt.id == id) return &stmt;
        if (stmt.kind == Stmt::Kind::If) {
            if (const Stmt* hit = findInBody(stmt.thenBody, id)) return hit;
            if (const Stmt* hit = findInBody(stmt.elseBody, id)) return hit;
        }
    }
    return nullptr;
}

const Stmt* findLabeledInBody(const std::vector<Stmt>& body, const std::string& label) {
    for (const auto& stmt : body) {
        if (stmt.label == label) return &stmt;
        if (stmt.kind == Stmt::Kind::If) {
            if (const Stmt* hit = findLabeledInBody(stmt.thenBody, label)) return hit;
            if (const Stmt* hit = findLabeledInBody(stmt.elseBody, label)) return hit;
        }
    }
    return nullptr;
}

} // namespace

int GameSpec::spriteIndex(const std::string& name) const {
    for (int i = 0; i < static_cast<int>(sprites.size()); ++i)
        if (sprites[i].name == name) return i;
    return -1;
}

int GameSpec::variableIndex(const std::string& name) const {
    for (int i = 0; i < static_cast<int>(variables.size()); ++i)
        if (variables[i].name == name) return i;
    return -1;
}

int GameSpec::actionIndex(const std::string& name) const {
    for (int i = 0; i < static_cast<int>(actions.size()); ++i)
        if (actions[i] == name) return i;
    return -1;
}

int GameSpec::statementCount() const {
    int n = 0;
    for (const auto& script : scripts) n += countStatements(script.body);
    return n;
}

const Stmt* GameSpec::findStatement(int id) const {
    for (const auto& script : scripts)
        if (const Stmt* hit = findInBody(script.body, id)) return hit;
    return nullptr;
}

const Stmt* GameSpec::findLabeled(const std::string& label) const {
    for (const auto& script : scripts)
        if (const Stmt* hit = findLabeledInBody(script.body, label)) return hit;
    return nullptr;
}

namespace {

void validateBody(const GameSpec& spec, const std::vector<Stmt>& body, std::set<int>& seenIds) {
    auto needSprite = [&](const std::string& name, const char* where) {
        if (spec.spriteIndex(name) < 0)
            throw std::invalid_argument(std::string("GameSpec: unknown sprite '") + name + "' in " + where);
    };
    auto needVar = [&](const std::string& name, const char* where) {
        if (spec.variableIndex(name) < 0)
            throw std::invalid_argument(std::string("GameSpec: unknown variable '") + name + "' in " + where);
    };
    for (const auto& stmt : body) {
        if (!seenIds.insert(stmt.id).second)
            throw std::invalid_argument("GameSpec: duplicate statement id " + std::to_string(stmt.id));
        if (stmt.kind == Stmt::Kind::Atomic) {
            const auto& e = stmt.effect;
            switch (e.kind) {
            case Effect::Kind::MoveBy:
            case Effect::Kind::MoveTo:
            case Effect::Kind::SetX:
            case Effect::Kind::SetY:
            case Effect::Kind::RandomX: needSprite(e.sprite, "effect"); break;
            case Effect::Kind::SetVar:
            case Effect::Kind::AddVar: needVar(e.var, "effect"); break;
            default: break;
            }
        } else {
            const auto& p = stmt.predicate;
            switch (p.kind) {
            case Predicate::Kind::Touching:
                needSprite(p.spriteA, "predicate");
                needSprite(p.spriteB, "predicate");
                break;
            case Predicate::Kind::KeyDown:
                if (spec.actionIndex(p.action) < 0)
                    throw std::invalid_argument("GameSpec: unknown action '" + p.action + "' in predicate");
                break;
            case Predicate::Kind::VarCmp: needVar(p.var, "predicate"); break;
            case Predicate::Kind::PosCmp: needSprite(p.sprite, "predicate"); break;
            }
            validateBody(spec, stmt.thenBody, seenIds);
            validateBody(spec, stmt.elseBody, seenIds);
        }
    }
}

} // namespace

void GameSpec::validate() const {
    if (episodeTicks < 1) throw std::invalid_argument("GameSpec: episodeTicks must be >= 1");
    if (actions.empty()) throw std::invalid_argument("GameSpec: no actions");
    std::set<std::string> names;
    for (const auto& sprite : sprites)
        if (!names.insert(sprite.name).second)
            throw std::invalid_argument("GameSpec: duplicate sprite name " + sprite.name);
    names.clear();
    for (const auto& var : variables) {
        if (!names.insert(var.name).second)
            throw std::invalid_argument("GameSpec: duplicate variable name " + var.name);
        if (!(var.min < var.max)) throw std::invalid_argument("GameSpec: variable range must be non-degenerate");
    }
    std::set<int> ids;
    for (const auto& script : scripts) validateBody(*this, script.body, ids);
    for (const int id : winningStatementIds)
        if (!ids.count(id)) throw std::invalid_argument("GameSpec: winning statement id not in program");
}

std::vector<double> ExecutionTrace::behaviorDescriptor() const {
    std::vector<double> descriptor;
    for (const auto& snapshot : sampledStates) descriptor.insert(descriptor.end(), snapshot.begin(), snapshot.end());
    return descriptor;
}

bool evalPredicate(const Predicate& p, const GameSpec& spec, const GameState& state, int currentAction) {
    switch (p.kind) {
    case Predicate::Kind::Touching: {
        const int a = spec.spriteIndex(p.spriteA), b = spec.spriteIndex(p.spriteB);
        const double dx = state.spriteX[a] - state.spriteX[b];
        const double dy = state.spriteY[a] - state.spriteY[b];
        const double rsum = spec.sprites[a].radius + spec.sprites[b].radius;
        return std::sqrt(dx * dx + dy * dy) <= rsum;
    }
    case Predicate::Kind::KeyDown:
        return currentAction == spec.actionIndex(p.action);
    case Predicate::Kind::VarCmp:
        return evalCmp(p.op, state.vars[spec.variableIndex(p.var)], p.value);
    case Predicate::Kind::PosCmp: {
        const int s = spec.spriteIndex(p.sprite);
        const double v = p.axis == Axis::X ? state.spriteX[s] : state.spriteY[s];
        return evalCmp(p.op, v, p.value);
    }
    }
    return false;
}

double branchDistance(const Predicate& p, const GameSpec& spec, const GameState& state,
                      bool desiredOutcome, int currentAction) {
    if (evalPredicate(p, spec, state, currentAction) == desiredOutcome) return 0.0;

    switch (p.kind) {
    case Predicate::Kind::Touching: {
        const int a = spec.spriteIndex(p.spriteA), b = spec.spriteIndex(p.spriteB);
        const double dx = state.spriteX[a] - state.spriteX[b];
        const double dy = state.spriteY[a] - state.spriteY[b];
        const double euclid = std::sqrt(dx * dx + dy * dy);
        const double rsum = spec.sprites[a].radius + spec.sprites[b].radius;
        return desiredOutcome ? std::max(0.0, euclid - rsum) : std::max(0.0, rsum - euclid + kBranchEps);
    }
    case Predicate::Kind::KeyDown:
        return kBranchK; // pressed does not match desired
    case Predicate::Kind::VarCmp: {
        const double a = state.vars[spec.variableIndex(p.var)];
        return cmpTrueDistance(desiredOutcome ? p.op : negate(p.op), a, p.value);
    }
    case Predicate::Kind::PosCmp: {
        const int s = spec.spriteIndex(p.sprite);
        const double a = p.axis == Axis::X ? state.spriteX[s] : state.spriteY[s];
        return cmpTrueDistance(desiredOutcome ? p.op : negate(p.op), a, p.value);
    }
    }
    return 0.0;
}

GameState initialState(const GameSpec& spec, std::uint64_t seed) {
    GameState state;
    Rng root(seed);
    Rng jitter = root.fork(1);
    state.rng = root.fork(2);
    for (const auto& sprite : spec.sprites) {
        double x = sprite.x, y = sprite.y;
        if (sprite.jitterX > 0.0) x += jitter.uniformReal(-sprite.jitterX, sprite.jitterX);
        if (sprite.jitterY > 0.0) y += jitter.uniformReal(-sprite.jitterY, sprite.jitterY);
        state.spriteX.push_back(clamp(x, 0.0, kStageWidth));
        state.spriteY.push_back(clamp(y, 0.0, kStageHeight));
    }
    for (const auto& var : spec.variables) state.vars.push_back(var.initial);
    return state;
}

namespace {

void applyEffect(const GameSpec& spec, GameState& state, const Effect& effect) {
    auto clampVar = [&](int idx, double v) {
        return clamp(v, spec.variables[idx].min, spec.variables[idx].max);
    };
    auto moveSprite = [&](int idx, double nx, double ny, bool wallChecked) {
        nx = clamp(nx, 0.0, kStageWidth);
        ny = clamp(ny, 0.0, kStageHeight);
        if (wallChecked) {
            for (const auto& wall : spec.walls)
                if (circleIntersectsRect(nx, ny, spec.sprites[idx].radius, wall)) return; // blocked
        }
        state.spriteX[idx] = nx;
        state.spriteY[idx] = ny;
    };

    switch (effect.kind) {
    case Effect::Kind::Noop: break;
    case Effect::Kind::Win:
        state.stopped = true;
        state.won = true;
        break;
    case Effect::Kind::Stop: state.stopped = true; break;
    case Effect::Kind::MoveBy: {
        const int s = spec.spriteIndex(effect.sprite);
        moveSprite(s, state.spriteX[s] + effect.a, state.spriteY[s] + effect.b, true);
        break;
    }
    case Effect::Kind::MoveTo: {
        const int s = spec.spriteIndex(effect.sprite);
        moveSprite(s, effect.a, effect.b, false);
        break;
    }
    case Effect::Kind::SetX: {
        const int s = spec.spriteIndex(effect.sprite);
        moveSprite(s, effect.a, state.spriteY[s], false);
        break;
    }
    case Effect::Kind::SetY: {
        const int s = spec.spriteIndex(effect.sprite);
        moveSprite(s, state.spriteX[s], effect.a, false);
        break;
    }
    case Effect::Kind::RandomX: {
        const int s = spec.spriteIndex(effect.sprite);
        moveSprite(s, state.rng.uniformReal(effect.a, effect.b), state.spriteY[s], false);
        break;
    }
    case Effect::Kind::SetVar: {
        const int v = spec.variableIndex(effect.var);
        state.vars[v] = clampVar(v, effect.a);
        break;
    }
    case Effect::Kind::AddVar: {
        const int v = spec.variableIndex(effect.var);
        state.vars[v] = clampVar(v, state.vars[v] + effect.a);
        break;
    }
    }
}

void execBody(const GameSpec& spec, GameState& state, const std::vector<Stmt>& body, ExecutionTrace& trace) {
    for (const auto& stmt : body) {
        if (state.stopped) return;
        ++trace.executedCounts[stmt.id];
        trace.firstExecutedTick.emplace(stmt.id, state.tick);
        if (stmt.kind == Stmt::Kind::Atomic) {
            applyEffect(spec, state, stmt.effect);
            continue;
        }
        const bool outcome = evalPredicate(stmt.predicate, spec, state, state.currentAction);
        for (const bool side : {false, true}) {
            const double d = branchDistance(stmt.predicate, spec, state, side, state.currentAction);
            const BranchKey key{stmt.id, side};
            auto it = trace.minBranchDistance.find(key);
            if (it == trace.minBranchDistance.end() || d < it->second) trace.minBranchDistance[key] = d;
        }
        trace.branchFirstTick.emplace(BranchKey{stmt.id, outcome}, state.tick);
        execBody(spec, state, outcome ? stmt.thenBody : stmt.elseBody, trace);
    }
}

void dumpTickLine(std::ostream& out, const GameSpec& spec, int tick, const std::map<int, int>& before,
                  const ExecutionTrace& trace) {
    out << spec.id << " tick " << tick << " executed";
    for (const auto& [id, count] : trace.executedCounts) {
        auto it = before.find(id);
        const int previous = it == before.end() ? 0 : it->second;
        if (count > previous) out << ' ' << id;
    }
    out << '\n';
}

} // namespace

void runStartScripts(const GameSpec& spec, GameState& state, ExecutionTrace& trace) {
    for (const auto& script : spec.scripts) {
        if (script.trigger != Script::Trigger::OnStart) continue;
        if (state.stopped) break;
        execBody(spec, state, script.body, trace);
    }
}

void step(const GameSpec& spec, GameState& state, int action, ExecutionTrace& trace) {
    if (state.stopped) throw std::logic_error("step: game already stopped");
    state.currentAction = action;
    for (const auto& script : spec.scripts) {
        if (script.trigger != Script::Trigger::EveryTick) continue;
        if (state.stopped) break;
        execBody(spec, state, script.body, trace);
    }
    ++state.tick;
}

std::vector<double> extractFeatures(const GameSpec& spec, const GameState& state) {
    std::vector<double> features;
    features.reserve(spec.featureCount());
    for (std::size_t i = 0; i < spec.sprites.size(); ++i) {
        features.push_back(state.spriteX[i] / kStageWidth);
        features.push_back(state.spriteY[i] / kStageHeight);
    }
    for (std::size_t i = 0; i < spec.variables.size(); ++i) {
        const auto& var = spec.variables[i];
        features.push_back(2.0 * (state.vars[i] - var.min) / (var.max - var.min) - 1.0);
    }
    return features;
}

ExecutionTrace runEpisode(const GameSpec& spec, const Genome& genome, std::uint64_t seed,
                          const EpisodeOptions& options) {
    const Phenotype phenotype(genome);
    if (phenotype.inputCount() != spec.featureCount() || phenotype.outputCount() != static_cast<int>(spec.actions.size()))
        throw std::invalid_argument("runEpisode: genome arities do not match game spec");

    GameState state = initialState(spec, seed);
    ExecutionTrace trace;
    runStartScripts(spec, state, trace);

    const int ticks = spec.episodeTicks;
    // Snapshot points at 25/50/75/100% of the configured episode length.
    std::vector<int> sampleTicks;
    for (const int q : {1, 2, 3, 4}) sampleTicks.push_back(std::max(1, (ticks * q) / 4));

    std::size_t nextSample = 0;
    while (state.tick < ticks && !state.stopped) {
        const std::vector<double> features = extractFeatures(spec, state);
        const std::vector<double> outputs = phenotype.activate(features);
        int action = 0;
        for (int i = 1; i < static_cast<int>(outputs.size()); ++i)
            if (outputs[i] > outputs[action]) action = i;

        const std::map<int, int> before = options.traceDump ? trace.executedCounts : std::map<int, int>{};
        step(spec, state, action, trace);
        if (options.traceDump) dumpTickLine(*options.traceDump, spec, state.tick, before, trace);

        while (nextSample < sampleTicks.size() && state.tick >= sampleTicks[nextSample]) {
            trace.sampledStates.push_back(extractFeatures(spec, state));
            ++nextSample;
        }
    }
    // Stopped early: pad remaining snapshots with the final state so the
    // descriptor length stays constant for a given spec.
    while (nextSample < sampleTicks.size()) {
        trace.sampledStates.push_back(extractFeatures(spec, state));
        ++nextSample;
    }

    trace.ticksRun = state.tick;
    trace.won = state.won;
    trace.stoppedEarly = state.stopped && state.tick < ticks;
    return trace;
}

} // namespace manynet
