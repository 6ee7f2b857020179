#include "manynet/game.hpp"

#include <stdexcept>

namespace manynet {

namespace {

// Small builder that hands out program-wide statement ids in declaration
// order, which keeps ids stable for serialized suites and reports.
struct ProgramBuilder {
    int nextId = 0;

    Stmt atomic(Effect effect, std::string label = {}) {
        Stmt stmt;
        stmt.kind = Stmt::Kind::Atomic;
        stmt.id = nextId++;
        stmt.label = std::move(label);
        stmt.effect = std::move(effect);
        return stmt;
    }

    Stmt branch(Predicate predicate, std::vector<Stmt> thenBody, std::string label = {},
                std::vector<Stmt> elseBody = {}) {
        Stmt stmt;
        stmt.kind = Stmt::Kind::If;
        stmt.id = nextId++;
        stmt.label = std::move(label);
        stmt.predicate = std::move(predicate);
        stmt.thenBody = std::move(thenBody);
        stmt.elseBody = std::move(elseBody);
        return stmt;
    }
};

Predicate keyDown(std::string action) {
    Predicate p;
    p.kind = Predicate::Kind::KeyDown;
    p.action = std::move(action);
    return p;
}

Predicate touching(std::string a, std::string b) {
    Predicate p;
    p.kind = Predicate::Kind::Touching;
    p.spriteA = std::move(a);
    p.spriteB = std::move(b);
    return p;
}

Predicate varCmp(std::string var, CmpOp op, double value) {
    Predicate p;
    p.kind = Predicate::Kind::VarCmp;
    p.var = std::move(var);
    p.op = op;
    p.value = value;
    return p;
}

Predicate posCmp(std::string sprite, Axis axis, CmpOp op, double value) {
    Predicate p;
    p.kind = Predicate::Kind::PosCmp;
    p.sprite = std::move(sprite);
    p.axis = axis;
    p.op = op;
    p.value = value;
    return p;
}

Effect fx(Effect::Kind kind, std::string target = {}, double a = 0.0, double b = 0.0) {
    Effect e;
    e.kind = kind;
    switch (kind) {
    case Effect::Kind::SetVar:
    case Effect::Kind::AddVar: e.var = std::move(target); break;
    default: e.sprite = std::move(target); break;
    }
    e.a = a;
    e.b = b;
    return e;
}

void renumber(std::vector<Stmt>& body, int& nextId) {
    for (auto& stmt : body) {
        stmt.id = nextId++;
        if (stmt.kind == Stmt::Kind::If) {
            renumber(stmt.thenBody, nextId);
            renumber(stmt.elseBody, nextId);
        }
    }
}

void finishSpec(GameSpec& spec) {
    // Preorder statement numbering, the same convention the text parser
    // uses, then mark every Win statement as a winning statement.
    int nextId = 0;
    for (auto& script : spec.scripts) renumber(script.body, nextId);

    std::vector<const Stmt*> stack;
    for (const auto& script : spec.scripts)
        for (const auto& stmt : script.body) stack.push_back(&stmt);
    while (!stack.empty()) {
        const Stmt* stmt = stack.back();
        stack.pop_back();
        if (stmt->kind == Stmt::Kind::Atomic) {
            if (stmt->effect.kind == Effect::Kind::Win) spec.winningStatementIds.insert(stmt->id);
            continue;
        }
        for (const auto& s : stmt->thenBody) stack.push_back(&s);
        for (const auto& s : stmt->elseBody) stack.push_back(&s);
    }
    spec.validate();
}

// Maze with a wall between the player and the door. The straight-line
// distance to the door is deceptive: the only way past the wall is the gap
// above it. A coin sits on the detour route, and the "secret" branch can
// never fire because the score is capped below its threshold.
GameSpec makeCoinMaze() {
    GameSpec spec;
    spec.id = "coinmaze";
    spec.actions = {"Noop", "Left", "Right", "Up", "Down"};
    spec.episodeTicks = 300;
    spec.sprites = {
        {"player", 60.0, 180.0, 10.0, 8.0, 8.0},
        {"coin", 264.0, 300.0, 10.0, 0.0, 0.0},
        {"door", 440.0, 300.0, 16.0, 0.0, 0.0},
    };
    spec.variables = {
        {"score", 0.0, 0.0, 100.0},
        {"coinTaken", 0.0, 0.0, 1.0},
        {"level", 0.0, 0.0, 1.0},
    };
    spec.walls = {{296.0, 0.0, 312.0, 300.0}};

    ProgramBuilder b;
    Script boot;
    boot.trigger = Script::Trigger::OnStart;
    boot.body.push_back(b.atomic(fx(Effect::Kind::Noop), "boot"));

    Script controls;
    controls.trigger = Script::Trigger::EveryTick;
    controls.body.push_back(b.branch(keyDown("Left"), {b.atomic(fx(Effect::Kind::MoveBy, "player", -8.0, 0.0))}, "left"));
    controls.body.push_back(b.branch(keyDown("Right"), {b.atomic(fx(Effect::Kind::MoveBy, "player", 8.0, 0.0))}, "right"));
    controls.body.push_back(b.branch(keyDown("Up"), {b.atomic(fx(Effect::Kind::MoveBy, "player", 0.0, 8.0))}, "up"));
    controls.body.push_back(b.branch(keyDown("Down"), {b.atomic(fx(Effect::Kind::MoveBy, "player", 0.0, -8.0))}, "down"));

    Script rules;
    rules.trigger = Script::Trigger::EveryTick;
    rules.body.push_back(b.branch(varCmp("coinTaken", CmpOp::Eq, 0.0),
                                  {b.branch(touching("player", "coin"),
                                            {b.atomic(fx(Effect::Kind::AddVar, "score", 10.0)),
                                             b.atomic(fx(Effect::Kind::SetVar, "coinTaken", 1.0))},
                                            "coin")},
                                  "coinGate"));
    rules.body.push_back(b.branch(touching("player", "door"),
                                  {b.atomic(fx(Effect::Kind::AddVar, "level", 1.0)),
                                   b.atomic(fx(Effect::Kind::Win), "win")},
                                  "door"));
    // Unsatisfiable: positions clamp to the 480-unit stage, so x > 600 can
    // never hold, yet its branch distance keeps shrinking as the player
    // walks right. A continuously improving dead end.
    rules.body.push_back(b.branch(posCmp("player", Axis::X, CmpOp::Gt, 600.0),
                                  {b.atomic(fx(Effect::Kind::Noop), "secretRoom")},
                                  "secret"));

    spec.scripts = {boot, controls, rules};
    finishSpec(spec);
    return spec;
}

// Falling items, randomized drop columns. Winning needs near-perfect play.
GameSpec makeCatcher() {
    GameSpec spec;
    spec.id = "catcher";
    spec.actions = {"Noop", "Left", "Right"};
    spec.episodeTicks = 300;
    spec.sprites = {
        {"basket", 240.0, 20.0, 14.0, 16.0, 0.0},
        {"item", 240.0, 340.0, 8.0, 0.0, 0.0},
    };
    spec.variables = {
        {"caught", 0.0, 0.0, 20.0},
        {"missed", 0.0, 0.0, 20.0},
    };

    ProgramBuilder b;
    Script boot;
    boot.trigger = Script::Trigger::OnStart;
    boot.body.push_back(b.atomic(fx(Effect::Kind::RandomX, "item", 40.0, 440.0), "scatter"));

    Script controls;
    controls.trigger = Script::Trigger::EveryTick;
    controls.body.push_back(b.branch(keyDown("Left"), {b.atomic(fx(Effect::Kind::MoveBy, "basket", -10.0, 0.0))}, "left"));
    controls.body.push_back(b.branch(keyDown("Right"), {b.atomic(fx(Effect::Kind::MoveBy, "basket", 10.0, 0.0))}, "right"));

    Script falling;
    falling.trigger = Script::Trigger::EveryTick;
    falling.body.push_back(b.atomic(fx(Effect::Kind::MoveBy, "item", 0.0, -7.0), "fall"));

    Script rules;
    rules.trigger = Script::Trigger::EveryTick;
    rules.body.push_back(b.branch(touching("basket", "item"),
                                  {b.atomic(fx(Effect::Kind::AddVar, "caught", 1.0)),
                                   b.atomic(fx(Effect::Kind::RandomX, "item", 40.0, 440.0)),
                                   b.atomic(fx(Effect::Kind::SetY, "item", 340.0))},
                                  "catch"));
    rules.body.push_back(b.branch(posCmp("item", Axis::Y, CmpOp::Lt, 8.0),
                                  {b.atomic(fx(Effect::Kind::AddVar, "missed", 1.0)),
                                   b.atomic(fx(Effect::Kind::RandomX, "item", 40.0, 440.0)),
                                   b.atomic(fx(Effect::Kind::SetY, "item", 340.0))},
                                  "miss"));
    rules.body.push_back(b.branch(varCmp("caught", CmpOp::Ge, 5.0),
                                  {b.atomic(fx(Effect::Kind::Win), "win")},
                                  "fiveCaught"));

    spec.scripts = {boot, controls, falling, rules};
    finishSpec(spec);
    return spec;
}

// Projectiles rain down; surviving long enough wins, three hits lose.
GameSpec makeDodger() {
    GameSpec spec;
    spec.id = "dodger";
    spec.actions = {"Noop", "Left", "Right"};
    spec.episodeTicks = 300;
    spec.sprites = {
        {"runner", 240.0, 20.0, 12.0, 16.0, 0.0},
        {"rock", 240.0, 340.0, 10.0, 0.0, 0.0},
    };
    spec.variables = {
        {"hits", 0.0, 0.0, 5.0},
        {"dodged", 0.0, 0.0, 30.0},
    };

    ProgramBuilder b;
    Script boot;
    boot.trigger = Script::Trigger::OnStart;
    boot.body.push_back(b.atomic(fx(Effect::Kind::RandomX, "rock", 30.0, 450.0), "scatter"));

    Script controls;
    controls.trigger = Script::Trigger::EveryTick;
    controls.body.push_back(b.branch(keyDown("Left"), {b.atomic(fx(Effect::Kind::MoveBy, "runner", -10.0, 0.0))}, "left"));
    controls.body.push_back(b.branch(keyDown("Right"), {b.atomic(fx(Effect::Kind::MoveBy, "runner", 10.0, 0.0))}, "right"));

    Script falling;
    falling.trigger = Script::Trigger::EveryTick;
    falling.body.push_back(b.atomic(fx(Effect::Kind::MoveBy, "rock", 0.0, -8.0), "fall"));

    Script rules;
    rules.trigger = Script::Trigger::EveryTick;
    rules.body.push_back(b.branch(touching("runner", "rock"),
                                  {b.atomic(fx(Effect::Kind::AddVar, "hits", 1.0)),
                                   b.atomic(fx(Effect::Kind::RandomX, "rock", 30.0, 450.0)),
                                   b.atomic(fx(Effect::Kind::SetY, "rock", 340.0))},
                                  "hit"));
    rules.body.push_back(b.branch(posCmp("rock", Axis::Y, CmpOp::Lt, 6.0),
                                  {b.atomic(fx(Effect::Kind::AddVar, "dodged", 1.0)),
                                   b.atomic(fx(Effect::Kind::RandomX, "rock", 30.0, 450.0)),
                                   b.atomic(fx(Effect::Kind::SetY, "rock", 340.0))},
                                  "dodge"));
    rules.body.push_back(b.branch(varCmp("hits", CmpOp::Ge, 3.0),
                                  {b.atomic(fx(Effect::Kind::Stop), "lose")},
                                  "threeHits"));
    rules.body.push_back(b.branch(varCmp("dodged", CmpOp::Ge, 7.0),
                                  {b.atomic(fx(Effect::Kind::Win), "win")},
                                  "survived"));

    spec.scripts = {boot, controls, falling, rules};
    finishSpec(spec);
    return spec;
}

} // namespace

std::vector<GameSpec> builtinGames() {
    return {makeCoinMaze(), makeCatcher(), makeDodger()};
}

const GameSpec& builtinGame(const std::string& id) {
    static const std::vector<GameSpec> games = builtinGames();
    for (const auto& game : games)
        if (game.id == id) return game;
    throw std::invalid_argument("unknown game '" + id + "'");
}

} // namespace manynet
