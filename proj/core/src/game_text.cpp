#include "manynet/game_text.hpp"

#include <istream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace manynet {

namespace {

struct Parser {
    std::istream& in;
    int lineNo = 0;
    int nextStmtId = 0;
    std::vector<std::string> pending; // pushed-back tokenized line

    [[noreturn]] void fail(const std::string& what) const {
        throw std::runtime_error("game parse error at line " + std::to_string(lineNo) + ": " + what);
    }

    // Next non-empty, non-comment line split into tokens; empty at EOF.
    std::vector<std::string> nextTokens() {
        if (!pending.empty()) {
            auto tokens = pending;
            pending.clear();
            return tokens;
        }
        std::string line;
        while (std::getline(in, line)) {
            ++lineNo;
            std::istringstream ls(line);
            std::vector<std::string> tokens;
            std::string token;
            while (ls >> token) {
                if (token[0] == '#') break;
                tokens.push_back(token);
            }
            if (!tokens.empty()) return tokens;
        }
        return {};
    }

    double number(const std::string& token) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(token, &used);
        } catch (const std::exception&) {
            fail("expected a number, got '" + token + "'");
        }
        if (used != token.size()) fail("expected a number, got '" + token + "'");
        return v;
    }

    CmpOp cmpOp(const std::string& token) {
        if (token == "<") return CmpOp::Lt;
        if (token == "<=") return CmpOp::Le;
        if (token == "==") return CmpOp::Eq;
        if (token == "!=") return CmpOp::Ne;
        if (token == ">=") return CmpOp::Ge;
        if (token == ">") return CmpOp::Gt;
        fail("unknown comparison operator '" + token + "'");
    }

    // Trailing @label on a statement line.
    std::string takeLabel(std::vector<std::string>& tokens) {
        if (!tokens.empty() && tokens.back().size() > 1 && tokens.back()[0] == '@') {
            std::string label = tokens.back().substr(1);
            tokens.pop_back();
            return label;
        }
        return {};
    }

    Predicate parsePredicate(const std::vector<std::string>& t, std::size_t from, std::size_t to) {
        if (from >= to) fail("missing predicate");
        Predicate p;
        const std::string& kind = t[from];
        const auto argc = to - from - 1;
        if (kind == "touching" && argc == 2) {
            p.kind = Predicate::Kind::Touching;
            p.spriteA = t[from + 1];
            p.spriteB = t[from + 2];
        } else if (kind == "keydown" && argc == 1) {
            p.kind = Predicate::Kind::KeyDown;
            p.action = t[from + 1];
        } else if (kind == "cmp" && argc == 3) {
            p.kind = Predicate::Kind::VarCmp;
            p.var = t[from + 1];
            p.op = cmpOp(t[from + 2]);
            p.value = number(t[from + 3]);
        } else if (kind == "pos" && argc == 4) {
            p.kind = Predicate::Kind::PosCmp;
            p.sprite = t[from + 1];
            if (t[from + 2] == "x") p.axis = Axis::X;
            else if (t[from + 2] == "y") p.axis = Axis::Y;
            else fail("expected axis 'x' or 'y'");
            p.op = cmpOp(t[from + 3]);
            p.value = number(t[from + 4]);
        } else {
            fail("unknown predicate '" + kind + "'");
        }
        return p;
    }

    bool parseEffect(const std::vector<std::string>& tokens, Effect& effect) {
        const std::string& kind = tokens[0];
        const auto argc = tokens.size() - 1;
        if (kind == "noop" && argc == 0) effect.kind = Effect::Kind::Noop;
        else if (kind == "win" && argc == 0) effect.kind = Effect::Kind::Win;
        else if (kind == "stop" && argc == 0) effect.kind = Effect::Kind::Stop;
        else if (kind == "moveby" && argc == 3) {
            effect.kind = Effect::Kind::MoveBy;
            effect.sprite = tokens[1];
            effect.a = number(tokens[2]);
            effect.b = number(tokens[3]);
        } else if (kind == "moveto" && argc == 3) {
            effect.kind = Effect::Kind::MoveTo;
            effect.sprite = tokens[1];
            effect.a = number(tokens[2]);
            effect.b = number(tokens[3]);
        } else if (kind == "setx" && argc == 2) {
            effect.kind = Effect::Kind::SetX;
            effect.sprite = tokens[1];
            effect.a = number(tokens[2]);
        } else if (kind == "sety" && argc == 2) {
            effect.kind = Effect::Kind::SetY;
            effect.sprite = tokens[1];
            effect.a = number(tokens[2]);
        } else if (kind == "randomx" && argc == 3) {
            effect.kind = Effect::Kind::RandomX;
            effect.sprite = tokens[1];
            effect.a = number(tokens[2]);
            effect.b = number(tokens[3]);
        } else if (kind == "set" && argc == 2) {
            effect.kind = Effect::Kind::SetVar;
            effect.var = tokens[1];
            effect.a = number(tokens[2]);
        } else if (kind == "add" && argc == 2) {
            effect.kind = Effect::Kind::AddVar;
            effect.var = tokens[1];
            effect.a = number(tokens[2]);
        } else {
            return false;
        }
        return true;
    }

    // Parses statements until one of the given terminators; the terminator
    // tokens are left in `pending`.
    std::vector<Stmt> parseBody(const std::vector<std::string>& terminators) {
        std::vector<Stmt> body;
        for (;;) {
            auto tokens = nextTokens();
            if (tokens.empty()) fail("unexpected end of input inside a script");
            for (const auto& term : terminators) {
                if (tokens[0] == term) {
                    pending = tokens;
                    return body;
                }
            }
            if (tokens[0] == "if") {
                Stmt stmt;
                stmt.kind = Stmt::Kind::If;
                stmt.id = nextStmtId++;
                stmt.label = takeLabel(tokens);
                stmt.predicate = parsePredicate(tokens, 1, tokens.size());
                stmt.thenBody = parseBody({"else", "endif"});
                auto term = nextTokens();
                if (term[0] == "else") {
                    stmt.elseBody = parseBody({"endif"});
                    term = nextTokens();
                }
                if (term[0] != "endif" || term.size() != 1) fail("expected 'endif'");
                body.push_back(std::move(stmt));
                continue;
            }
            Stmt stmt;
            stmt.kind = Stmt::Kind::Atomic;
            stmt.id = nextStmtId++;
            stmt.label = takeLabel(tokens);
            if (!parseEffect(tokens, stmt.effect)) fail("unknown statement '" + tokens[0] + "'");
            body.push_back(std::move(stmt));
        }
    }

    GameSpec parse() {
        GameSpec spec;
        for (;;) {
            auto tokens = nextTokens();
            if (tokens.empty()) break;
            const std::string& keyword = tokens[0];
            if (keyword == "game" && tokens.size() == 2) {
                spec.id = tokens[1];
            } else if (keyword == "actions" && tokens.size() >= 2) {
                spec.actions.assign(tokens.begin() + 1, tokens.end());
            } else if (keyword == "ticks" && tokens.size() == 2) {
                spec.episodeTicks = static_cast<int>(number(tokens[1]));
            } else if (keyword == "sprite" && (tokens.size() == 5 || tokens.size() == 8)) {
                SpriteSpec sprite;
                sprite.name = tokens[1];
                sprite.x = number(tokens[2]);
                sprite.y = number(tokens[3]);
                sprite.radius = number(tokens[4]);
                if (tokens.size() == 8) {
                    if (tokens[5] != "jitter") fail("expected 'jitter <dx> <dy>'");
                    sprite.jitterX = number(tokens[6]);
                    sprite.jitterY = number(tokens[7]);
                }
                spec.sprites.push_back(sprite);
            } else if (keyword == "var" && tokens.size() == 5) {
                spec.variables.push_back({tokens[1], number(tokens[2]), number(tokens[3]), number(tokens[4])});
            } else if (keyword == "wall" && tokens.size() == 5) {
                spec.walls.push_back({number(tokens[1]), number(tokens[2]), number(tokens[3]), number(tokens[4])});
            } else if (keyword == "script" && tokens.size() == 2) {
                Script script;
                if (tokens[1] == "onstart") script.trigger = Script::Trigger::OnStart;
                else if (tokens[1] == "everytick") script.trigger = Script::Trigger::EveryTick;
                else fail("unknown trigger '" + tokens[1] + "'");
                script.body = parseBody({"endscript"});
                auto term = nextTokens();
                if (term[0] != "endscript" || term.size() != 1) fail("expected 'endscript'");
                spec.scripts.push_back(std::move(script));
            } else {
                fail("unknown directive '" + keyword + "'");
            }
        }
        if (spec.id.empty()) fail("missing 'game <id>' directive");

        for (const auto& script : spec.scripts) {
            std::vector<const Stmt*> stack;
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
        }
        spec.validate();
        return spec;
    }
};

std::string formatNumber(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

const char* cmpToken(CmpOp op) {
    switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
    }
    return "?";
}

void formatPredicate(std::ostream& out, const Predicate& p) {
    switch (p.kind) {
    case Predicate::Kind::Touching: out << "touching " << p.spriteA << " " << p.spriteB; break;
    case Predicate::Kind::KeyDown: out << "keydown " << p.action; break;
    case Predicate::Kind::VarCmp: out << "cmp " << p.var << " " << cmpToken(p.op) << " " << formatNumber(p.value); break;
    case Predicate::Kind::PosCmp:
        out << "pos " << p.sprite << " " << (p.axis == Axis::X ? "x" : "y") << " " << cmpToken(p.op) << " "
            << formatNumber(p.value);
        break;
    }
}

void formatEffect(std::ostream& out, const Effect& e) {
    switch (e.kind) {
    case Effect::Kind::Noop: out << "noop"; break;
    case Effect::Kind::Win: out << "win"; break;
    case Effect::Kind::Stop: out << "stop"; break;
    case Effect::Kind::MoveBy: out << "moveby " << e.sprite << " " << formatNumber(e.a) << " " << formatNumber(e.b); break;
    case Effect::Kind::MoveTo: out << "moveto " << e.sprite << " " << formatNumber(e.a) << " " << formatNumber(e.b); break;
    case Effect::Kind::SetX: out << "setx " << e.sprite << " " << formatNumber(e.a); break;
    case Effect::Kind::SetY: out << "sety " << e.sprite << " " << formatNumber(e.a); break;
    case Effect::Kind::RandomX: out << "randomx " << e.sprite << " " << formatNumber(e.a) << " " << formatNumber(e.b); break;
    case Effect::Kind::SetVar: out << "set " << e.var << " " << formatNumber(e.a); break;
    case Effect::Kind::AddVar: out << "add " << e.var << " " << formatNumber(e.a); break;
    }
}

void formatBody(std::ostream& out, const std::vector<Stmt>& body, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    for (const auto& stmt : body) {
        out << pad;
        if (stmt.kind == Stmt::Kind::Atomic) {
            formatEffect(out, stmt.effect);
        } else {
            out << "if ";
            formatPredicate(out, stmt.predicate);
        }
        if (!stmt.label.empty()) out << " @" << stmt.label;
        out << "\n";
        if (stmt.kind == Stmt::Kind::If) {
            formatBody(out, stmt.thenBody, indent + 1);
            if (!stmt.elseBody.empty()) {
                out << pad << "else\n";
                formatBody(out, stmt.elseBody, indent + 1);
            }
            out << pad << "endif\n";
        }
    }
}

} // namespace

GameSpec parseGameSpec(std::istream& in) {
    Parser parser{in};
    return parser.parse();
}

GameSpec parseGameSpec(const std::string& text) {
    std::istringstream in(text);
    return parseGameSpec(in);
}

std::string formatGameSpec(const GameSpec& spec) {
    std::ostringstream out;
    out << "game " << spec.id << "\n";
    out << "actions";
    for (const auto& action : spec.actions) out << " " << action;
    out << "\n";
    out << "ticks " << spec.episodeTicks << "\n";
    for (const auto& sprite : spec.sprites) {
        out << "sprite " << sprite.name << " " << formatNumber(sprite.x) << " " << formatNumber(sprite.y) << " "
            << formatNumber(sprite.radius);
        if (sprite.jitterX > 0.0 || sprite.jitterY > 0.0)
            out << " jitter " << formatNumber(sprite.jitterX) << " " << formatNumber(sprite.jitterY);
        out << "\n";
    }
    for (const auto& var : spec.variables)
        out << "var " << var.name << " " << formatNumber(var.initial) << " " << formatNumber(var.min) << " "
            << formatNumber(var.max) << "\n";
    for (const auto& wall : spec.walls)
        out << "wall " << formatNumber(wall.x0) << " " << formatNumber(wall.y0) << " " << formatNumber(wall.x1) << " "
            << formatNumber(wall.y1) << "\n";
    for (const auto& script : spec.scripts) {
        out << "script " << (script.trigger == Script::Trigger::OnStart ? "onstart" : "everytick") << "\n";
        formatBody(out, script.body, 1);
        out << "endscript\n";
    }
    return out.str();
}

} // namespace manynet
