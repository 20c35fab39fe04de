#include "ocltrace/parser.hpp"

#include <cassert>
#include <cctype>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>

#include "ocltrace/resolve.hpp"

namespace ocltrace {

namespace {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

enum class Tok {
    End,
    Ident,   // keywords are context-sensitive identifiers
    Int,
    String,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Bar,
    Dot,
    Arrow,  // ->
    Assign, // :=
    Colon,
    AtPre, // @pre
    Eq,    // =
    Ne,    // <>
    Lt,
    Le,
    Gt,
    Ge,
};

const char* tokName(Tok t) {
    switch (t) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::String: return "string";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Bar: return "'|'";
    case Tok::Dot: return "'.'";
    case Tok::Arrow: return "'->'";
    case Tok::Assign: return "':='";
    case Tok::Colon: return "':'";
    case Tok::AtPre: return "'@pre'";
    case Tok::Eq: return "'='";
    case Tok::Ne: return "'<>'";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    }
    return "?";
}

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::int64_t intValue = 0;
    SourcePos pos;
};

struct LexError {
    SourcePos pos;
    std::string message;
};

// Identifiers may contain '-' when followed by an alphanumeric, so generator
// labels like NEW-MARRY-MESSAGE lex as one token while `a->b` still splits.
std::vector<Token> lex(const std::string& text, std::vector<Diag>& errors) {
    std::vector<Token> out;
    size_t i = 0;
    int line = 1, col = 1;
    auto pos = [&] { return SourcePos{line, col}; };
    auto advance = [&](size_t n) {
        for (size_t k = 0; k < n && i < text.size(); ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto peek = [&](size_t off = 0) -> char {
        return i + off < text.size() ? text[i + off] : '\0';
    };

    while (i < text.size()) {
        char c = peek();
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '-' && peek(1) == '-') { // comment to end of line
            while (i < text.size() && text[i] != '\n')
                advance(1);
            continue;
        }
        SourcePos p = pos();
        if (std::isalpha((unsigned char)c) || c == '_') {
            std::string ident;
            while (i < text.size()) {
                char d = peek();
                if (std::isalnum((unsigned char)d) || d == '_') {
                    ident.push_back(d);
                    advance(1);
                } else if (d == '-' && (std::isalnum((unsigned char)peek(1)) || peek(1) == '_')) {
                    ident.push_back(d);
                    advance(1);
                } else {
                    break;
                }
            }
            out.push_back(Token{Tok::Ident, std::move(ident), 0, p});
            continue;
        }
        if (std::isdigit((unsigned char)c)) {
            std::string digits;
            while (std::isdigit((unsigned char)peek())) {
                digits.push_back(peek());
                advance(1);
            }
            out.push_back(Token{Tok::Int, digits, std::strtoll(digits.c_str(), nullptr, 10), p});
            continue;
        }
        if (c == '"') {
            advance(1);
            std::string s;
            bool closed = false;
            while (i < text.size()) {
                char d = peek();
                if (d == '\\' && i + 1 < text.size()) {
                    char e = peek(1);
                    s.push_back(e == 'n' ? '\n' : e);
                    advance(2);
                    continue;
                }
                if (d == '"') {
                    advance(1);
                    closed = true;
                    break;
                }
                s.push_back(d);
                advance(1);
            }
            if (!closed)
                errors.push_back(Diag{DiagCode::ParseError, p, "unterminated string literal", {}});
            out.push_back(Token{Tok::String, std::move(s), 0, p});
            continue;
        }
        auto two = [&](char a, char b) { return c == a && peek(1) == b; };
        if (two('-', '>')) {
            out.push_back(Token{Tok::Arrow, "->", 0, p});
            advance(2);
            continue;
        }
        if (two(':', '=')) {
            out.push_back(Token{Tok::Assign, ":=", 0, p});
            advance(2);
            continue;
        }
        if (two('<', '>')) {
            out.push_back(Token{Tok::Ne, "<>", 0, p});
            advance(2);
            continue;
        }
        if (two('<', '=')) {
            out.push_back(Token{Tok::Le, "<=", 0, p});
            advance(2);
            continue;
        }
        if (two('>', '=')) {
            out.push_back(Token{Tok::Ge, ">=", 0, p});
            advance(2);
            continue;
        }
        if (c == '@') {
            // Only the @pre marker uses '@'.
            if (peek(1) == 'p' && peek(2) == 'r' && peek(3) == 'e' &&
                !(std::isalnum((unsigned char)peek(4)) || peek(4) == '_')) {
                out.push_back(Token{Tok::AtPre, "@pre", 0, p});
                advance(4);
                continue;
            }
            errors.push_back(Diag{DiagCode::ParseError, p, "stray '@'", {"@pre"}});
            advance(1);
            continue;
        }
        Tok kind;
        switch (c) {
        case '(': kind = Tok::LParen; break;
        case ')': kind = Tok::RParen; break;
        case '{': kind = Tok::LBrace; break;
        case '}': kind = Tok::RBrace; break;
        case ',': kind = Tok::Comma; break;
        case ';': kind = Tok::Semi; break;
        case '|': kind = Tok::Bar; break;
        case '.': kind = Tok::Dot; break;
        case ':': kind = Tok::Colon; break;
        case '=': kind = Tok::Eq; break;
        case '<': kind = Tok::Lt; break;
        case '>': kind = Tok::Gt; break;
        default:
            errors.push_back(
                Diag{DiagCode::ParseError, p, std::string("unexpected character '") + c + "'", {}});
            advance(1);
            continue;
        }
        out.push_back(Token{kind, std::string(1, c), 0, p});
        advance(1);
    }
    out.push_back(Token{Tok::End, "", 0, pos()});
    return out;
}

// ---------------------------------------------------------------------------
// Token cursor
// ---------------------------------------------------------------------------

struct ParseFailure {};

struct Cursor {
    std::vector<Token> tokens;
    size_t index = 0;
    std::vector<Diag>& errors;

    const Token& cur() const { return tokens[index]; }
    const Token& ahead(size_t n = 1) const {
        return tokens[std::min(index + n, tokens.size() - 1)];
    }
    bool at(Tok kind) const { return cur().kind == kind; }
    bool atIdent(const char* word) const {
        return cur().kind == Tok::Ident && cur().text == word;
    }
    void next() {
        if (index + 1 < tokens.size())
            ++index;
    }
    bool eat(Tok kind) {
        if (!at(kind))
            return false;
        next();
        return true;
    }
    bool eatIdent(const char* word) {
        if (!atIdent(word))
            return false;
        next();
        return true;
    }

    [[noreturn]] void fail(std::string message, std::vector<std::string> expected = {}) {
        errors.push_back(Diag{DiagCode::ParseError, cur().pos, std::move(message),
                              std::move(expected)});
        throw ParseFailure{};
    }

    Token expect(Tok kind, const char* what) {
        if (!at(kind))
            fail(std::string("expected ") + what + ", found '" + describe(cur()) + "'",
                 {tokName(kind)});
        Token t = cur();
        next();
        return t;
    }

    Token expectIdent(const char* what) { return expect(Tok::Ident, what); }

    void expectWord(const char* word) {
        if (!eatIdent(word))
            fail(std::string("expected '") + word + "', found '" + describe(cur()) + "'",
                 {std::string("'") + word + "'"});
    }

    static std::string describe(const Token& t) {
        if (t.kind == Tok::End)
            return "end of input";
        return t.text;
    }
};

// ---------------------------------------------------------------------------
// Expression grammar
//   expr := impl
//   impl := disj [ "implies" impl ]
//   disj := conj { "or" conj }
//   conj := neg { "and" neg }
//   neg  := [ "not" ] cmp
//   cmp  := post [ cmpop post ]        (chaining is an error)
//   post := prim { "." ident ["@pre"] ["(" args? ")"] | "->" ident "(" ... ")" }
//   prim := "self" | ident ["@pre"] | literal | "Set" "{" ... "}"
//         | ident "." "allInstances" | "(" expr ")"
// ---------------------------------------------------------------------------

struct ExprParser {
    Cursor& c;

    ExprPtr parse() { return parseImpl(); }

    ExprPtr parseImpl() {
        ExprPtr lhs = parseDisj();
        if (c.atIdent("implies")) {
            SourcePos p = c.cur().pos;
            c.next();
            return mkBinary(BinOp::Implies, lhs, parseImpl(), p); // right-assoc
        }
        return lhs;
    }

    ExprPtr parseDisj() {
        ExprPtr lhs = parseConj();
        while (c.atIdent("or")) {
            SourcePos p = c.cur().pos;
            c.next();
            lhs = mkBinary(BinOp::Or, lhs, parseConj(), p);
        }
        return lhs;
    }

    ExprPtr parseConj() {
        ExprPtr lhs = parseNeg();
        while (c.atIdent("and")) {
            SourcePos p = c.cur().pos;
            c.next();
            lhs = mkBinary(BinOp::And, lhs, parseNeg(), p);
        }
        return lhs;
    }

    ExprPtr parseNeg() {
        if (c.atIdent("not")) {
            SourcePos p = c.cur().pos;
            c.next();
            return mkNot(parseCmp(), p);
        }
        return parseCmp();
    }

    static std::optional<BinOp> cmpOp(const Token& t) {
        switch (t.kind) {
        case Tok::Eq: return BinOp::Eq;
        case Tok::Ne: return BinOp::Ne;
        case Tok::Lt: return BinOp::Lt;
        case Tok::Le: return BinOp::Le;
        case Tok::Gt: return BinOp::Gt;
        case Tok::Ge: return BinOp::Ge;
        default: return std::nullopt;
        }
    }

    ExprPtr parseCmp() {
        ExprPtr lhs = parsePost();
        if (auto op = cmpOp(c.cur())) {
            SourcePos p = c.cur().pos;
            c.next();
            ExprPtr rhs = parsePost();
            if (cmpOp(c.cur()))
                c.fail("comparison operators do not chain; parenthesize");
            return mkBinary(*op, lhs, rhs, p);
        }
        return lhs;
    }

    std::vector<ExprPtr> parseArgs() {
        std::vector<ExprPtr> args;
        if (c.at(Tok::RParen))
            return args;
        args.push_back(parse());
        while (c.eat(Tok::Comma))
            args.push_back(parse());
        return args;
    }

    ExprPtr parsePost() {
        ExprPtr e = parsePrim();
        for (;;) {
            if (c.at(Tok::Dot)) {
                SourcePos p = c.cur().pos;
                c.next();
                Token name = c.expectIdent("attribute or call name");
                if (name.text == "allInstances") {
                    const VarRef* var = std::get_if<VarRef>(&e->node);
                    if (!var)
                        c.fail("allInstances requires a class name");
                    if (c.eat(Tok::LParen)) // optional empty parens
                        c.expect(Tok::RParen, "')'");
                    e = mkAllInstances(var->name, p);
                    continue;
                }
                bool atPre = c.eat(Tok::AtPre);
                if (c.at(Tok::LParen)) {
                    if (atPre)
                        c.fail("'@pre' cannot be applied to a call");
                    if (name.text != "isDefined")
                        c.fail("unknown dotted call '" + name.text +
                               "'; only isDefined() may be called with '.'");
                    c.next();
                    c.expect(Tok::RParen, "')'");
                    e = mkIsDefined(e, p);
                    continue;
                }
                e = mkAttrNav(e, name.text, atPre, p);
                continue;
            }
            if (c.at(Tok::Arrow)) {
                SourcePos p = c.cur().pos;
                c.next();
                Token name = c.expectIdent("collection operation");
                c.expect(Tok::LParen, "'('");
                if (name.text == "forAll" || name.text == "exists") {
                    Token var = c.expectIdent("iterator variable");
                    c.expect(Tok::Bar, "'|'");
                    ExprPtr body = parse();
                    c.expect(Tok::RParen, "')'");
                    e = mkQuantifier(e,
                                     name.text == "forAll" ? QuantKind::ForAll : QuantKind::Exists,
                                     var.text, body, p);
                    continue;
                }
                CollOp op;
                if (name.text == "isEmpty")
                    op = CollOp::IsEmpty;
                else if (name.text == "notEmpty")
                    op = CollOp::NotEmpty;
                else if (name.text == "size")
                    op = CollOp::Size;
                else if (name.text == "includes")
                    op = CollOp::Includes;
                else
                    c.fail("unknown collection operation '" + name.text + "'",
                           {"isEmpty", "notEmpty", "size", "includes", "forAll", "exists"});
                std::vector<ExprPtr> args = parseArgs();
                c.expect(Tok::RParen, "')'");
                e = mkCollCall(e, op, std::move(args), p);
                continue;
            }
            return e;
        }
    }

    ExprPtr parsePrim() {
        SourcePos p = c.cur().pos;
        if (c.at(Tok::Int)) {
            std::int64_t v = c.cur().intValue;
            c.next();
            return mkInt(v, p);
        }
        if (c.at(Tok::String)) {
            std::string s = c.cur().text;
            c.next();
            return mkStr(std::move(s), p);
        }
        if (c.eat(Tok::LParen)) {
            ExprPtr e = parse();
            c.expect(Tok::RParen, "')'");
            return e;
        }
        if (c.at(Tok::Ident)) {
            const std::string& word = c.cur().text;
            if (word == "true" || word == "false") {
                bool v = word == "true";
                c.next();
                return mkBool(v, p);
            }
            if (word == "self") {
                c.next();
                return mkSelf(p);
            }
            if (word == "Set" && c.ahead().kind == Tok::LBrace) {
                c.next();
                c.next();
                std::vector<ExprPtr> elems;
                if (!c.at(Tok::RBrace)) {
                    elems.push_back(parse());
                    while (c.eat(Tok::Comma))
                        elems.push_back(parse());
                }
                c.expect(Tok::RBrace, "'}'");
                return mkSetLit(std::move(elems), p);
            }
            if (word == "not" || word == "and" || word == "or" || word == "implies")
                c.fail("unexpected keyword '" + word + "'");
            std::string name = word;
            c.next();
            // Bare attribute access on the implicit self may carry @pre.
            if (c.eat(Tok::AtPre))
                return mkAttrNav(mkSelf(p), name, true, p);
            return mkVar(std::move(name), p);
        }
        c.fail("expected an expression, found '" + Cursor::describe(c.cur()) + "'",
               {"identifier", "literal", "'('", "'Set{'", "'self'"});
    }
};

// ---------------------------------------------------------------------------
// Model files
// ---------------------------------------------------------------------------

AttrType parseTypeName(Cursor& c) {
    Token t = c.expectIdent("type name");
    if (t.text == "Boolean")
        return {AttrType::Kind::Boolean, ""};
    if (t.text == "Integer")
        return {AttrType::Kind::Integer, ""};
    if (t.text == "String")
        return {AttrType::Kind::String, ""};
    if (t.text == "Set") {
        c.expect(Tok::LParen, "'('");
        Token inner = c.expectIdent("class name");
        c.expect(Tok::RParen, "')'");
        return {AttrType::Kind::SetOf, inner.text};
    }
    // Bare name: enum or class, classified once all declarations are known.
    return {AttrType::Kind::Ref, t.text};
}

struct ModelParser {
    Cursor& c;
    Model model;

    void parseEnum() {
        EnumDef def;
        def.pos = c.cur().pos;
        c.expectWord("enum");
        def.name = c.expectIdent("enum name").text;
        c.expect(Tok::LBrace, "'{'");
        def.literals.push_back(c.expectIdent("enum literal").text);
        while (c.eat(Tok::Comma))
            def.literals.push_back(c.expectIdent("enum literal").text);
        c.expect(Tok::RBrace, "'}'");
        model.enums.push_back(std::move(def));
    }

    ActionList parseActions() {
        ActionList actions;
        while (!c.at(Tok::RBrace) && !c.atIdent("else") && !c.atIdent("endif") &&
               !c.at(Tok::End)) {
            actions.push_back(parseAction());
        }
        return actions;
    }

    Action parseAction() {
        SourcePos p = c.cur().pos;
        if (c.atIdent("if")) {
            c.next();
            IfAction ifa;
            ifa.cond = ExprParser{c}.parse();
            c.expectWord("then");
            ifa.thenBranch = parseActions();
            if (c.eatIdent("else"))
                ifa.elseBranch = parseActions();
            c.expectWord("endif");
            c.expect(Tok::Semi, "';'");
            return Action{std::move(ifa), p};
        }
        if (c.atIdent("return")) {
            c.next();
            ReturnAction ret;
            ret.value = ExprParser{c}.parse();
            c.expect(Tok::Semi, "';'");
            return Action{std::move(ret), p};
        }
        // TARGET.attr := expr ;  — the last navigation names the attribute.
        ExprPtr lhs = ExprParser{c}.parsePost();
        const AttrNav* nav = std::get_if<AttrNav>(&lhs->node);
        if (!nav)
            c.fail("assignment target must end in an attribute access");
        if (nav->atPre)
            c.fail("cannot assign to an '@pre' access");
        AssignAction assign;
        assign.target = nav->source;
        assign.attr = nav->attr;
        c.expect(Tok::Assign, "':='");
        assign.value = ExprParser{c}.parse();
        c.expect(Tok::Semi, "';'");
        return Action{std::move(assign), p};
    }

    OpDef parseOp() {
        OpDef op;
        op.pos = c.cur().pos;
        c.expectWord("op");
        op.name = c.expectIdent("operation name").text;
        c.expect(Tok::LParen, "'('");
        if (!c.at(Tok::RParen)) {
            do {
                ParamDef param;
                param.name = c.expectIdent("parameter name").text;
                c.expect(Tok::Colon, "':'");
                param.type = parseTypeName(c);
                op.params.push_back(std::move(param));
            } while (c.eat(Tok::Comma));
        }
        c.expect(Tok::RParen, "')'");
        for (;;) {
            if (c.atIdent("pre") || c.atIdent("post")) {
                bool isPre = c.cur().text == "pre";
                c.next();
                NamedCondition cond;
                cond.pos = c.cur().pos;
                cond.name = c.expectIdent("condition name").text;
                c.expect(Tok::Colon, "':'");
                cond.expr = ExprParser{c}.parse();
                (isPre ? op.pres : op.posts).push_back(std::move(cond));
                continue;
            }
            if (c.atIdent("body")) {
                c.next();
                c.expect(Tok::LBrace, "'{'");
                op.body = parseActions();
                c.expect(Tok::RBrace, "'}'");
            }
            break;
        }
        return op;
    }

    void parseClass() {
        ClassDef cls;
        cls.pos = c.cur().pos;
        c.expectWord("class");
        cls.name = c.expectIdent("class name").text;
        for (;;) {
            if (c.atIdent("attr")) {
                c.next();
                AttrDef attr;
                attr.pos = c.cur().pos;
                attr.name = c.expectIdent("attribute name").text;
                c.expect(Tok::Colon, "':'");
                attr.type = parseTypeName(c);
                cls.attrs.push_back(std::move(attr));
                continue;
            }
            if (c.atIdent("inv")) {
                c.next();
                InvariantDef inv;
                inv.pos = c.cur().pos;
                inv.name = c.expectIdent("invariant name").text;
                c.expect(Tok::Colon, "':'");
                inv.body = ExprParser{c}.parse();
                cls.invariants.push_back(std::move(inv));
                continue;
            }
            if (c.atIdent("op")) {
                cls.ops.push_back(parseOp());
                continue;
            }
            break;
        }
        c.expectWord("end");
        model.classes.push_back(std::move(cls));
    }

    void parseGenerator() {
        SourcePos p = c.cur().pos;
        c.expectWord("generator");
        if (c.eatIdent("msg")) {
            MsgGenDef gen;
            gen.pos = p;
            gen.label = c.expectIdent("generator label").text;
            c.expect(Tok::LParen, "'('");
            do {
                std::string var = c.expectIdent("variable name").text;
                c.expect(Tok::Colon, "':'");
                std::string cls = c.expectIdent("class name").text;
                gen.vars.emplace_back(std::move(var), std::move(cls));
            } while (c.eat(Tok::Comma));
            c.expect(Tok::RParen, "')'");
            if (c.eatIdent("when"))
                gen.guard = ExprParser{c}.parse();
            c.expectWord("emit");
            gen.emitTarget = c.expectIdent("emit target variable").text;
            c.expect(Tok::Dot, "'.'");
            gen.emitOp = c.expectIdent("operation name").text;
            c.expect(Tok::LParen, "'('");
            if (!c.at(Tok::RParen)) {
                do {
                    gen.emitArgs.push_back(c.expectIdent("argument variable").text);
                } while (c.eat(Tok::Comma));
            }
            c.expect(Tok::RParen, "')'");
            model.generators.push_back(std::move(gen));
            return;
        }
        if (c.eatIdent("obj")) {
            ObjGenDef gen;
            gen.pos = p;
            gen.label = c.expectIdent("generator label").text;
            c.expect(Tok::Colon, "':'");
            gen.className = c.expectIdent("class name").text;
            c.expect(Tok::LBrace, "'{'");
            if (!c.at(Tok::RBrace)) {
                do {
                    std::string attr = c.expectIdent("attribute name").text;
                    c.expect(Tok::Colon, "':'");
                    gen.initializers.emplace_back(attr, ExprParser{c}.parse());
                } while (c.eat(Tok::Comma));
            }
            c.expect(Tok::RBrace, "'}'");
            model.generators.push_back(std::move(gen));
            return;
        }
        c.fail("expected 'msg' or 'obj' after 'generator'", {"'msg'", "'obj'"});
    }

    void parseTop() {
        while (!c.at(Tok::End)) {
            if (c.atIdent("enum")) {
                parseEnum();
            } else if (c.atIdent("class")) {
                parseClass();
            } else if (c.atIdent("generator")) {
                parseGenerator();
            } else {
                c.fail("expected 'enum', 'class' or 'generator'",
                       {"'enum'", "'class'", "'generator'"});
            }
        }
    }
};

// Classify bare type names as enum or class references.
void classifyTypes(Model& model, std::vector<Diag>& errors) {
    auto fix = [&](AttrType& t, SourcePos pos) {
        if (t.kind != AttrType::Kind::Ref)
            return;
        if (model.findEnum(t.name)) {
            t.kind = AttrType::Kind::Enum;
        } else if (!model.findClass(t.name)) {
            errors.push_back(
                Diag{DiagCode::UnknownType, pos, "unknown type '" + t.name + "'", {}});
        }
    };
    for (auto& cls : model.classes) {
        for (auto& attr : cls.attrs)
            fix(attr.type, attr.pos);
        for (auto& op : cls.ops)
            for (auto& param : op.params)
                fix(param.type, op.pos);
    }
}

// Resolve every embedded expression of the model in its proper context.
void resolveModel(Model& model, std::vector<Diag>& errors) {
    auto run = [&](ExprPtr& expr, const ResolveContext& ctx) {
        if (!expr)
            return;
        ResolveResult r = resolve(expr, model, ctx);
        if (r.ok())
            expr = r.expr;
        else
            errors.insert(errors.end(), r.errors.begin(), r.errors.end());
    };

    for (auto& cls : model.classes) {
        ResolveContext invCtx;
        invCtx.selfClass = cls.name;
        for (auto& inv : cls.invariants)
            run(inv.body, invCtx);

        for (auto& op : cls.ops) {
            ResolveContext opCtx;
            opCtx.selfClass = cls.name;
            for (const auto& param : op.params)
                opCtx.bindings[param.name] = staticTypeOf(param.type);
            for (auto& cond : op.pres)
                run(cond.expr, opCtx);
            ResolveContext postCtx = opCtx;
            postCtx.allowAtPre = true;
            for (auto& cond : op.posts)
                run(cond.expr, postCtx);

            std::function<void(ActionList&)> resolveActions = [&](ActionList& actions) {
                for (auto& action : actions) {
                    if (auto* assign = std::get_if<AssignAction>(&action.node)) {
                        ResolveResult t = resolve(assign->target, model, opCtx);
                        ResolveResult v = resolve(assign->value, model, opCtx);
                        if (t.ok() && v.ok()) {
                            assign->target = t.expr;
                            assign->value = v.expr;
                            // The target must denote an object (possibly via
                            // a singleton collection), carrying the attribute.
                            const std::string* cls2 = nullptr;
                            if (t.type.kind == StaticType::Kind::Object)
                                cls2 = &t.type.name;
                            else if (t.type.kind == StaticType::Kind::Coll && t.type.elem &&
                                     t.type.elem->kind == StaticType::Kind::Object)
                                cls2 = &t.type.elem->name;
                            if (cls2) {
                                const ClassDef* cd = model.findClass(*cls2);
                                if (cd && !cd->findAttr(assign->attr))
                                    errors.push_back(Diag{DiagCode::UnknownAttribute, action.pos,
                                                          "class '" + *cls2 +
                                                              "' has no attribute '" +
                                                              assign->attr + "'",
                                                          {}});
                            } else if (t.type.kind != StaticType::Kind::Any) {
                                errors.push_back(Diag{DiagCode::TypeMismatch, action.pos,
                                                      "assignment target must have class type",
                                                      {}});
                            }
                        } else {
                            errors.insert(errors.end(), t.errors.begin(), t.errors.end());
                            errors.insert(errors.end(), v.errors.begin(), v.errors.end());
                        }
                    } else if (auto* ifa = std::get_if<IfAction>(&action.node)) {
                        run(ifa->cond, opCtx);
                        resolveActions(ifa->thenBranch);
                        resolveActions(ifa->elseBranch);
                    } else {
                        run(std::get<ReturnAction>(action.node).value, opCtx);
                    }
                }
            };
            resolveActions(op.body);
        }
    }

    for (auto& g : model.generators) {
        if (auto* gen = std::get_if<MsgGenDef>(&g)) {
            ResolveContext ctx;
            for (const auto& [var, cls] : gen->vars)
                if (model.findClass(cls))
                    ctx.bindings[var] = StaticType::object(cls);
            if (gen->guard)
                run(gen->guard, ctx);
        } else {
            auto& objGen = std::get<ObjGenDef>(g);
            ResolveContext ctx; // constants only: no self, no bindings
            for (auto& [attr, expr] : objGen.initializers)
                run(expr, ctx);
        }
    }
}

// ---------------------------------------------------------------------------
// Scenario files
// ---------------------------------------------------------------------------

Oid parseOid(Cursor& c) {
    Token t = c.expectIdent("object name");
    if (t.text == "id" && c.at(Tok::LParen)) {
        c.next();
        Token n = c.expect(Tok::Int, "number");
        c.expect(Tok::RParen, "')'");
        return Oid{"id(" + n.text + ")"};
    }
    return Oid{t.text};
}

struct ScenarioParser {
    Cursor& c;
    const Model& model;
    Configuration config;
    // Raw object declarations; values are evaluated once all oids are known.
    struct RawObject {
        Oid oid;
        std::string className;
        std::vector<std::pair<std::string, ExprPtr>> inits;
        SourcePos pos;
    };
    std::vector<RawObject> rawObjects;
    struct RawCall {
        Oid target;
        std::string opName;
        std::vector<ExprPtr> args;
        SourcePos pos;
    };
    std::vector<RawCall> rawCalls;

    void parseTop() {
        while (!c.at(Tok::End)) {
            if (c.atIdent("object")) {
                parseObject();
            } else if (c.atIdent("msg")) {
                parseMsg();
            } else if (c.atIdent("budget")) {
                c.next();
                Token n = c.expect(Tok::Int, "budget size");
                config.budget = CreationBudget{(std::uint64_t)n.intValue};
            } else {
                c.fail("expected 'object', 'msg' or 'budget'",
                       {"'object'", "'msg'", "'budget'"});
            }
        }
    }

    void parseObject() {
        RawObject obj;
        obj.pos = c.cur().pos;
        c.expectWord("object");
        obj.oid = parseOid(c);
        c.expect(Tok::Colon, "':'");
        obj.className = c.expectIdent("class name").text;
        c.expect(Tok::LBrace, "'{'");
        if (!c.at(Tok::RBrace)) {
            do {
                std::string attr = c.expectIdent("attribute name").text;
                c.expect(Tok::Colon, "':'");
                obj.inits.emplace_back(attr, ExprParser{c}.parse());
            } while (c.eat(Tok::Comma));
        }
        c.expect(Tok::RBrace, "'}'");
        rawObjects.push_back(std::move(obj));
    }

    void parseMsg() {
        RawCall call;
        call.pos = c.cur().pos;
        c.expectWord("msg");
        call.target = parseOid(c);
        c.expect(Tok::Dot, "'.'");
        call.opName = c.expectIdent("operation name").text;
        c.expect(Tok::LParen, "'('");
        if (!c.at(Tok::RParen)) {
            do {
                call.args.push_back(ExprParser{c}.parse());
            } while (c.eat(Tok::Comma));
        }
        c.expect(Tok::RParen, "')'");
        rawCalls.push_back(std::move(call));
    }
};

// Evaluates a constant scenario expression: literals, enum literals,
// declared object names, Undefined, and Set{...} of these.
std::optional<Value> constValue(const ExprPtr& expr,
                                const std::map<std::string, std::string>& oidClasses,
                                const Model& model, std::vector<Diag>& errors) {
    if (const auto* b = std::get_if<BoolLit>(&expr->node))
        return Value::boolean(b->value);
    if (const auto* i = std::get_if<IntLit>(&expr->node))
        return Value::integer(i->value);
    if (const auto* s = std::get_if<StrLit>(&expr->node))
        return Value::str(s->value);
    if (const auto* e = std::get_if<EnumLit>(&expr->node))
        return Value::enumLit(e->enumName, e->literal);
    if (const auto* v = std::get_if<VarRef>(&expr->node)) {
        if (v->name == "Undefined")
            return Value::undefined();
        if (oidClasses.count(v->name))
            return Value::oid(v->name);
        if (const EnumDef* en = model.enumOfLiteral(v->name))
            return Value::enumLit(en->name, v->name);
        errors.push_back(Diag{DiagCode::UnboundVariable, expr->pos,
                              "unknown object or literal '" + v->name + "'", {}});
        return std::nullopt;
    }
    if (const auto* set = std::get_if<SetLit>(&expr->node)) {
        std::vector<Value> elems;
        for (const auto& el : set->elements) {
            auto v = constValue(el, oidClasses, model, errors);
            if (!v)
                return std::nullopt;
            elems.push_back(std::move(*v));
        }
        return Value::collection(CollKind::Set, std::move(elems));
    }
    errors.push_back(Diag{DiagCode::ParseError, expr->pos,
                          "expected a constant value, found '" + render(expr) + "'", {}});
    return std::nullopt;
}

// Checks a constant value against a declared attribute/parameter type.
bool valueMatchesType(const Value& v, const AttrType& type,
                      const std::map<std::string, std::string>& oidClasses) {
    if (v.isUndefined())
        return true;
    switch (type.kind) {
    case AttrType::Kind::Boolean: return v.asBool() != nullptr;
    case AttrType::Kind::Integer: return v.asInt() != nullptr;
    case AttrType::Kind::String: return v.asStr() != nullptr;
    case AttrType::Kind::Enum: {
        const EnumValue* e = v.asEnum();
        return e && e->enumName == type.name;
    }
    case AttrType::Kind::Ref: {
        const Oid* oid = v.asOid();
        if (!oid)
            return false;
        auto it = oidClasses.find(oid->name);
        return it != oidClasses.end() && it->second == type.name;
    }
    case AttrType::Kind::SetOf: {
        const Coll* coll = v.asColl();
        if (!coll || coll->kind != CollKind::Set)
            return false;
        for (const auto& el : coll->elements) {
            const Oid* oid = el.asOid();
            if (!oid)
                return false;
            auto it = oidClasses.find(oid->name);
            if (it == oidClasses.end() || it->second != type.name)
                return false;
        }
        return true;
    }
    }
    return false;
}

} // namespace

// ---------------------------------------------------------------------------
// Public entry points
// ---------------------------------------------------------------------------

ParseResult<ExprPtr> parseExpr(const std::string& text) {
    ParseResult<ExprPtr> result;
    std::vector<Token> tokens = lex(text, result.errors);
    if (!result.errors.empty())
        return result;
    Cursor cursor{std::move(tokens), 0, result.errors};
    try {
        ExprPtr e = ExprParser{cursor}.parse();
        if (!cursor.at(Tok::End))
            cursor.fail("unexpected trailing input '" + Cursor::describe(cursor.cur()) + "'");
        result.value = std::move(e);
    } catch (const ParseFailure&) {
    }
    return result;
}

ParseResult<Model> parseModel(const std::string& text) {
    ParseResult<Model> result;
    std::vector<Token> tokens = lex(text, result.errors);
    if (!result.errors.empty())
        return result;
    Cursor cursor{std::move(tokens), 0, result.errors};
    ModelParser parser{cursor, {}};
    try {
        parser.parseTop();
    } catch (const ParseFailure&) {
        return result;
    }
    Model model = std::move(parser.model);
    classifyTypes(model, result.errors);
    if (!result.errors.empty())
        return result;
    std::vector<Diag> structural = validate(model);
    if (!structural.empty()) {
        result.errors = std::move(structural);
        return result;
    }
    resolveModel(model, result.errors);
    if (!result.errors.empty())
        return result;
    result.value = std::move(model);
    return result;
}

ParseResult<Configuration> parseScenario(const std::string& text, const Model& model) {
    ParseResult<Configuration> result;
    std::vector<Token> tokens = lex(text, result.errors);
    if (!result.errors.empty())
        return result;
    Cursor cursor{std::move(tokens), 0, result.errors};
    ScenarioParser parser{cursor, model, {}, {}, {}};
    try {
        parser.parseTop();
    } catch (const ParseFailure&) {
        return result;
    }

    // Pass 1: collect oids so object references may point forward.
    std::map<std::string, std::string> oidClasses;
    for (const auto& raw : parser.rawObjects) {
        if (!model.findClass(raw.className)) {
            result.errors.push_back(Diag{DiagCode::UnknownClass, raw.pos,
                                         "unknown class '" + raw.className + "'", {}});
            continue;
        }
        if (!oidClasses.emplace(raw.oid.name, raw.className).second)
            result.errors.push_back(Diag{DiagCode::DuplicateOid, raw.pos,
                                         "object '" + raw.oid.name + "' declared twice", {}});
    }
    if (!result.errors.empty())
        return result;

    Configuration config = std::move(parser.config);
    for (const auto& raw : parser.rawObjects) {
        const ClassDef* cls = model.findClass(raw.className);
        ObjectInstance obj;
        obj.oid = raw.oid;
        obj.className = raw.className;
        std::set<std::string> declared;
        for (const auto& [attr, expr] : raw.inits) {
            declared.insert(attr);
            const AttrDef* def = cls->findAttr(attr);
            if (!def) {
                result.errors.push_back(Diag{DiagCode::UnknownAttribute, expr->pos,
                                             "class '" + raw.className +
                                                 "' has no attribute '" + attr + "'",
                                             {}});
                continue;
            }
            auto v = constValue(expr, oidClasses, model, result.errors);
            if (!v)
                continue;
            if (!valueMatchesType(*v, def->type, oidClasses)) {
                result.errors.push_back(Diag{DiagCode::TypeMismatch, expr->pos,
                                             "value " + renderValue(*v) +
                                                 " does not match type " +
                                                 attrTypeText(def->type) + " of attribute '" +
                                                 attr + "'",
                                             {}});
                continue;
            }
            obj.attrs[attr] = std::move(*v);
        }
        for (const auto& a : cls->attrs)
            if (!declared.count(a.name))
                result.errors.push_back(Diag{DiagCode::MissingAttribute, raw.pos,
                                             "object '" + raw.oid.name +
                                                 "' does not initialize attribute '" + a.name +
                                                 "'",
                                             {}});
        config.objects[obj.oid] = std::move(obj);
    }

    for (const auto& raw : parser.rawCalls) {
        auto clsIt = oidClasses.find(raw.target.name);
        if (clsIt == oidClasses.end()) {
            result.errors.push_back(Diag{DiagCode::UnknownClass, raw.pos,
                                         "message target '" + raw.target.name +
                                             "' is not a declared object",
                                         {}});
            continue;
        }
        const OpDef* op = model.findClass(clsIt->second)->findOp(raw.opName);
        if (!op) {
            result.errors.push_back(Diag{DiagCode::UnknownOperation, raw.pos,
                                         "class '" + clsIt->second + "' has no operation '" +
                                             raw.opName + "'",
                                         {}});
            continue;
        }
        if (op->params.size() != raw.args.size()) {
            result.errors.push_back(Diag{DiagCode::ArityMismatch, raw.pos,
                                         "operation '" + raw.opName + "' takes " +
                                             std::to_string(op->params.size()) +
                                             " argument(s), got " +
                                             std::to_string(raw.args.size()),
                                         {}});
            continue;
        }
        PendingCall call;
        call.target = raw.target;
        call.opName = raw.opName;
        bool ok = true;
        for (size_t i = 0; i < raw.args.size(); ++i) {
            auto v = constValue(raw.args[i], oidClasses, model, result.errors);
            if (!v) {
                ok = false;
                break;
            }
            if (!valueMatchesType(*v, op->params[i].type, oidClasses)) {
                result.errors.push_back(Diag{DiagCode::TypeMismatch, raw.pos,
                                             "argument " + std::to_string(i + 1) + " of '" +
                                                 raw.opName + "' does not match type " +
                                                 attrTypeText(op->params[i].type),
                                             {}});
                ok = false;
                break;
            }
            call.args.push_back(std::move(*v));
        }
        if (ok)
            config.pending.push_back(std::move(call));
    }

    if (!result.errors.empty())
        return result;
    result.value = std::move(config);
    return result;
}

ParseResult<PendingCall> parseCall(const std::string& text, const Model& model,
                                   const Configuration& config) {
    ParseResult<PendingCall> result;
    std::vector<Token> tokens = lex(text, result.errors);
    if (!result.errors.empty())
        return result;
    Cursor cursor{std::move(tokens), 0, result.errors};

    std::map<std::string, std::string> oidClasses;
    for (const auto& [oid, obj] : config.objects)
        oidClasses[oid.name] = obj.className;

    try {
        Oid target = parseOid(cursor);
        cursor.expect(Tok::Dot, "'.'");
        std::string opName = cursor.expectIdent("operation name").text;
        cursor.expect(Tok::LParen, "'('");
        std::vector<ExprPtr> args;
        if (!cursor.at(Tok::RParen)) {
            do {
                args.push_back(ExprParser{cursor}.parse());
            } while (cursor.eat(Tok::Comma));
        }
        cursor.expect(Tok::RParen, "')'");
        if (!cursor.at(Tok::End))
            cursor.fail("unexpected trailing input");

        auto clsIt = oidClasses.find(target.name);
        if (clsIt == oidClasses.end()) {
            result.errors.push_back(Diag{DiagCode::UnknownClass, {},
                                         "unknown object '" + target.name + "'", {}});
            return result;
        }
        const OpDef* op = model.findClass(clsIt->second)->findOp(opName);
        if (!op) {
            result.errors.push_back(Diag{DiagCode::UnknownOperation, {},
                                         "class '" + clsIt->second + "' has no operation '" +
                                             opName + "'",
                                         {}});
            return result;
        }
        if (op->params.size() != args.size()) {
            result.errors.push_back(Diag{DiagCode::ArityMismatch, {},
                                         "operation '" + opName + "' takes " +
                                             std::to_string(op->params.size()) + " argument(s)",
                                         {}});
            return result;
        }
        PendingCall call;
        call.target = std::move(target);
        call.opName = std::move(opName);
        for (size_t i = 0; i < args.size(); ++i) {
            auto v = constValue(args[i], oidClasses, model, result.errors);
            if (!v)
                return result;
            if (!valueMatchesType(*v, op->params[i].type, oidClasses)) {
                result.errors.push_back(Diag{DiagCode::TypeMismatch, {},
                                             "argument " + std::to_string(i + 1) + " of '" +
                                                 call.opName + "' does not match type " +
                                                 attrTypeText(op->params[i].type),
                                             {}});
                return result;
            }
            call.args.push_back(std::move(*v));
        }
        result.value = std::move(call);
    } catch (const ParseFailure&) {
    }
    return result;
}

} // namespace ocltrace
