#include "ocltrace/ast.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace ocltrace {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

// ---------------------------------------------------------------------------
// Values
// ---------------------------------------------------------------------------

Value Value::collection(CollKind kind, std::vector<Value> elements) {
    std::sort(elements.begin(), elements.end(),
              [](const Value& a, const Value& b) { return compareValues(a, b) < 0; });
    if (kind == CollKind::Set) {
        elements.erase(std::unique(elements.begin(), elements.end(),
                                   [](const Value& a, const Value& b) { return valueEquals(a, b); }),
                       elements.end());
    }
    return Value{Coll{kind, std::move(elements)}};
}

int compareValues(const Value& a, const Value& b) {
    if (a.v.index() != b.v.index())
        return a.v.index() < b.v.index() ? -1 : 1;
    return std::visit(
        overloaded{
            [](const Undefined&, const Undefined&) { return 0; },
            [](bool x, bool y) { return x == y ? 0 : (x < y ? -1 : 1); },
            [](std::int64_t x, std::int64_t y) { return x == y ? 0 : (x < y ? -1 : 1); },
            [](const std::string& x, const std::string& y) { return x.compare(y); },
            [](const EnumValue& x, const EnumValue& y) {
                if (int c = x.enumName.compare(y.enumName))
                    return c;
                return x.literal.compare(y.literal);
            },
            [](const Oid& x, const Oid& y) { return x.name.compare(y.name); },
            [](const Coll& x, const Coll& y) {
                if (x.kind != y.kind)
                    return x.kind == CollKind::Set ? -1 : 1;
                size_t n = std::min(x.elements.size(), y.elements.size());
                for (size_t i = 0; i < n; ++i)
                    if (int c = compareValues(x.elements[i], y.elements[i]))
                        return c;
                if (x.elements.size() != y.elements.size())
                    return x.elements.size() < y.elements.size() ? -1 : 1;
                return 0;
            },
            [](const auto&, const auto&) {
                assert(false && "unreachable: indices equal");
                return 0;
            }},
        a.v, b.v);
}

bool valueEquals(const Value& a, const Value& b) {
    return compareValues(a, b) == 0;
}

std::string renderValue(const Value& v) {
    return std::visit(
        overloaded{
            [](const Undefined&) { return std::string("Undefined"); },
            [](bool b) { return std::string(b ? "true" : "false"); },
            [](std::int64_t i) { return std::to_string(i); },
            [](const std::string& s) {
                std::string out = "\"";
                for (char c : s) {
                    if (c == '"' || c == '\\')
                        out.push_back('\\');
                    out.push_back(c);
                }
                out.push_back('"');
                return out;
            },
            [](const EnumValue& e) { return e.literal; },
            [](const Oid& o) { return o.name; },
            [](const Coll& c) {
                std::string out = c.kind == CollKind::Set ? "Set{" : "Bag{";
                for (size_t i = 0; i < c.elements.size(); ++i) {
                    if (i)
                        out += ", ";
                    out += renderValue(c.elements[i]);
                }
                out += "}";
                return out;
            }},
        v.v);
}

// ---------------------------------------------------------------------------
// Expression builders
// ---------------------------------------------------------------------------

ExprPtr mkExpr(ExprNode node, SourcePos pos) {
    return std::make_shared<Expr>(Expr{std::move(node), pos});
}

ExprPtr mkBool(bool b, SourcePos pos) { return mkExpr(BoolLit{b}, pos); }
ExprPtr mkInt(std::int64_t i, SourcePos pos) { return mkExpr(IntLit{i}, pos); }
ExprPtr mkStr(std::string s, SourcePos pos) { return mkExpr(StrLit{std::move(s)}, pos); }
ExprPtr mkEnum(std::string enumName, std::string literal, SourcePos pos) {
    return mkExpr(EnumLit{std::move(enumName), std::move(literal)}, pos);
}
ExprPtr mkSelf(SourcePos pos) { return mkExpr(SelfRef{}, pos); }
ExprPtr mkVar(std::string name, SourcePos pos) { return mkExpr(VarRef{std::move(name)}, pos); }
ExprPtr mkAttrNav(ExprPtr source, std::string attr, bool atPre, SourcePos pos) {
    return mkExpr(AttrNav{std::move(source), std::move(attr), atPre}, pos);
}
ExprPtr mkAllInstances(std::string className, SourcePos pos) {
    return mkExpr(AllInstances{std::move(className)}, pos);
}
ExprPtr mkIsDefined(ExprPtr source, SourcePos pos) {
    return mkExpr(IsDefined{std::move(source)}, pos);
}
ExprPtr mkSetLit(std::vector<ExprPtr> elements, SourcePos pos) {
    return mkExpr(SetLit{std::move(elements)}, pos);
}
ExprPtr mkCollCall(ExprPtr source, CollOp op, std::vector<ExprPtr> args, SourcePos pos) {
    return mkExpr(CollCall{std::move(source), op, std::move(args)}, pos);
}
ExprPtr mkQuantifier(ExprPtr source, QuantKind kind, std::string var, ExprPtr body,
                     SourcePos pos) {
    return mkExpr(Quantifier{std::move(source), kind, std::move(var), std::move(body)}, pos);
}
ExprPtr mkBinary(BinOp op, ExprPtr lhs, ExprPtr rhs, SourcePos pos) {
    return mkExpr(Binary{op, std::move(lhs), std::move(rhs)}, pos);
}
ExprPtr mkNot(ExprPtr operand, SourcePos pos) { return mkExpr(NotExpr{std::move(operand)}, pos); }
ExprPtr mkContextInv(std::string className, ExprPtr body, SourcePos pos) {
    return mkExpr(ContextInv{std::move(className), std::move(body)}, pos);
}

// ---------------------------------------------------------------------------
// Structural equality
// ---------------------------------------------------------------------------

bool exprEquals(const ExprPtr& a, const ExprPtr& b) {
    if (a == b)
        return true;
    if (!a || !b)
        return false;
    return exprEquals(*a, *b);
}

static bool allEqual(const std::vector<ExprPtr>& xs, const std::vector<ExprPtr>& ys) {
    if (xs.size() != ys.size())
        return false;
    for (size_t i = 0; i < xs.size(); ++i)
        if (!exprEquals(xs[i], ys[i]))
            return false;
    return true;
}

bool exprEquals(const Expr& a, const Expr& b) {
    if (a.node.index() != b.node.index())
        return false;
    return std::visit(
        overloaded{
            [&](const BoolLit& x) { return x.value == std::get<BoolLit>(b.node).value; },
            [&](const IntLit& x) { return x.value == std::get<IntLit>(b.node).value; },
            [&](const StrLit& x) { return x.value == std::get<StrLit>(b.node).value; },
            [&](const EnumLit& x) {
                const auto& y = std::get<EnumLit>(b.node);
                return x.enumName == y.enumName && x.literal == y.literal;
            },
            [&](const SelfRef&) { return true; },
            [&](const VarRef& x) { return x.name == std::get<VarRef>(b.node).name; },
            [&](const AttrNav& x) {
                const auto& y = std::get<AttrNav>(b.node);
                return x.attr == y.attr && x.atPre == y.atPre && exprEquals(x.source, y.source);
            },
            [&](const AllInstances& x) {
                return x.className == std::get<AllInstances>(b.node).className;
            },
            [&](const IsDefined& x) {
                return exprEquals(x.source, std::get<IsDefined>(b.node).source);
            },
            [&](const SetLit& x) { return allEqual(x.elements, std::get<SetLit>(b.node).elements); },
            [&](const CollCall& x) {
                const auto& y = std::get<CollCall>(b.node);
                return x.op == y.op && exprEquals(x.source, y.source) && allEqual(x.args, y.args);
            },
            [&](const Quantifier& x) {
                const auto& y = std::get<Quantifier>(b.node);
                return x.kind == y.kind && x.var == y.var && exprEquals(x.source, y.source) &&
                       exprEquals(x.body, y.body);
            },
            [&](const Binary& x) {
                const auto& y = std::get<Binary>(b.node);
                return x.op == y.op && exprEquals(x.lhs, y.lhs) && exprEquals(x.rhs, y.rhs);
            },
            [&](const NotExpr& x) {
                return exprEquals(x.operand, std::get<NotExpr>(b.node).operand);
            },
            [&](const ContextInv& x) {
                const auto& y = std::get<ContextInv>(b.node);
                return x.className == y.className && exprEquals(x.body, y.body);
            }},
        a.node);
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

const char* binOpText(BinOp op) {
    switch (op) {
    case BinOp::And: return "and";
    case BinOp::Or: return "or";
    case BinOp::Implies: return "implies";
    case BinOp::Eq: return "=";
    case BinOp::Ne: return "<>";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    }
    return "?";
}

const char* collOpText(CollOp op) {
    switch (op) {
    case CollOp::IsEmpty: return "isEmpty";
    case CollOp::NotEmpty: return "notEmpty";
    case CollOp::Size: return "size";
    case CollOp::Includes: return "includes";
    }
    return "?";
}

namespace {

// Precedence levels mirroring the grammar; higher binds tighter.
enum Level : int {
    kLevelImplies = 1,
    kLevelOr = 2,
    kLevelAnd = 3,
    kLevelNot = 4,
    kLevelCmp = 5,
    kLevelPostfix = 6,
};

int levelOfBinOp(BinOp op) {
    switch (op) {
    case BinOp::Implies: return kLevelImplies;
    case BinOp::Or: return kLevelOr;
    case BinOp::And: return kLevelAnd;
    default: return kLevelCmp;
    }
}

int levelOf(const Expr& e) {
    return std::visit(overloaded{[](const Binary& b) { return levelOfBinOp(b.op); },
                                 [](const NotExpr&) { return (int)kLevelNot; },
                                 [](const ContextInv&) { return (int)kLevelImplies; },
                                 [](const auto&) { return (int)kLevelPostfix; }},
                      e.node);
}

void renderInto(std::string& out, const Expr& e);

void renderChild(std::string& out, const ExprPtr& child, int minLevel) {
    bool parens = levelOf(*child) < minLevel;
    if (parens)
        out += "(";
    renderInto(out, *child);
    if (parens)
        out += ")";
}

// The postfix source slot: anything looser than navigation gets parens.
void renderSource(std::string& out, const ExprPtr& src) { renderChild(out, src, kLevelPostfix); }

void renderInto(std::string& out, const Expr& e) {
    std::visit(
        overloaded{
            [&](const BoolLit& x) { out += x.value ? "true" : "false"; },
            [&](const IntLit& x) { out += std::to_string(x.value); },
            [&](const StrLit& x) { out += renderValue(Value::str(x.value)); },
            [&](const EnumLit& x) { out += x.literal; },
            [&](const SelfRef&) { out += "self"; },
            [&](const VarRef& x) { out += x.name; },
            [&](const AttrNav& x) {
                // Implicit self: `self.attr` is canonically the bare name.
                if (!std::holds_alternative<SelfRef>(x.source->node)) {
                    renderSource(out, x.source);
                    out += ".";
                }
                out += x.attr;
                if (x.atPre)
                    out += "@pre";
            },
            [&](const AllInstances& x) {
                out += x.className;
                out += ".allInstances";
            },
            [&](const IsDefined& x) {
                renderSource(out, x.source);
                out += ".isDefined()";
            },
            [&](const SetLit& x) {
                out += "Set{";
                for (size_t i = 0; i < x.elements.size(); ++i) {
                    if (i)
                        out += ", ";
                    renderChild(out, x.elements[i], kLevelImplies);
                }
                out += "}";
            },
            [&](const CollCall& x) {
                renderSource(out, x.source);
                out += "->";
                out += collOpText(x.op);
                out += "(";
                for (size_t i = 0; i < x.args.size(); ++i) {
                    if (i)
                        out += ", ";
                    renderChild(out, x.args[i], kLevelImplies);
                }
                out += ")";
            },
            [&](const Quantifier& x) {
                renderSource(out, x.source);
                out += "->";
                out += x.kind == QuantKind::ForAll ? "forAll" : "exists";
                out += "(";
                out += x.var;
                out += " | ";
                renderChild(out, x.body, kLevelImplies);
                out += ")";
            },
            [&](const Binary& x) {
                int level = levelOfBinOp(x.op);
                switch (x.op) {
                case BinOp::Implies:
                    // Right-associative: the left child needs strictly tighter.
                    renderChild(out, x.lhs, level + 1);
                    out += " implies ";
                    renderChild(out, x.rhs, level);
                    break;
                case BinOp::And:
                case BinOp::Or:
                    // Left-associative.
                    renderChild(out, x.lhs, level);
                    out += x.op == BinOp::And ? " and " : " or ";
                    renderChild(out, x.rhs, level + 1);
                    break;
                default:
                    // Comparisons are non-associative: both sides tighter.
                    renderChild(out, x.lhs, level + 1);
                    out += " ";
                    out += binOpText(x.op);
                    out += " ";
                    renderChild(out, x.rhs, level + 1);
                    break;
                }
            },
            [&](const NotExpr& x) {
                out += "not ";
                renderChild(out, x.operand, kLevelCmp);
            },
            [&](const ContextInv& x) {
                out += "context ";
                out += x.className;
                out += " inv ";
                renderChild(out, x.body, kLevelImplies);
            }},
        e.node);
}

} // namespace

std::string render(const Expr& e) {
    std::string out;
    renderInto(out, e);
    return out;
}

std::string render(const ExprPtr& e) {
    return e ? render(*e) : std::string();
}

} // namespace ocltrace
