#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "ocltrace/diag.hpp"

namespace ocltrace {

// ---------------------------------------------------------------------------
// Runtime values
// ---------------------------------------------------------------------------

/// Object identifier. Ordered so that configurations and collections have a
/// canonical layout.
struct Oid {
    std::string name;

    auto operator<=>(const Oid&) const = default;
};

struct Value;

struct Undefined {
    bool operator==(const Undefined&) const = default;
};

struct EnumValue {
    std::string enumName;
    std::string literal;

    bool operator==(const EnumValue&) const = default;
};

enum class CollKind { Set, Bag };

/// Finite collection. Elements are kept sorted by canonical value order;
/// Set-kind collections additionally collapse duplicates on construction.
struct Coll {
    CollKind kind = CollKind::Set;
    std::vector<Value> elements;
};

struct Value {
    std::variant<Undefined, bool, std::int64_t, std::string, EnumValue, Oid, Coll> v;

    static Value undefined() { return Value{Undefined{}}; }
    static Value boolean(bool b) { return Value{b}; }
    static Value integer(std::int64_t i) { return Value{i}; }
    static Value str(std::string s) { return Value{std::move(s)}; }
    static Value enumLit(std::string enumName, std::string literal) {
        return Value{EnumValue{std::move(enumName), std::move(literal)}};
    }
    static Value oid(Oid o) { return Value{std::move(o)}; }
    static Value oid(std::string name) { return Value{Oid{std::move(name)}}; }
    /// Builds a collection; sorts and, for Set kind, deduplicates.
    static Value collection(CollKind kind, std::vector<Value> elements);
    static Value emptySet() { return collection(CollKind::Set, {}); }

    bool isUndefined() const { return std::holds_alternative<Undefined>(v); }
    const bool* asBool() const { return std::get_if<bool>(&v); }
    const std::int64_t* asInt() const { return std::get_if<std::int64_t>(&v); }
    const std::string* asStr() const { return std::get_if<std::string>(&v); }
    const EnumValue* asEnum() const { return std::get_if<EnumValue>(&v); }
    const Oid* asOid() const { return std::get_if<Oid>(&v); }
    const Coll* asColl() const { return std::get_if<Coll>(&v); }
};

/// Total order over all values, used for canonical collection layout and
/// configuration keys. Distinct from OCL `=`, which is strict on Undefined.
int compareValues(const Value& a, const Value& b);

/// Structural equality (total, Undefined equals Undefined).
bool valueEquals(const Value& a, const Value& b);

std::string renderValue(const Value& v);

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class BinOp { And, Or, Implies, Eq, Ne, Lt, Le, Gt, Ge };
enum class CollOp { IsEmpty, NotEmpty, Size, Includes };
enum class QuantKind { ForAll, Exists };

struct BoolLit { bool value = false; };
struct IntLit { std::int64_t value = 0; };
struct StrLit { std::string value; };
struct EnumLit { std::string enumName; std::string literal; };
struct SelfRef {};
struct VarRef { std::string name; };
/// `e.attr` or `e.attr@pre`. Navigating a collection maps over its elements
/// and flattens into a Bag (collect semantics).
struct AttrNav { ExprPtr source; std::string attr; bool atPre = false; };
struct AllInstances { std::string className; };
struct IsDefined { ExprPtr source; };
struct SetLit { std::vector<ExprPtr> elements; };
struct CollCall { ExprPtr source; CollOp op = CollOp::IsEmpty; std::vector<ExprPtr> args; };
struct Quantifier { ExprPtr source; QuantKind kind = QuantKind::ForAll; std::string var; ExprPtr body; };
struct Binary { BinOp op = BinOp::And; ExprPtr lhs; ExprPtr rhs; };
struct NotExpr { ExprPtr operand; };
/// `context C inv body`: body holds once per instance of C bound as `self`.
struct ContextInv { std::string className; ExprPtr body; };

using ExprNode = std::variant<BoolLit, IntLit, StrLit, EnumLit, SelfRef, VarRef, AttrNav,
                              AllInstances, IsDefined, SetLit, CollCall, Quantifier, Binary,
                              NotExpr, ContextInv>;

struct Expr {
    ExprNode node;
    SourcePos pos;
};

ExprPtr mkExpr(ExprNode node, SourcePos pos = {});
ExprPtr mkBool(bool b, SourcePos pos = {});
ExprPtr mkInt(std::int64_t i, SourcePos pos = {});
ExprPtr mkStr(std::string s, SourcePos pos = {});
ExprPtr mkEnum(std::string enumName, std::string literal, SourcePos pos = {});
ExprPtr mkSelf(SourcePos pos = {});
ExprPtr mkVar(std::string name, SourcePos pos = {});
ExprPtr mkAttrNav(ExprPtr source, std::string attr, bool atPre = false, SourcePos pos = {});
ExprPtr mkAllInstances(std::string className, SourcePos pos = {});
ExprPtr mkIsDefined(ExprPtr source, SourcePos pos = {});
ExprPtr mkSetLit(std::vector<ExprPtr> elements, SourcePos pos = {});
ExprPtr mkCollCall(ExprPtr source, CollOp op, std::vector<ExprPtr> args = {}, SourcePos pos = {});
ExprPtr mkQuantifier(ExprPtr source, QuantKind kind, std::string var, ExprPtr body,
                     SourcePos pos = {});
ExprPtr mkBinary(BinOp op, ExprPtr lhs, ExprPtr rhs, SourcePos pos = {});
ExprPtr mkNot(ExprPtr operand, SourcePos pos = {});
ExprPtr mkContextInv(std::string className, ExprPtr body, SourcePos pos = {});

/// Structural equality; source positions are ignored.
bool exprEquals(const Expr& a, const Expr& b);
bool exprEquals(const ExprPtr& a, const ExprPtr& b);

/// Canonical text. Deterministic and minimally parenthesized:
/// parse(render(e)) is structurally equal to e, and render(parse(t)) == t
/// for canonical t.
std::string render(const Expr& e);
std::string render(const ExprPtr& e);

const char* binOpText(BinOp op);
const char* collOpText(CollOp op);

} // namespace ocltrace
