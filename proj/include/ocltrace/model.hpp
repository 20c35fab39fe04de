#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ocltrace/ast.hpp"
#include "ocltrace/diag.hpp"

namespace ocltrace {

struct EnumDef {
    std::string name;
    std::vector<std::string> literals; // nonempty, pairwise distinct
    SourcePos pos;
};

struct AttrType {
    enum class Kind { Boolean, Integer, String, Enum, Ref, SetOf };
    Kind kind = Kind::Boolean;
    std::string name; // enum or class name for Enum/Ref/SetOf

    bool operator==(const AttrType&) const = default;
};

std::string attrTypeText(const AttrType& t);

struct AttrDef {
    std::string name;
    AttrType type;
    SourcePos pos;
};

struct Action;
using ActionList = std::vector<Action>;

/// `TARGET.attr := value`. The target must evaluate to a single object:
/// an oid, or a singleton collection holding one oid.
struct AssignAction {
    ExprPtr target;
    std::string attr;
    ExprPtr value;
};

struct IfAction {
    ExprPtr cond;
    ActionList thenBranch;
    ActionList elseBranch;
};

struct ReturnAction {
    ExprPtr value;
};

struct Action {
    std::variant<AssignAction, IfAction, ReturnAction> node;
    SourcePos pos;
};

struct NamedCondition {
    std::string name;
    ExprPtr expr;
    SourcePos pos;
};

struct ParamDef {
    std::string name;
    AttrType type;
};

/// Operation with contract and body. The return type is fixed to Integer;
/// a body without an explicit `return` yields 0.
struct OpDef {
    std::string name;
    std::vector<ParamDef> params;
    std::vector<NamedCondition> pres;
    std::vector<NamedCondition> posts;
    ActionList body;
    SourcePos pos;
};

struct InvariantDef {
    std::string name;
    ExprPtr body; // evaluated once per instance with that instance as self
    SourcePos pos;
};

struct ClassDef {
    std::string name;
    std::vector<AttrDef> attrs;
    std::vector<InvariantDef> invariants;
    std::vector<OpDef> ops;
    SourcePos pos;

    const AttrDef* findAttr(const std::string& attrName) const;
    const OpDef* findOp(const std::string& opName) const;
};

/// Spontaneously emits `emitTarget.emitOp(emitArgs...)` for every ordered
/// tuple of distinct live objects bound to `vars` whose guard holds.
struct MsgGenDef {
    std::string label;
    std::vector<std::pair<std::string, std::string>> vars; // (name, className)
    ExprPtr guard;                                         // null = always
    std::string emitTarget;                                // one of vars
    std::string emitOp;
    std::vector<std::string> emitArgs; // subset of vars
    SourcePos pos;
};

/// Spontaneously creates one object of `className` with every attribute
/// initialized from a constant expression.
struct ObjGenDef {
    std::string label;
    std::string className;
    std::vector<std::pair<std::string, ExprPtr>> initializers;
    SourcePos pos;
};

using GeneratorDef = std::variant<MsgGenDef, ObjGenDef>;

/// Validated metamodel. Immutable after validation; shared freely.
struct Model {
    std::vector<EnumDef> enums;
    std::vector<ClassDef> classes;
    std::vector<GeneratorDef> generators;

    const EnumDef* findEnum(const std::string& name) const;
    const ClassDef* findClass(const std::string& name) const;
    /// Enum that declares `literal`, or null. Validation guarantees at most
    /// one enum declares any given literal.
    const EnumDef* enumOfLiteral(const std::string& literal) const;
};

/// Checks all structural invariants of the metamodel: distinct names,
/// existing types, generator arities and attribute coverage, action shapes.
/// Pure; validating an already valid model reports nothing.
std::vector<Diag> validate(const Model& model);

/// Conjunction, in declaration order, of every invariant wrapped as
/// `context C inv body`. Empty model => BoolLit(true); a single invariant
/// is returned unwrapped by `and`.
ExprPtr aggregateInvariant(const Model& model);

} // namespace ocltrace
