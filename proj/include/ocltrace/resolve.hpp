#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ocltrace/ast.hpp"
#include "ocltrace/model.hpp"

namespace ocltrace {

/// Static type inferred during resolution.
struct StaticType {
    enum class Kind { Bool, Int, Str, Enum, Object, Coll, Any };
    Kind kind = Kind::Any;
    std::string name;                 // enum or class name
    CollKind collKind = CollKind::Set;
    std::shared_ptr<StaticType> elem; // element type when Coll

    static StaticType anyType() { return {}; }
    static StaticType boolean() { return {Kind::Bool, "", CollKind::Set, nullptr}; }
    static StaticType integer() { return {Kind::Int, "", CollKind::Set, nullptr}; }
    static StaticType string() { return {Kind::Str, "", CollKind::Set, nullptr}; }
    static StaticType enumeration(std::string n) {
        return {Kind::Enum, std::move(n), CollKind::Set, nullptr};
    }
    static StaticType object(std::string n) {
        return {Kind::Object, std::move(n), CollKind::Set, nullptr};
    }
    static StaticType coll(CollKind k, StaticType e) {
        return {Kind::Coll, "", k, std::make_shared<StaticType>(std::move(e))};
    }
};

StaticType staticTypeOf(const AttrType& t);

/// Name environment for resolution: declared bindings (operation parameters,
/// quantifier variables, scenario object names) plus the optional class of
/// `self` and whether `@pre` is legal (postconditions only).
struct ResolveContext {
    std::map<std::string, StaticType> bindings;
    std::optional<std::string> selfClass;
    bool allowAtPre = false;
};

struct ResolveResult {
    ExprPtr expr; // null when errors nonempty
    StaticType type;
    std::vector<Diag> errors;

    bool ok() const { return errors.empty(); }
};

/// Checks every identifier in `expr` against the model and context and
/// returns the resolved tree: bare names become parameters/variables,
/// enum literals, or implicit-self attribute navigations. The input model
/// must have passed metamodel validation.
ResolveResult resolve(const ExprPtr& expr, const Model& model, const ResolveContext& ctx);

} // namespace ocltrace
