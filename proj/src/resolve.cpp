#include "ocltrace/resolve.hpp"

#include <cassert>

namespace ocltrace {

StaticType staticTypeOf(const AttrType& t) {
    switch (t.kind) {
    case AttrType::Kind::Boolean: return StaticType::boolean();
    case AttrType::Kind::Integer: return StaticType::integer();
    case AttrType::Kind::String: return StaticType::string();
    case AttrType::Kind::Enum: return StaticType::enumeration(t.name);
    case AttrType::Kind::Ref: return StaticType::object(t.name);
    case AttrType::Kind::SetOf:
        return StaticType::coll(CollKind::Set, StaticType::object(t.name));
    }
    return StaticType::anyType();
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

struct Resolver {
    const Model& model;
    const ResolveContext& ctx;
    std::vector<std::pair<std::string, StaticType>> scope; // innermost last
    std::vector<Diag>& errors;

    void error(DiagCode code, SourcePos pos, std::string msg) {
        errors.push_back(Diag{code, pos, std::move(msg), {}});
    }

    const StaticType* lookupVar(const std::string& name) const {
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
            if (it->first == name)
                return &it->second;
        auto it = ctx.bindings.find(name);
        return it == ctx.bindings.end() ? nullptr : &it->second;
    }

    const AttrDef* selfAttr(const std::string& name) const {
        if (!ctx.selfClass)
            return nullptr;
        const ClassDef* cls = model.findClass(*ctx.selfClass);
        return cls ? cls->findAttr(name) : nullptr;
    }

    // Result type of navigating `attr` from a source of type `src`; reports
    // and returns Any when the navigation cannot be checked.
    StaticType navType(const StaticType& src, const std::string& attr, SourcePos pos) {
        switch (src.kind) {
        case StaticType::Kind::Object: {
            const ClassDef* cls = model.findClass(src.name);
            const AttrDef* a = cls ? cls->findAttr(attr) : nullptr;
            if (!a) {
                error(DiagCode::UnknownAttribute, pos,
                      "class '" + src.name + "' has no attribute '" + attr + "'");
                return StaticType::anyType();
            }
            return staticTypeOf(a->type);
        }
        case StaticType::Kind::Coll: {
            // Collect semantics: navigate elements, flatten into a Bag.
            StaticType inner = navType(src.elem ? *src.elem : StaticType::anyType(), attr, pos);
            if (inner.kind == StaticType::Kind::Coll)
                inner = inner.elem ? *inner.elem : StaticType::anyType();
            return StaticType::coll(CollKind::Bag, std::move(inner));
        }
        case StaticType::Kind::Any:
            return StaticType::anyType();
        default:
            error(DiagCode::UnknownAttribute, pos,
                  "cannot navigate attribute '" + attr + "' on a non-object value");
            return StaticType::anyType();
        }
    }

    struct Res {
        ExprPtr expr;
        StaticType type;
    };

    Res visit(const ExprPtr& e) {
        return std::visit(
            overloaded{
                [&](const BoolLit&) { return Res{e, StaticType::boolean()}; },
                [&](const IntLit&) { return Res{e, StaticType::integer()}; },
                [&](const StrLit&) { return Res{e, StaticType::string()}; },
                [&](const EnumLit& n) {
                    const EnumDef* def = model.findEnum(n.enumName);
                    bool known = false;
                    if (def)
                        for (const auto& l : def->literals)
                            known = known || l == n.literal;
                    if (!known)
                        error(DiagCode::UnknownEnumLiteral, e->pos,
                              "'" + n.literal + "' is not a literal of enum '" + n.enumName + "'");
                    return Res{e, StaticType::enumeration(n.enumName)};
                },
                [&](const SelfRef&) {
                    if (!ctx.selfClass) {
                        error(DiagCode::UnboundVariable, e->pos,
                              "'self' is not bound in this context");
                        return Res{e, StaticType::anyType()};
                    }
                    return Res{e, StaticType::object(*ctx.selfClass)};
                },
                [&](const VarRef& n) {
                    if (const StaticType* t = lookupVar(n.name))
                        return Res{e, *t};
                    if (const AttrDef* a = selfAttr(n.name)) {
                        // Implicit self navigation.
                        return Res{mkAttrNav(mkSelf(e->pos), n.name, false, e->pos),
                                   staticTypeOf(a->type)};
                    }
                    if (const EnumDef* en = model.enumOfLiteral(n.name))
                        return Res{mkEnum(en->name, n.name, e->pos),
                                   StaticType::enumeration(en->name)};
                    error(DiagCode::UnboundVariable, e->pos, "unbound name '" + n.name + "'");
                    return Res{e, StaticType::anyType()};
                },
                [&](const AttrNav& n) {
                    if (n.atPre && !ctx.allowAtPre)
                        error(DiagCode::AtPreOutsidePostcondition, e->pos,
                              "'@pre' on '" + n.attr + "' is only legal inside a postcondition");
                    Res src = visit(n.source);
                    StaticType t = navType(src.type, n.attr, e->pos);
                    return Res{mkAttrNav(src.expr, n.attr, n.atPre, e->pos), std::move(t)};
                },
                [&](const AllInstances& n) {
                    if (!model.findClass(n.className)) {
                        error(DiagCode::UnknownClass, e->pos,
                              "unknown class '" + n.className + "' in allInstances");
                        return Res{e, StaticType::anyType()};
                    }
                    return Res{e, StaticType::coll(CollKind::Set,
                                                   StaticType::object(n.className))};
                },
                [&](const IsDefined& n) {
                    Res src = visit(n.source);
                    return Res{mkIsDefined(src.expr, e->pos), StaticType::boolean()};
                },
                [&](const SetLit& n) {
                    std::vector<ExprPtr> elems;
                    StaticType elemType = StaticType::anyType();
                    bool first = true;
                    for (const auto& el : n.elements) {
                        Res r = visit(el);
                        if (first) {
                            elemType = r.type;
                            first = false;
                        }
                        elems.push_back(std::move(r.expr));
                    }
                    return Res{mkSetLit(std::move(elems), e->pos),
                               StaticType::coll(CollKind::Set, std::move(elemType))};
                },
                [&](const CollCall& n) {
                    Res src = visit(n.source);
                    if (src.type.kind != StaticType::Kind::Coll &&
                        src.type.kind != StaticType::Kind::Any)
                        error(DiagCode::TypeMismatch, e->pos,
                              std::string("'->") + collOpText(n.op) +
                                  "' requires a collection source");
                    size_t wantArgs = n.op == CollOp::Includes ? 1 : 0;
                    if (n.args.size() != wantArgs)
                        error(DiagCode::ArityMismatch, e->pos,
                              std::string("'->") + collOpText(n.op) + "' takes " +
                                  std::to_string(wantArgs) + " argument(s)");
                    std::vector<ExprPtr> args;
                    for (const auto& a : n.args)
                        args.push_back(visit(a).expr);
                    StaticType t = n.op == CollOp::Size ? StaticType::integer()
                                                        : StaticType::boolean();
                    return Res{mkCollCall(src.expr, n.op, std::move(args), e->pos), std::move(t)};
                },
                [&](const Quantifier& n) {
                    Res src = visit(n.source);
                    StaticType elemType = StaticType::anyType();
                    if (src.type.kind == StaticType::Kind::Coll && src.type.elem)
                        elemType = *src.type.elem;
                    else if (src.type.kind != StaticType::Kind::Any &&
                             src.type.kind != StaticType::Kind::Coll)
                        error(DiagCode::TypeMismatch, e->pos,
                              std::string("'->") +
                                  (n.kind == QuantKind::ForAll ? "forAll" : "exists") +
                                  "' requires a collection source");
                    scope.emplace_back(n.var, std::move(elemType));
                    Res body = visit(n.body);
                    scope.pop_back();
                    return Res{mkQuantifier(src.expr, n.kind, n.var, body.expr, e->pos),
                               StaticType::boolean()};
                },
                [&](const Binary& n) {
                    Res lhs = visit(n.lhs);
                    Res rhs = visit(n.rhs);
                    return Res{mkBinary(n.op, lhs.expr, rhs.expr, e->pos), StaticType::boolean()};
                },
                [&](const NotExpr& n) {
                    Res r = visit(n.operand);
                    return Res{mkNot(r.expr, e->pos), StaticType::boolean()};
                },
                [&](const ContextInv& n) {
                    if (!model.findClass(n.className)) {
                        error(DiagCode::UnknownClass, e->pos,
                              "unknown class '" + n.className + "' in context invariant");
                        return Res{e, StaticType::boolean()};
                    }
                    ResolveContext inner;
                    inner.bindings = ctx.bindings;
                    inner.selfClass = n.className;
                    inner.allowAtPre = ctx.allowAtPre;
                    Resolver sub{model, inner, {}, errors};
                    Resolver::Res body = sub.visit(n.body);
                    return Res{mkContextInv(n.className, body.expr, e->pos),
                               StaticType::boolean()};
                }},
            e->node);
    }
};

} // namespace

ResolveResult resolve(const ExprPtr& expr, const Model& model, const ResolveContext& ctx) {
    assert(expr);
    ResolveResult result;
    Resolver r{model, ctx, {}, result.errors};
    Resolver::Res res = r.visit(expr);
    result.type = std::move(res.type);
    if (result.errors.empty())
        result.expr = std::move(res.expr);
    return result;
}

} // namespace ocltrace
