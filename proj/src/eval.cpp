#include "ocltrace/eval.hpp"

#include <cassert>

namespace ocltrace {

const char* verdictName(Verdict v) {
    switch (v) {
    case Verdict::Pass: return "Pass";
    case Verdict::Fail: return "Fail";
    case Verdict::UndefinedResult: return "Undefined";
    }
    return "?";
}

bool CheckReport::allPassed() const {
    for (const auto& e : entries)
        if (e.verdict != Verdict::Pass)
            return false;
    return true;
}

const CheckEntry* CheckReport::firstViolation() const {
    for (const auto& e : entries)
        if (e.verdict != Verdict::Pass)
            return &e;
    return nullptr;
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Three-valued truth used internally while folding boolean connectives.
enum class Tri { False, True, Undef };

Tri triOf(const Value& v) {
    if (const bool* b = v.asBool())
        return *b ? Tri::True : Tri::False;
    return Tri::Undef;
}

Value valueOf(Tri t) {
    switch (t) {
    case Tri::True: return Value::boolean(true);
    case Tri::False: return Value::boolean(false);
    case Tri::Undef: return Value::undefined();
    }
    return Value::undefined();
}

Tri triAnd(Tri a, Tri b) {
    if (a == Tri::False || b == Tri::False)
        return Tri::False;
    if (a == Tri::Undef || b == Tri::Undef)
        return Tri::Undef;
    return Tri::True;
}

Tri triOr(Tri a, Tri b) {
    if (a == Tri::True || b == Tri::True)
        return Tri::True;
    if (a == Tri::Undef || b == Tri::Undef)
        return Tri::Undef;
    return Tri::False;
}

Tri triNot(Tri a) {
    switch (a) {
    case Tri::True: return Tri::False;
    case Tri::False: return Tri::True;
    case Tri::Undef: return Tri::Undef;
    }
    return Tri::Undef;
}

struct Evaluator {
    const Configuration& config;
    const EvalContext& ctx;

    const ObjectMap& objectsFor(bool atPre) const {
        if (atPre) {
            assert(ctx.preState && "@pre evaluation requires a pre-state snapshot");
            if (ctx.preState)
                return *ctx.preState;
        }
        return config.objects;
    }

    Value readAttr(const Oid& oid, const std::string& attr, bool atPre) const {
        const ObjectMap& objects = objectsFor(atPre);
        auto it = objects.find(oid);
        if (it == objects.end())
            return Value::undefined(); // dangling oid
        auto ait = it->second.attrs.find(attr);
        return ait == it->second.attrs.end() ? Value::undefined() : ait->second;
    }

    Value navigate(const Value& source, const std::string& attr, bool atPre) const {
        if (source.isUndefined())
            return Value::undefined();
        if (const Oid* oid = source.asOid())
            return readAttr(*oid, attr, atPre);
        if (const Coll* coll = source.asColl()) {
            // Collect semantics: map over elements and flatten into a Bag.
            std::vector<Value> out;
            for (const Value& el : coll->elements) {
                Value v = navigate(el, attr, atPre);
                if (const Coll* inner = v.asColl())
                    out.insert(out.end(), inner->elements.begin(), inner->elements.end());
                else
                    out.push_back(std::move(v));
            }
            return Value::collection(CollKind::Bag, std::move(out));
        }
        return Value::undefined();
    }

    Value eval(const Expr& e, std::vector<std::pair<std::string, Value>>& locals) const {
        return std::visit(
            overloaded{
                [&](const BoolLit& n) { return Value::boolean(n.value); },
                [&](const IntLit& n) { return Value::integer(n.value); },
                [&](const StrLit& n) { return Value::str(n.value); },
                [&](const EnumLit& n) { return Value::enumLit(n.enumName, n.literal); },
                [&](const SelfRef&) {
                    return ctx.selfOid ? Value::oid(*ctx.selfOid) : Value::undefined();
                },
                [&](const VarRef& n) {
                    for (auto it = locals.rbegin(); it != locals.rend(); ++it)
                        if (it->first == n.name)
                            return it->second;
                    auto it = ctx.env.find(n.name);
                    return it == ctx.env.end() ? Value::undefined() : it->second;
                },
                [&](const AttrNav& n) {
                    return navigate(eval(*n.source, locals), n.attr, n.atPre);
                },
                [&](const AllInstances& n) {
                    std::vector<Value> oids;
                    for (const auto& [oid, obj] : config.objects)
                        if (obj.className == n.className)
                            oids.push_back(Value::oid(oid));
                    return Value::collection(CollKind::Set, std::move(oids));
                },
                [&](const IsDefined& n) {
                    return Value::boolean(!eval(*n.source, locals).isUndefined());
                },
                [&](const SetLit& n) {
                    std::vector<Value> elems;
                    for (const auto& el : n.elements)
                        elems.push_back(eval(*el, locals));
                    return Value::collection(CollKind::Set, std::move(elems));
                },
                [&](const CollCall& n) {
                    Value src = eval(*n.source, locals);
                    const Coll* coll = src.asColl();
                    if (!coll)
                        return Value::undefined();
                    switch (n.op) {
                    case CollOp::IsEmpty: return Value::boolean(coll->elements.empty());
                    case CollOp::NotEmpty: return Value::boolean(!coll->elements.empty());
                    case CollOp::Size:
                        return Value::integer((std::int64_t)coll->elements.size());
                    case CollOp::Includes: {
                        assert(n.args.size() == 1);
                        Value needle = eval(*n.args[0], locals);
                        for (const Value& el : coll->elements)
                            if (valueEquals(el, needle))
                                return Value::boolean(true);
                        return Value::boolean(false);
                    }
                    }
                    return Value::undefined();
                },
                [&](const Quantifier& n) {
                    Value src = eval(*n.source, locals);
                    const Coll* coll = src.asColl();
                    if (!coll)
                        return Value::undefined();
                    // forAll over empty is true, exists over empty is false;
                    // Undefined elements are bound like any element.
                    Tri acc = n.kind == QuantKind::ForAll ? Tri::True : Tri::False;
                    for (const Value& el : coll->elements) {
                        locals.emplace_back(n.var, el);
                        Tri t = triOf(eval(*n.body, locals));
                        locals.pop_back();
                        acc = n.kind == QuantKind::ForAll ? triAnd(acc, t) : triOr(acc, t);
                    }
                    return valueOf(acc);
                },
                [&](const Binary& n) {
                    switch (n.op) {
                    case BinOp::And:
                        return valueOf(triAnd(triOf(eval(*n.lhs, locals)),
                                              triOf(eval(*n.rhs, locals))));
                    case BinOp::Or:
                        return valueOf(triOr(triOf(eval(*n.lhs, locals)),
                                             triOf(eval(*n.rhs, locals))));
                    case BinOp::Implies:
                        return valueOf(triOr(triNot(triOf(eval(*n.lhs, locals))),
                                             triOf(eval(*n.rhs, locals))));
                    case BinOp::Eq:
                    case BinOp::Ne: {
                        Value lhs = eval(*n.lhs, locals);
                        Value rhs = eval(*n.rhs, locals);
                        if (lhs.isUndefined() || rhs.isUndefined())
                            return Value::undefined();
                        bool eq = valueEquals(lhs, rhs);
                        return Value::boolean(n.op == BinOp::Eq ? eq : !eq);
                    }
                    default: {
                        // Order comparisons are defined on integer pairs only.
                        Value lhs = eval(*n.lhs, locals);
                        Value rhs = eval(*n.rhs, locals);
                        const std::int64_t* a = lhs.asInt();
                        const std::int64_t* b = rhs.asInt();
                        if (!a || !b)
                            return Value::undefined();
                        switch (n.op) {
                        case BinOp::Lt: return Value::boolean(*a < *b);
                        case BinOp::Le: return Value::boolean(*a <= *b);
                        case BinOp::Gt: return Value::boolean(*a > *b);
                        case BinOp::Ge: return Value::boolean(*a >= *b);
                        default: return Value::undefined();
                        }
                    }
                    }
                },
                [&](const NotExpr& n) { return valueOf(triNot(triOf(eval(*n.operand, locals)))); },
                [&](const ContextInv& n) {
                    // Conjunction of the body over every instance of the
                    // class, with that instance as self.
                    Tri acc = Tri::True;
                    for (const auto& [oid, obj] : config.objects) {
                        if (obj.className != n.className)
                            continue;
                        EvalContext inner;
                        inner.selfOid = oid;
                        inner.env = ctx.env;
                        inner.preState = ctx.preState;
                        Evaluator sub{config, inner};
                        std::vector<std::pair<std::string, Value>> subLocals;
                        acc = triAnd(acc, triOf(sub.eval(*n.body, subLocals)));
                    }
                    return valueOf(acc);
                }},
            e.node);
    }
};

} // namespace

Value eval(const Expr& expr, const Configuration& config, const EvalContext& ctx) {
    Evaluator ev{config, ctx};
    std::vector<std::pair<std::string, Value>> locals;
    return ev.eval(expr, locals);
}

Value eval(const ExprPtr& expr, const Configuration& config, const EvalContext& ctx) {
    assert(expr);
    return eval(*expr, config, ctx);
}

namespace {

Verdict verdictOf(const Value& v) {
    if (const bool* b = v.asBool())
        return *b ? Verdict::Pass : Verdict::Fail;
    return Verdict::UndefinedResult;
}

} // namespace

CheckReport checkInvariants(const Model& model, const Configuration& config) {
    CheckReport report;
    for (const auto& cls : model.classes) {
        for (const auto& inv : cls.invariants) {
            for (const auto& [oid, obj] : config.objects) {
                if (obj.className != cls.name)
                    continue;
                EvalContext ctx;
                ctx.selfOid = oid;
                Verdict v = verdictOf(eval(inv.body, config, ctx));
                CheckEntry entry;
                entry.constraintName = inv.name;
                entry.subject = oid;
                entry.verdict = v;
                if (v != Verdict::Pass)
                    entry.failedExpr = inv.body;
                report.entries.push_back(std::move(entry));
            }
        }
    }
    return report;
}

CheckReport checkConditions(const std::vector<NamedCondition>& conds, const Configuration& config,
                            const EvalContext& ctx) {
    CheckReport report;
    for (const auto& cond : conds) {
        Verdict v = verdictOf(eval(cond.expr, config, ctx));
        CheckEntry entry;
        entry.constraintName = cond.name;
        entry.subject = ctx.selfOid;
        entry.verdict = v;
        if (v != Verdict::Pass)
            entry.failedExpr = cond.expr;
        report.entries.push_back(std::move(entry));
    }
    return report;
}

} // namespace ocltrace
