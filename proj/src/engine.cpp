#include "ocltrace/engine.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <functional>

namespace ocltrace {

std::string opLabel(const std::string& opName) {
    std::string label = opName;
    for (char& c : label)
        c = (char)std::toupper((unsigned char)c);
    return label;
}

std::string invocationLabel(const std::string& opName) {
    return opLabel(opName) + "-INVOCATION";
}

namespace {

ExprPtr conjunction(const std::vector<NamedCondition>& conds) {
    ExprPtr acc;
    for (const auto& c : conds)
        acc = acc ? mkBinary(BinOp::And, acc, c.expr) : c.expr;
    return acc ? acc : mkBool(true);
}

const OpDef* lookupOp(const Model& model, const Configuration& config, const Oid& target,
                      const std::string& opName) {
    auto it = config.objects.find(target);
    if (it == config.objects.end())
        return nullptr;
    const ClassDef* cls = model.findClass(it->second.className);
    return cls ? cls->findOp(opName) : nullptr;
}

// The assignment target: an oid, or a singleton collection holding one oid.
const Oid* targetOid(const Value& v) {
    if (const Oid* oid = v.asOid())
        return oid;
    if (const Coll* coll = v.asColl())
        if (coll->elements.size() == 1)
            return coll->elements[0].asOid();
    return nullptr;
}

struct BodyRunner {
    const Configuration& base; // for allInstances and non-object lookups
    const EvalContext& ctx;
    Configuration work; // objects mutated in place as actions apply
    Value returnValue = Value::integer(0);
    std::optional<BodyError> error;

    explicit BodyRunner(const Configuration& baseConfig, const ObjectMap& objects,
                        const EvalContext& evalCtx)
        : base(baseConfig), ctx(evalCtx) {
        work = baseConfig;
        work.objects = objects;
    }

    // Returns false when execution stops (return reached or error raised).
    bool run(const ActionList& actions) {
        for (const auto& action : actions) {
            if (const auto* assign = std::get_if<AssignAction>(&action.node)) {
                Value target = eval(assign->target, work, ctx);
                const Oid* oid = targetOid(target);
                if (!oid) {
                    error = BodyError{"Assignment target is not a single object", assign->target};
                    return false;
                }
                auto it = work.objects.find(*oid);
                if (it == work.objects.end()) {
                    error = BodyError{"Assignment target is not a single object", assign->target};
                    return false;
                }
                it->second.attrs[assign->attr] = eval(assign->value, work, ctx);
            } else if (const auto* ifa = std::get_if<IfAction>(&action.node)) {
                Value cond = eval(ifa->cond, work, ctx);
                const bool* b = cond.asBool();
                if (!b) {
                    error = BodyError{"Undefined branch condition", ifa->cond};
                    return false;
                }
                if (!run(*b ? ifa->thenBranch : ifa->elseBranch))
                    return false;
            } else {
                const auto& ret = std::get<ReturnAction>(action.node);
                returnValue = eval(ret.value, work, ctx);
                return false;
            }
        }
        return true;
    }
};

} // namespace

BodyResult applyBodyActions(const ActionList& actions, const ObjectMap& objects,
                            const EvalContext& ctx) {
    Configuration base;
    base.objects = objects;
    BodyRunner runner(base, objects, ctx);
    runner.run(actions);
    BodyResult result;
    result.objects = std::move(runner.work.objects);
    result.returnValue = std::move(runner.returnValue);
    result.error = std::move(runner.error);
    return result;
}

namespace {

Configuration withError(Configuration config, ViolationKind kind,
                        std::optional<std::string> opName, std::string message,
                        ExprPtr failedExpr) {
    config.error = ErrorRecord{kind, std::move(opName), std::move(message), std::move(failedExpr)};
    return config;
}

// (a) Consume one pending call: check preconditions, install the frame.
void invocationTransitions(const Model& model, const Configuration& config,
                           std::vector<Transition>& out) {
    if (config.frame)
        return;
    for (size_t i = 0; i < config.pending.size(); ++i) {
        const PendingCall& call = config.pending[i];
        const OpDef* op = lookupOp(model, config, call.target, call.opName);
        if (!op)
            continue; // dangling target or unknown op: no rule matches

        Configuration next = config;
        next.pending.erase(next.pending.begin() + (std::ptrdiff_t)i);

        EvalContext ctx;
        ctx.selfOid = call.target;
        for (size_t p = 0; p < op->params.size() && p < call.args.size(); ++p)
            ctx.env[op->params[p].name] = call.args[p];

        CheckReport report = checkConditions(op->pres, next, ctx);
        if (report.allPassed()) {
            ActiveFrame frame;
            frame.opName = call.opName;
            frame.selfOid = call.target;
            frame.env = ctx.env;
            frame.preSnapshot = snapshotObjects(config);
            next.frame = std::move(frame);
        } else {
            next = withError(std::move(next), ViolationKind::PreViolation, call.opName,
                             "Precondition violation", conjunction(op->pres));
        }
        out.push_back(Transition{invocationLabel(call.opName), std::move(next)});
    }
}

// (b) Execute the in-flight operation body atomically, then check
// postconditions and invariants.
void bodyTransition(const Model& model, const Configuration& config,
                    std::vector<Transition>& out) {
    if (!config.frame)
        return;
    const ActiveFrame& frame = *config.frame;
    const OpDef* op = lookupOp(model, config, frame.selfOid, frame.opName);
    assert(op && "active frame for unknown operation");
    if (!op)
        return;

    EvalContext ctx;
    ctx.selfOid = frame.selfOid;
    ctx.env = frame.env;
    ctx.preState = &frame.preSnapshot;

    std::string label = opLabel(frame.opName);
    BodyResult body = applyBodyActions(op->body, config.objects, ctx);

    Configuration next = config;
    next.objects = std::move(body.objects);
    if (!body.ok()) {
        next.frame.reset();
        out.push_back(Transition{label, withError(std::move(next), ViolationKind::PostViolation,
                                                  frame.opName, body.error->message,
                                                  body.error->expr)});
        return;
    }

    CheckReport posts = checkConditions(op->posts, next, ctx);
    if (!posts.allPassed()) {
        next.frame.reset();
        out.push_back(Transition{label, withError(std::move(next), ViolationKind::PostViolation,
                                                  frame.opName, "Postcondition violation",
                                                  conjunction(op->posts))});
        return;
    }

    CheckReport invs = checkInvariants(model, next);
    if (const CheckEntry* violation = invs.firstViolation()) {
        ExprPtr failed = violation->failedExpr;
        // Report the invariant in its context form.
        for (const auto& c : model.classes)
            for (const auto& inv : c.invariants)
                if (inv.name == violation->constraintName && exprEquals(inv.body, failed))
                    failed = mkContextInv(c.name, inv.body);
        next.frame.reset();
        out.push_back(Transition{label, withError(std::move(next), ViolationKind::InvViolation,
                                                  std::nullopt, "Invariant violation", failed)});
        return;
    }

    next.frame.reset();
    next.completions.push_back(Completion{frame.opName, body.returnValue});
    out.push_back(Transition{label, std::move(next)});
}

// Ordered tuples of distinct live objects matching the generator variables.
void forEachTuple(const Configuration& config, const MsgGenDef& gen, size_t index,
                  std::vector<Oid>& tuple,
                  const std::function<void(const std::vector<Oid>&)>& fn) {
    if (index == gen.vars.size()) {
        fn(tuple);
        return;
    }
    const std::string& className = gen.vars[index].second;
    for (const auto& [oid, obj] : config.objects) {
        if (obj.className != className)
            continue;
        if (std::find(tuple.begin(), tuple.end(), oid) != tuple.end())
            continue;
        tuple.push_back(oid);
        forEachTuple(config, gen, index + 1, tuple, fn);
        tuple.pop_back();
    }
}

// (c) Spontaneous message generation, blocked while the log is held.
void messageGeneratorTransitions(const Model& model, const Configuration& config,
                                 std::vector<Transition>& out) {
    if (!config.log || config.log->held || config.frame)
        return;
    for (const auto& g : model.generators) {
        const auto* gen = std::get_if<MsgGenDef>(&g);
        if (!gen)
            continue;
        std::vector<Oid> tuple;
        forEachTuple(config, *gen, 0, tuple, [&](const std::vector<Oid>& oids) {
            EvalContext ctx;
            for (size_t i = 0; i < gen->vars.size(); ++i)
                ctx.env[gen->vars[i].first] = Value::oid(oids[i]);
            if (gen->guard) {
                const bool* ok = eval(gen->guard, config, ctx).asBool();
                if (!ok || !*ok)
                    return;
            }
            PendingCall call;
            call.target = *ctx.env.at(gen->emitTarget).asOid();
            call.opName = gen->emitOp;
            for (const auto& argVar : gen->emitArgs)
                call.args.push_back(ctx.env.at(argVar));

            Configuration next = config;
            next.log->entries.push_back(renderPendingCall(call));
            next.log->held = true;
            next.pending.push_back(std::move(call));
            out.push_back(Transition{gen->label, std::move(next)});
        });
    }
}

// (d) Spontaneous object generation while creation budget remains.
void objectGeneratorTransitions(const Model& model, const Configuration& config,
                                std::vector<Transition>& out) {
    if (!config.log || config.log->held || config.frame)
        return;
    if (!config.budget || config.budget->remaining == 0)
        return;
    for (const auto& g : model.generators) {
        const auto* gen = std::get_if<ObjGenDef>(&g);
        if (!gen)
            continue;
        PendingCreate create;
        create.oid = Oid{"id(" + std::to_string(config.budget->remaining - 1) + ")"};
        create.className = gen->className;
        EvalContext emptyCtx;
        for (const auto& [attr, expr] : gen->initializers)
            create.inits.emplace_back(attr, eval(expr, config, emptyCtx));

        Configuration next = config;
        next.budget->remaining -= 1;
        next.log->entries.push_back(renderPendingCreate(create));
        next.log->held = true;
        next.pendingCreates.push_back(std::move(create));
        out.push_back(Transition{gen->label, std::move(next)});
    }
}

// (e) Materialize a pending creation, clearing the hold.
void materializeTransitions(const Configuration& config, std::vector<Transition>& out) {
    for (size_t i = 0; i < config.pendingCreates.size(); ++i) {
        const PendingCreate& create = config.pendingCreates[i];
        Configuration next = config;
        next.pendingCreates.erase(next.pendingCreates.begin() + (std::ptrdiff_t)i);
        ObjectInstance obj;
        obj.oid = create.oid;
        obj.className = create.className;
        for (const auto& [attr, value] : create.inits)
            obj.attrs[attr] = value;
        next.objects[create.oid] = std::move(obj);
        if (next.log)
            next.log->held = false;
        out.push_back(Transition{kMaterializeLabel, std::move(next)});
    }
}

// (f) Consume one completion to unblock generation.
void unholdTransition(const Configuration& config, std::vector<Transition>& out) {
    if (!config.log || !config.log->held || config.completions.empty())
        return;
    // Deterministic pick: the canonically least completion.
    size_t best = 0;
    for (size_t i = 1; i < config.completions.size(); ++i)
        if (renderCompletion(config.completions[i]) < renderCompletion(config.completions[best]))
            best = i;
    Configuration next = config;
    next.completions.erase(next.completions.begin() + (std::ptrdiff_t)best);
    next.log->held = false;
    out.push_back(Transition{kUnholdLabel, std::move(next)});
}

} // namespace

std::vector<Transition> enabledTransitions(const Model& model, const Configuration& config,
                                           const EngineOptions& opts) {
    // Error states are terminal.
    if (config.error)
        return {};

    std::vector<Transition> out;
    invocationTransitions(model, config, out);
    bodyTransition(model, config, out);
    if (opts.genMessages)
        messageGeneratorTransitions(model, config, out);
    if (opts.genObjects)
        objectGeneratorTransitions(model, config, out);
    materializeTransitions(config, out);
    unholdTransition(config, out);

    std::vector<std::pair<std::string, size_t>> order;
    order.reserve(out.size());
    for (size_t i = 0; i < out.size(); ++i)
        order.emplace_back(out[i].label + "\x1f" + canonicalKey(out[i].successor), i);
    std::sort(order.begin(), order.end());
    std::vector<Transition> sorted;
    sorted.reserve(out.size());
    for (const auto& [key, i] : order)
        sorted.push_back(std::move(out[i]));
    return sorted;
}

RunResult runRewrite(const Model& model, Configuration config, std::uint64_t maxSteps) {
    RunResult result;
    for (std::uint64_t step = 0; step < maxSteps; ++step) {
        if (config.error)
            break;
        std::vector<Transition> ts = enabledTransitions(model, config);
        if (ts.empty())
            break;
        result.labels.push_back(ts.front().label);
        config = std::move(ts.front().successor);
    }
    result.finalConfig = std::move(config);
    return result;
}

} // namespace ocltrace
