#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ocltrace/ast.hpp"
#include "ocltrace/model.hpp"
#include "ocltrace/state.hpp"

namespace ocltrace {

/// Evaluation environment: `self`, bound names (operation arguments,
/// quantifier variables, scenario object names), and the pre-state snapshot
/// required by `@pre` access.
struct EvalContext {
    std::optional<Oid> selfOid;
    std::map<std::string, Value> env;
    const ObjectMap* preState = nullptr;
};

enum class Verdict { Pass, Fail, UndefinedResult };

const char* verdictName(Verdict v);

struct CheckEntry {
    std::string constraintName;
    std::optional<Oid> subject; // instance checked, when per-instance
    Verdict verdict = Verdict::Pass;
    ExprPtr failedExpr; // set when verdict != Pass
};

struct CheckReport {
    std::vector<CheckEntry> entries;

    /// Fail and UndefinedResult both count as violations.
    bool allPassed() const;
    const CheckEntry* firstViolation() const;
};

/// Evaluates a resolved expression. Total: always returns a Value, possibly
/// Undefined, and never aborts. Undefined propagates strictly except for
/// isDefined and the symmetric short-circuit laws of and/or/implies.
Value eval(const Expr& expr, const Configuration& config, const EvalContext& ctx);
Value eval(const ExprPtr& expr, const Configuration& config, const EvalContext& ctx);

/// One entry per (invariant, instance of its context class), in declaration
/// order then oid order.
CheckReport checkInvariants(const Model& model, const Configuration& config);

/// Evaluates each named condition with self and env bound; entries in
/// declaration order.
CheckReport checkConditions(const std::vector<NamedCondition>& conds, const Configuration& config,
                            const EvalContext& ctx);

} // namespace ocltrace
