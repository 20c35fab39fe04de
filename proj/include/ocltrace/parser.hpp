#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ocltrace/ast.hpp"
#include "ocltrace/model.hpp"
#include "ocltrace/state.hpp"

namespace ocltrace {

template <typename T>
struct ParseResult {
    std::optional<T> value;
    std::vector<Diag> errors;

    bool ok() const { return value.has_value() && errors.empty(); }
};

/// Parses one OCL expression. Whitespace-insensitive; `e->op` / `e -> op`
/// and `e.a` / `e . a` are equivalent. Precedence, loosest to tightest:
/// implies (right-assoc) < or < and < not < comparisons (non-associative)
/// < navigation/arrow postfix. The tree is unresolved: bare identifiers
/// stay VarRef until resolve().
ParseResult<ExprPtr> parseExpr(const std::string& text);

/// Parses a model file (enums, classes with invariants and operations,
/// generators), validates it, and resolves every embedded expression.
/// Comments run from `--` to end of line.
ParseResult<Model> parseModel(const std::string& text);

/// Parses a scenario file: objects with every attribute initialized, plus
/// optional pending calls (`msg oid.op(args)`) and a creation budget
/// (`budget N`). The model must be validated.
ParseResult<Configuration> parseScenario(const std::string& text, const Model& model);

/// Parses `oid.op(arg, ...)` against a model and configuration; arguments
/// are literals, enum literals, object names, or Undefined.
ParseResult<PendingCall> parseCall(const std::string& text, const Model& model,
                                   const Configuration& config);

} // namespace ocltrace
