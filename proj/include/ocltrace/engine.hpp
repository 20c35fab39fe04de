#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ocltrace/eval.hpp"
#include "ocltrace/model.hpp"
#include "ocltrace/state.hpp"

namespace ocltrace {

struct EngineOptions {
    bool genMessages = false;
    bool genObjects = false;
};

struct Transition {
    std::string label;
    Configuration successor;
};

/// Label of the body-execution transition for `op` (its upper-cased name);
/// the invocation transition is that plus "-INVOCATION".
std::string opLabel(const std::string& opName);
std::string invocationLabel(const std::string& opName);

inline constexpr const char* kMaterializeLabel = "OBJECT-MATERIALIZE";
inline constexpr const char* kUnholdLabel = "UNHOLD-LOG";

/// Enumerates every enabled transition of `config`, deterministically ordered
/// by (label, canonical key of successor). Error states enable nothing.
/// Error outcomes (pre/post/invariant violations) are successor states
/// carrying an ErrorRecord, not faults.
std::vector<Transition> enabledTransitions(const Model& model, const Configuration& config,
                                           const EngineOptions& opts = {});

struct BodyError {
    std::string message;
    ExprPtr expr;
};

struct BodyResult {
    ObjectMap objects;
    Value returnValue = Value::integer(0);
    std::optional<BodyError> error;

    bool ok() const { return !error.has_value(); }
};

/// Runs the actions in order against a working copy of `objects`; later
/// actions observe earlier writes. An assignment target must evaluate to an
/// oid or a singleton collection of one oid.
BodyResult applyBodyActions(const ActionList& actions, const ObjectMap& objects,
                            const EvalContext& ctx);

struct RunResult {
    Configuration finalConfig;
    std::vector<std::string> labels;
};

/// Deterministic run-to-quiescence: repeatedly applies the first enabled
/// transition until none is enabled, an ErrorRecord appears, or maxSteps is
/// reached. Generators do not fire.
RunResult runRewrite(const Model& model, Configuration config, std::uint64_t maxSteps);

} // namespace ocltrace
