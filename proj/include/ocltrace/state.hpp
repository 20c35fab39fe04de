#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ocltrace/ast.hpp"
#include "ocltrace/model.hpp"

namespace ocltrace {

struct ObjectInstance {
    Oid oid;
    std::string className;
    std::map<std::string, Value> attrs; // keys = exactly the declared attributes
};

using ObjectMap = std::map<Oid, ObjectInstance>;

/// A not-yet-consumed call `target.opName(args)`.
struct PendingCall {
    Oid target;
    std::string opName;
    std::vector<Value> args;
};

/// An object creation emitted by a generator, not yet materialized.
struct PendingCreate {
    Oid oid;
    std::string className;
    std::vector<std::pair<std::string, Value>> inits;
};

/// Execution context of the single in-flight operation. Stack depth is 1 by
/// design: bodies are atomic and never invoke operations.
struct ActiveFrame {
    std::string opName;
    Oid selfOid;
    std::map<std::string, Value> env; // parameter name -> argument value
    ObjectMap preSnapshot;            // object multiset at invocation time
};

/// Record left by a finished operation; rendered as `resume(op, value)`.
struct Completion {
    std::string opName;
    Value returnValue;
};

enum class ViolationKind { PreViolation, PostViolation, InvViolation };

const char* violationKindName(ViolationKind k);

/// A configuration carrying an ErrorRecord is terminal: no transitions are
/// enabled from it.
struct ErrorRecord {
    ViolationKind kind = ViolationKind::PreViolation;
    std::optional<std::string> opName; // absent for InvViolation
    std::string message;
    ExprPtr failedExpr;
};

/// Ordered list of generator-emitted messages. `held` is true while an
/// emitted message or pending creation is in flight; generation is blocked
/// until it clears.
struct MessageLog {
    std::vector<std::string> entries;
    bool held = false;
};

struct CreationBudget {
    std::uint64_t remaining = 0;
};

/// A system state: multiset of objects plus pending calls, at most one
/// active frame, completions, and bookkeeping. Immutable once constructed;
/// transitions produce fresh configurations.
struct Configuration {
    ObjectMap objects;
    std::vector<PendingCall> pending;
    std::vector<PendingCreate> pendingCreates;
    std::optional<ActiveFrame> frame;
    std::vector<Completion> completions;
    std::optional<MessageLog> log;
    std::optional<CreationBudget> budget;
    std::optional<ErrorRecord> error;
};

/// Order-insensitive fingerprint: two configurations receive equal keys iff
/// they are equal as multisets. Objects are keyed by oid with attributes
/// sorted by name, pending/completions by rendered text; log entries keep
/// their order, which is semantic.
std::string canonicalKey(const Configuration& config);

/// Deep, immutable copy of the object multiset for `@pre` evaluation.
ObjectMap snapshotObjects(const Configuration& config);

/// Same configuration with log entries erased; the held flag is preserved.
/// Realizes the equational abstraction that makes the state space finite.
Configuration abstractLog(Configuration config);

std::string renderPendingCall(const PendingCall& call);
std::string renderPendingCreate(const PendingCreate& create);
std::string renderCompletion(const Completion& completion);
std::string renderErrorRecord(const ErrorRecord& error);
std::string renderObject(const ObjectInstance& obj, const Model& model);

/// One object per line as `< oid : Class | attr : value, ... >` with
/// attributes in declaration order, then pending/frame/completion/counter/
/// log/error lines.
std::string renderConfiguration(const Configuration& config, const Model& model);

} // namespace ocltrace
