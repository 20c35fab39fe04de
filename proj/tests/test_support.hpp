#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ocltrace/eval.hpp"
#include "ocltrace/parser.hpp"
#include "ocltrace/resolve.hpp"

namespace ocltest {

inline std::string readFixture(const std::string& name) {
    std::string path = std::string(OCLTRACE_FIXTURE_DIR) + "/" + name;
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("missing fixture: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline const ocltrace::Model& marriageModel() {
    static ocltrace::Model model = [] {
        auto parsed = ocltrace::parseModel(readFixture("marriage.model"));
        if (!parsed.ok())
            throw std::runtime_error("marriage.model does not parse:\n" +
                                     ocltrace::formatDiags(parsed.errors));
        return *parsed.value;
    }();
    return model;
}

inline ocltrace::Configuration loadState(const std::string& name) {
    auto parsed = ocltrace::parseScenario(readFixture(name), marriageModel());
    if (!parsed.ok())
        throw std::runtime_error(name + " does not parse:\n" +
                                 ocltrace::formatDiags(parsed.errors));
    return *parsed.value;
}

inline ocltrace::Configuration abcSingle() { return loadState("abc-single.state"); }
inline ocltrace::Configuration abMarried() { return loadState("ab-married-c-single.state"); }

/// Parses and resolves an expression against the marriage model with the
/// given self class and the objects of `config` bound as free names.
inline ocltrace::ExprPtr resolveExpr(const std::string& text,
                                     const ocltrace::Configuration& config,
                                     const char* selfClass = nullptr,
                                     bool allowAtPre = false) {
    auto parsed = ocltrace::parseExpr(text);
    if (!parsed.ok())
        throw std::runtime_error("expr does not parse: " + text + "\n" +
                                 ocltrace::formatDiags(parsed.errors));
    ocltrace::ResolveContext ctx;
    for (const auto& [oid, obj] : config.objects)
        ctx.bindings[oid.name] = ocltrace::StaticType::object(obj.className);
    if (selfClass)
        ctx.selfClass = selfClass;
    ctx.allowAtPre = allowAtPre;
    auto resolved = ocltrace::resolve(*parsed.value, marriageModel(), ctx);
    if (!resolved.ok())
        throw std::runtime_error("expr does not resolve: " + text + "\n" +
                                 ocltrace::formatDiags(resolved.errors));
    return resolved.expr;
}

/// Environment binding every object name of `config` to its oid.
inline ocltrace::EvalContext stateEnv(const ocltrace::Configuration& config) {
    ocltrace::EvalContext ctx;
    for (const auto& [oid, obj] : config.objects)
        ctx.env[oid.name] = ocltrace::Value::oid(oid);
    return ctx;
}

inline const char* kMarriedCoupleGoal =
    "Person.allInstances->exists(P | Person.allInstances->exists(Q | "
    "P.wife->includes(Q) and Q.husband->includes(P)))";

inline const char* kSelfMarriedGoal =
    "Person.allInstances->exists(P | P.wife->includes(P) or P.husband->includes(P))";

} // namespace ocltest
