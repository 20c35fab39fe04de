#include "ocltrace/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ocltrace/engine.hpp"
#include "ocltrace/eval.hpp"
#include "ocltrace/parser.hpp"
#include "ocltrace/resolve.hpp"
#include "ocltrace/search.hpp"

namespace ocltrace {

namespace {

using nlohmann::json;

bool colorEnabled() {
    const char* v = std::getenv("OCLTRACE_COLOR");
    return v && std::string(v) == "1";
}

std::string paint(const std::string& text, const char* code) {
    if (!colorEnabled())
        return text;
    return std::string("\x1b[") + code + "m" + text + "\x1b[0m";
}

std::string paintVerdict(Verdict v) {
    switch (v) {
    case Verdict::Pass: return paint("Pass", "32");
    case Verdict::Fail: return paint("Fail", "31");
    case Verdict::UndefinedResult: return paint("Undefined", "33");
    }
    return "?";
}

std::optional<std::string> readFile(const std::string& path, std::ostream& err) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        err << "error: cannot open '" << path << "'\n";
        return std::nullopt;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct LoadedWorld {
    Model model;
    Configuration state;
};

std::optional<LoadedWorld> loadWorld(const std::string& modelPath, const std::string& statePath,
                                     std::ostream& err) {
    auto modelText = readFile(modelPath, err);
    if (!modelText)
        return std::nullopt;
    ParseResult<Model> model = parseModel(*modelText);
    if (!model.ok()) {
        err << modelPath << ":\n" << formatDiags(model.errors);
        return std::nullopt;
    }
    auto stateText = readFile(statePath, err);
    if (!stateText)
        return std::nullopt;
    ParseResult<Configuration> state = parseScenario(*stateText, *model.value);
    if (!state.ok()) {
        err << statePath << ":\n" << formatDiags(state.errors);
        return std::nullopt;
    }
    return LoadedWorld{std::move(*model.value), std::move(*state.value)};
}

// Scenario object names are usable as free names in goal/check expressions.
ResolveContext stateResolveContext(const LoadedWorld& world) {
    ResolveContext ctx;
    for (const auto& [oid, obj] : world.state.objects)
        ctx.bindings[oid.name] = StaticType::object(obj.className);
    return ctx;
}

EvalContext stateEvalContext(const LoadedWorld& world) {
    EvalContext ctx;
    for (const auto& [oid, obj] : world.state.objects)
        ctx.env[oid.name] = Value::oid(oid);
    return ctx;
}

std::optional<ExprPtr> parseClosedExpr(const std::string& text, const LoadedWorld& world,
                                       std::ostream& err) {
    ParseResult<ExprPtr> parsed = parseExpr(text);
    if (!parsed.ok()) {
        err << formatDiags(parsed.errors);
        return std::nullopt;
    }
    ResolveResult resolved = resolve(*parsed.value, world.model, stateResolveContext(world));
    if (!resolved.ok()) {
        err << formatDiags(resolved.errors);
        return std::nullopt;
    }
    return resolved.expr;
}

bool appendSeedCalls(const std::vector<std::string>& msgs, LoadedWorld& world,
                     std::ostream& err) {
    for (const auto& text : msgs) {
        ParseResult<PendingCall> call = parseCall(text, world.model, world.state);
        if (!call.ok()) {
            err << "in --msg '" << text << "':\n" << formatDiags(call.errors);
            return false;
        }
        world.state.pending.push_back(std::move(*call.value));
    }
    return true;
}

json errorJson(const ErrorRecord& error) {
    json j;
    j["kind"] = violationKindName(error.kind);
    j["op"] = error.opName ? json(*error.opName) : json(nullptr);
    j["message"] = error.message;
    j["failedExpr"] = render(error.failedExpr);
    return j;
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

int cmdCheckExpr(const LoadedWorld& world, const std::string& exprText, const ExprPtr& expr,
                 bool jsonOut, std::ostream& out) {
    Value result = eval(expr, world.state, stateEvalContext(world));
    const bool* b = result.asBool();
    int code = b && *b ? kExitOk : kExitFail;
    if (jsonOut) {
        json j;
        j["command"] = "check";
        j["expr"] = exprText;
        j["result"] = renderValue(result);
        j["exitCode"] = code;
        out << j.dump(2) << "\n";
    } else {
        out << renderValue(result) << "\n";
    }
    return code;
}

int cmdCheck(const LoadedWorld& world, bool jsonOut, std::ostream& out) {
    CheckReport report = checkInvariants(world.model, world.state);
    int code = report.allPassed() ? kExitOk : kExitFail;
    if (jsonOut) {
        json j;
        j["command"] = "check";
        j["invariants"] = json::array();
        for (const auto& e : report.entries) {
            json entry;
            entry["constraint"] = e.constraintName;
            entry["subject"] = e.subject ? json(e.subject->name) : json(nullptr);
            entry["verdict"] = verdictName(e.verdict);
            j["invariants"].push_back(std::move(entry));
        }
        j["allPassed"] = report.allPassed();
        j["exitCode"] = code;
        out << j.dump(2) << "\n";
        return code;
    }
    for (const auto& e : report.entries) {
        out << "inv " << e.constraintName;
        if (e.subject)
            out << " [" << e.subject->name << "]";
        out << ": " << paintVerdict(e.verdict) << "\n";
    }
    if (report.allPassed())
        out << "All invariants hold.\n";
    else
        out << "Invariant violations found.\n";
    return code;
}

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

int cmdRun(const LoadedWorld& world, std::uint64_t maxSteps, bool jsonOut, std::ostream& out,
           std::ostream& err) {
    (void)err;
    RunResult result = runRewrite(world.model, world.state, maxSteps);
    int code = result.finalConfig.error ? kExitErrorState : kExitOk;
    if (jsonOut) {
        json j;
        j["command"] = "run";
        j["labels"] = result.labels;
        j["finalState"] = renderConfiguration(result.finalConfig, world.model);
        j["error"] =
            result.finalConfig.error ? errorJson(*result.finalConfig.error) : json(nullptr);
        j["exitCode"] = code;
        out << j.dump(2) << "\n";
        return code;
    }
    out << renderConfiguration(result.finalConfig, world.model);
    out << "labels -->";
    for (const auto& label : result.labels)
        out << " " << label;
    out << "\n";
    if (result.finalConfig.error) {
        const ErrorRecord& e = *result.finalConfig.error;
        out << "violation: " << violationKindName(e.kind);
        if (e.opName)
            out << " op=" << *e.opName;
        out << " message=\"" << e.message << "\"\n";
        out << "failed: " << render(e.failedExpr) << "\n";
    }
    return code;
}

// ---------------------------------------------------------------------------
// search
// ---------------------------------------------------------------------------

int cmdSearch(const LoadedWorld& world, const SearchOptions& opts, bool showPath, bool jsonOut,
              std::ostream& out) {
    SearchOutcome outcome = bfsSearch(world.model, world.state, opts);
    int code = kExitOk;
    if (outcome.solutions.empty())
        code = outcome.exhausted ? kExitFail : kExitBoundNoSolution;
    if (jsonOut) {
        json j;
        j["command"] = "search";
        j["solutions"] = json::array();
        for (const auto& sol : outcome.solutions) {
            json s;
            s["index"] = sol.index;
            s["stateId"] = sol.stateId;
            s["depth"] = sol.depth;
            s["labels"] = sol.labelPath;
            s["messages"] = sol.messageLog;
            s["state"] = renderConfiguration(sol.config, world.model);
            s["error"] = sol.config.error ? errorJson(*sol.config.error) : json(nullptr);
            j["solutions"].push_back(std::move(s));
        }
        j["exhausted"] = outcome.exhausted;
        j["statesExplored"] = outcome.statesExplored;
        j["exitCode"] = code;
        out << j.dump(2) << "\n";
        return code;
    }
    FormatOptions fmt;
    fmt.showPath = showPath;
    out << formatSolutions(world.model, outcome, fmt);
    return code;
}

} // namespace

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"OCL constraint checker and bounded reachability explorer"};
    app.require_subcommand(1);

    std::string modelPath, statePath, format = "text";
    auto addCommon = [&](CLI::App* cmd) {
        cmd->add_option("--model", modelPath, "model file")->required();
        cmd->add_option("--state", statePath, "scenario file")->required();
        cmd->add_option("--format", format, "output format: text or json")
            ->check(CLI::IsMember({"text", "json"}));
    };

    CLI::App* check = app.add_subcommand("check", "evaluate invariants or an expression");
    std::string exprText;
    addCommon(check);
    check->add_option("--expr", exprText, "expression to evaluate instead of the invariants");

    CLI::App* run = app.add_subcommand("run", "execute pending calls to quiescence");
    std::vector<std::string> runMsgs;
    std::uint64_t maxSteps = 10000;
    addCommon(run);
    run->add_option("--msg", runMsgs, "pending call, e.g. \"cyd.marry(ada)\" (repeatable)");
    run->add_option("--max-steps", maxSteps, "maximum transitions to apply");

    CLI::App* search = app.add_subcommand("search", "breadth-first reachability search");
    std::string goalText, findErrors;
    std::vector<std::string> searchMsgs;
    std::uint64_t maxSolutions = 0, maxDepth = 0, genObjects = 0;
    bool genMessages = false, abstract = false, showPath = false;
    addCommon(search);
    CLI::Option* goalOpt = search->add_option("--goal", goalText, "closed goal expression");
    CLI::Option* errOpt = search->add_option("--find-errors", findErrors,
                                             "search violation states: pre, post, inv or any")
                              ->expected(0, 1)
                              ->check(CLI::IsMember({"", "pre", "post", "inv", "any"}));
    goalOpt->excludes(errOpt);
    CLI::Option* maxSolOpt = search->add_option("--max-solutions", maxSolutions);
    CLI::Option* maxDepthOpt = search->add_option("--max-depth", maxDepth);
    search->add_flag("--gen-messages", genMessages, "enable spontaneous message generation");
    CLI::Option* genObjOpt = search->add_option(
        "--gen-objects", genObjects, "enable object generation with this creation budget");
    search->add_flag("--abstract-log", abstract, "deduplicate states ignoring the message log");
    search->add_flag("--show-path", showPath, "print the label path of each solution");
    search->add_option("--msg", searchMsgs, "seed pending call (repeatable)");

    std::vector<const char*> argv;
    argv.push_back("ocltrace");
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse((int)argv.size(), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kExitUsage;
    }

    auto world = loadWorld(modelPath, statePath, err);
    if (!world)
        return kExitUsage;
    bool jsonOut = format == "json";

    if (check->parsed()) {
        if (check->count("--expr")) {
            auto resolved = parseClosedExpr(exprText, *world, err);
            if (!resolved)
                return kExitUsage;
            return cmdCheckExpr(*world, exprText, *resolved, jsonOut, out);
        }
        return cmdCheck(*world, jsonOut, out);
    }

    if (run->parsed()) {
        if (!appendSeedCalls(runMsgs, *world, err))
            return kExitUsage;
        return cmdRun(*world, maxSteps, jsonOut, out, err);
    }

    // search
    if (!goalOpt->count() && !errOpt->count()) {
        err << "search requires --goal or --find-errors\n";
        return kExitUsage;
    }
    SearchOptions opts;
    if (goalOpt->count()) {
        auto goal = parseClosedExpr(goalText, *world, err);
        if (!goal)
            return kExitUsage;
        opts.target = *goal;
    } else {
        ErrorFilter filter = ErrorFilter::Any;
        if (findErrors == "pre")
            filter = ErrorFilter::Pre;
        else if (findErrors == "post")
            filter = ErrorFilter::Post;
        else if (findErrors == "inv")
            filter = ErrorFilter::Inv;
        opts.target = filter;
    }
    if (maxSolOpt->count())
        opts.maxSolutions = maxSolutions;
    if (maxDepthOpt->count())
        opts.maxDepth = maxDepth;
    opts.genMessages = genMessages;
    opts.genObjects = genObjOpt->count() > 0;
    opts.abstractLog = abstract;
    if (!appendSeedCalls(searchMsgs, *world, err))
        return kExitUsage;
    if (opts.genObjects)
        world->state.budget = CreationBudget{genObjects};
    if ((opts.genMessages || opts.genObjects) && !world->state.log)
        world->state.log = MessageLog{};
    return cmdSearch(*world, opts, showPath, jsonOut, out);
}

} // namespace ocltrace
