// Acceptance suite: replays the marriage-world scenarios end to end and
// checks the published behavior of every command, one criterion per line.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ocltrace/cli.hpp"
#include "ocltrace/engine.hpp"
#include "ocltrace/eval.hpp"
#include "ocltrace/parser.hpp"
#include "ocltrace/search.hpp"

#include "marriage_oracle.hpp"
#include "test_support.hpp"

using namespace ocltrace;
using ocltest::abcSingle;
using ocltest::abMarried;
using ocltest::marriageModel;

namespace {

struct Checker {
    std::ostringstream detail;
    bool ok = true;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << "    failed: " << what << "\n";
        }
    }
};

int cliCode(std::vector<std::string> args, std::string* capture = nullptr) {
    std::ostringstream out, err;
    int code = runCli(args, out, err);
    if (capture)
        *capture = out.str();
    return code;
}

std::string fixture(const char* name) {
    return std::string(OCLTRACE_FIXTURE_DIR) + "/" + name;
}

Configuration seeded(Configuration config, std::initializer_list<const char*> msgs) {
    for (const char* text : msgs) {
        auto call = parseCall(text, marriageModel(), config);
        if (!call.ok())
            throw std::runtime_error("bad seed call: " + std::string(text));
        config.pending.push_back(*call.value);
    }
    return config;
}

Value attrOf(const Configuration& config, const char* oid, const char* attr) {
    return config.objects.at(Oid{oid}).attrs.at(attr);
}

const std::vector<std::string> kPaperPath = {"MARRY-INVOCATION", "MARRY", "DIVORCE-INVOCATION",
                                             "DIVORCE", "MARRY-INVOCATION", "MARRY"};

// Shared by criteria 4-8 and re-used by the property sweep of criterion 10.
struct SweepStats {
    std::uint64_t statesSeen = 0;
    std::uint64_t invariantViolations = 0; // on non-error states
    std::uint64_t atomicityViolations = 0; // frame + enabled invocation
};

SearchOutcome runAndSweep(const Configuration& init, SearchOptions opts, SweepStats& stats) {
    EngineOptions engineOpts{opts.genMessages, opts.genObjects};
    return bfsSearch(marriageModel(), init, opts, [&](const Configuration& c, std::uint64_t) {
        ++stats.statesSeen;
        if (!c.error && !checkInvariants(marriageModel(), c).allPassed())
            ++stats.invariantViolations;
        if (c.frame) {
            for (const auto& t : enabledTransitions(marriageModel(), c, engineOpts))
                if (t.label.find("-INVOCATION") != std::string::npos)
                    ++stats.atomicityViolations;
        }
    });
}

SweepStats gSweep;

// --------------------------------------------------------------------------
// Criteria
// --------------------------------------------------------------------------

void criterion1(Checker& c) {
    CheckReport report = checkInvariants(marriageModel(), abcSingle());
    c.require(report.entries.size() == 15, "5 invariants x 3 instances");
    c.require(report.allPassed(), "all invariant checks pass");
    std::set<std::string> names;
    for (const auto& e : report.entries)
        names.insert(e.constraintName);
    c.require(names.size() == 5, "5 distinct invariants checked");
    std::string out;
    int code = cliCode({"check", "--model", fixture("marriage.model"), "--state",
                        fixture("abc-single.state")},
                       &out);
    c.require(code == 0, "check exits 0");
    c.require(out.find("All invariants hold.") != std::string::npos, "summary line");
}

void criterion2(Checker& c) {
    RunResult result =
        runRewrite(marriageModel(), seeded(abcSingle(), {"cyd.marry(ada)"}), 10000);
    c.require(!result.finalConfig.error.has_value(), "no violation");
    c.require(result.labels == std::vector<std::string>{"MARRY-INVOCATION", "MARRY"},
              "label trace is [MARRY-INVOCATION, MARRY]");
    c.require(valueEquals(attrOf(result.finalConfig, "ada", "husband"),
                          Value::collection(CollKind::Set, {Value::oid("cyd")})),
              "ada.husband = Set{cyd}");
    c.require(valueEquals(attrOf(result.finalConfig, "cyd", "wife"),
                          Value::collection(CollKind::Set, {Value::oid("ada")})),
              "cyd.wife = Set{ada}");
    c.require(valueEquals(attrOf(result.finalConfig, "ada", "civstat"),
                          Value::enumLit("CivilStatus", "married")),
              "ada married");
    c.require(valueEquals(attrOf(result.finalConfig, "cyd", "civstat"),
                          Value::enumLit("CivilStatus", "married")),
              "cyd married");
    c.require(valueEquals(attrOf(result.finalConfig, "bob", "civstat"),
                          Value::enumLit("CivilStatus", "single")),
              "bob still single");
    int code = cliCode({"run", "--model", fixture("marriage.model"), "--state",
                        fixture("abc-single.state"), "--msg", "cyd.marry(ada)"});
    c.require(code == 0, "run exits 0");
}

void criterion3(Checker& c) {
    RunResult result =
        runRewrite(marriageModel(), seeded(abMarried(), {"cyd.marry(ada)"}), 10000);
    c.require(result.finalConfig.error.has_value(), "run ends in an error state");
    if (result.finalConfig.error) {
        c.require(result.finalConfig.error->kind == ViolationKind::PreViolation,
                  "kind is PreViolation");
        c.require(result.finalConfig.error->opName == std::optional<std::string>("marry"),
                  "op is marry");
        c.require(result.finalConfig.error->message == "Precondition violation",
                  "message text");
    }
    c.require(result.labels == std::vector<std::string>{"MARRY-INVOCATION"},
              "stops after the invocation");
    int code = cliCode({"run", "--model", fixture("marriage.model"), "--state",
                        fixture("ab-married-c-single.state"), "--msg", "cyd.marry(ada)"});
    c.require(code == 3, "run exits 3");
}

void criterion4(Checker& c) {
    Configuration init =
        seeded(abcSingle(), {"cyd.marry(ada)", "ada.marry(bob)", "bob.divorce()"});
    SearchOptions opts;
    opts.target = ocltest::resolveExpr(ocltest::kMarriedCoupleGoal, init);
    SearchOutcome outcome = runAndSweep(init, opts, gSweep);
    c.require(outcome.solutions.size() == 3, "exactly 3 solutions");
    c.require(outcome.exhausted, "search terminates exhausted");
    bool hasPaperPath = false;
    for (const auto& sol : outcome.solutions)
        hasPaperPath = hasPaperPath || sol.labelPath == kPaperPath;
    c.require(hasPaperPath,
              "one solution's path is MARRY-INVOCATION MARRY DIVORCE-INVOCATION DIVORCE "
              "MARRY-INVOCATION MARRY");
}

void criterion5(Checker& c) {
    Configuration init = abcSingle();
    init.log = MessageLog{};
    SearchOptions opts;
    opts.genMessages = true;
    opts.abstractLog = true;
    opts.target = ErrorFilter::Inv;
    SearchOutcome outcome = runAndSweep(init, opts, gSweep);
    c.require(outcome.exhausted, "exploration exhausts the abstracted space");
    c.require(outcome.solutions.empty(), "no invariant-violation state is reachable");
}

void criterion6(Checker& c) {
    Configuration init = abMarried();
    init.log = MessageLog{};
    SearchOptions opts;
    opts.genMessages = true;
    opts.abstractLog = true;
    opts.target = ocltest::resolveExpr("ada.civstat = single or bob.civstat = single", init);
    SearchOutcome outcome = runAndSweep(init, opts, gSweep);
    c.require(outcome.exhausted, "exploration exhausts the abstracted space");
    c.require(outcome.solutions.empty(), "married persons never become single");
}

void criterion7(Checker& c) {
    Configuration init = abcSingle();
    init.log = MessageLog{};
    SearchOptions opts;
    opts.genMessages = true;
    opts.maxSolutions = 20;
    opts.maxDepth = 20;
    opts.target = ErrorFilter::Pre;
    SearchOutcome outcome = runAndSweep(init, opts, gSweep);
    c.require(outcome.solutions.size() == 20, "exactly 20 solutions");
    for (const auto& sol : outcome.solutions) {
        c.require(sol.config.error.has_value() &&
                      sol.config.error->kind == ViolationKind::PreViolation,
                  "every solution is a precondition violation");
        if (!c.ok)
            break;
    }
}

void criterion8(Checker& c) {
    Configuration init;
    init.log = MessageLog{};
    init.budget = CreationBudget{3};
    SearchOptions opts;
    opts.genMessages = true;
    opts.genObjects = true;
    opts.maxSolutions = 20;
    opts.maxDepth = 20;
    opts.target = ocltest::resolveExpr(ocltest::kSelfMarriedGoal, init);
    SearchOutcome outcome = runAndSweep(init, opts, gSweep);
    c.require(outcome.solutions.empty(), "no self-marriage is reachable");
}

void criterion9(Checker& c) {
    Configuration init;
    init.log = MessageLog{};
    init.budget = CreationBudget{3};
    SearchOptions opts;
    opts.genMessages = true;
    opts.genObjects = true;
    opts.maxSolutions = 100;
    opts.maxDepth = 30;
    opts.target = ocltest::resolveExpr(ocltest::kMarriedCoupleGoal, init);
    SearchOutcome outcome = bfsSearch(marriageModel(), init, opts);
    c.require(outcome.solutions.size() == 100, "exactly 100 solutions");
    if (outcome.solutions.empty())
        return;
    const SearchSolution& first = outcome.solutions[0];
    c.require(first.messageLog.size() == 3, "first log has 3 entries");
    if (first.messageLog.size() == 3) {
        c.require(first.messageLog[0].rfind("new(", 0) == 0 &&
                      first.messageLog[1].rfind("new(", 0) == 0,
                  "two object creations first");
        c.require(first.messageLog[2].find(".marry(") != std::string::npos,
                  "then one marry call");
        bool female = first.messageLog[0].find("gender : female") != std::string::npos ||
                      first.messageLog[1].find("gender : female") != std::string::npos;
        bool male = first.messageLog[0].find("gender : male") != std::string::npos ||
                    first.messageLog[1].find("gender : male") != std::string::npos;
        c.require(female && male, "creations have mixed genders");
    }
}

void criterion10(Checker& c) {
    // Quantifier empty-set laws.
    Configuration empty;
    EvalContext noCtx;
    auto lit = [&](const char* text) {
        auto parsed = parseExpr(text);
        if (!parsed.ok())
            throw std::runtime_error("bad expr");
        return eval(*parsed.value, empty, noCtx);
    };
    c.require(valueEquals(lit("Set{}->forAll(x | false)"), Value::boolean(true)),
              "forAll over empty set is true");
    c.require(valueEquals(lit("Set{}->exists(x | true)"), Value::boolean(false)),
              "exists over empty set is false");

    // Render/parse round trip over the fixture constraints and random trees
    // derived from them.
    const ClassDef& person = marriageModel().classes[0];
    std::vector<ExprPtr> pool;
    for (const auto& inv : person.invariants)
        pool.push_back(inv.body);
    for (const auto& op : person.ops) {
        for (const auto& cond : op.pres)
            pool.push_back(cond.expr);
        for (const auto& cond : op.posts)
            pool.push_back(cond.expr);
    }
    std::mt19937 rng(20250810);
    for (int round = 0; round < 200; ++round) {
        ExprPtr e = pool[rng() % pool.size()];
        if (round % 3 == 0)
            e = mkBinary(BinOp::And, e, pool[rng() % pool.size()]);
        if (round % 5 == 0)
            e = mkNot(e);
        std::string text = render(e);
        auto reparsed = parseExpr(text);
        c.require(reparsed.ok(), "canonical text reparses: " + text);
        if (reparsed.ok())
            c.require(render(*reparsed.value) == text, "render is stable: " + text);
        if (!c.ok)
            return;
    }

    // Canonical key is invariant under multiset permutation.
    std::mt19937 shuffleRng(7);
    Configuration base = abcSingle();
    base.pending.push_back(PendingCall{Oid{"ada"}, "marry", {Value::oid("bob")}});
    base.pending.push_back(PendingCall{Oid{"cyd"}, "marry", {Value::oid("ada")}});
    base.completions.push_back(Completion{"marry", Value::integer(0)});
    base.completions.push_back(Completion{"divorce", Value::integer(0)});
    std::string key = canonicalKey(base);
    for (int round = 0; round < 10; ++round) {
        Configuration shuffled = base;
        std::shuffle(shuffled.pending.begin(), shuffled.pending.end(), shuffleRng);
        std::shuffle(shuffled.completions.begin(), shuffled.completions.end(), shuffleRng);
        c.require(canonicalKey(shuffled) == key, "canonicalKey permutation invariance");
    }

    // abstractLog idempotence.
    Configuration logged = abcSingle();
    logged.log = MessageLog{{"x", "y"}, true};
    c.require(canonicalKey(abstractLog(logged)) == canonicalKey(abstractLog(abstractLog(logged))),
              "abstractLog idempotent");

    // Shortest witness against an iterative-deepening oracle.
    Configuration init =
        seeded(abcSingle(), {"cyd.marry(ada)", "ada.marry(bob)", "bob.divorce()"});
    SearchOptions opts;
    opts.target = ocltest::resolveExpr(ocltest::kMarriedCoupleGoal, init);
    SearchOutcome outcome = bfsSearch(marriageModel(), init, opts);
    std::function<bool(const Configuration&, const std::string&, std::uint64_t)> reach =
        [&](const Configuration& from, const std::string& wanted, std::uint64_t depth) {
            if (canonicalKey(from) == wanted)
                return true;
            if (depth == 0)
                return false;
            for (const auto& t : enabledTransitions(marriageModel(), from))
                if (reach(t.successor, wanted, depth - 1))
                    return true;
            return false;
        };
    for (const auto& sol : outcome.solutions) {
        std::string wanted = canonicalKey(sol.config);
        c.require(sol.labelPath.size() == sol.depth, "path length equals depth");
        c.require(reach(init, wanted, sol.depth), "witness reachable at its depth");
        if (sol.depth > 0)
            c.require(!reach(init, wanted, sol.depth - 1), "no shorter witness exists");
    }

    // Invariant preservation and atomicity over every state the acceptance
    // searches explored (criteria 4-8).
    c.require(gSweep.statesSeen > 0, "sweep collected states");
    c.require(gSweep.invariantViolations == 0,
              "every explored non-error state satisfies the invariants");
    c.require(gSweep.atomicityViolations == 0, "no frame state enables an invocation");

    // Independent enumeration oracle for the abstracted state count.
    std::size_t oracle = ocltest::abstractReachableCount();
    c.require(oracle == 103, "oracle count is 103");
    Configuration genInit = abcSingle();
    genInit.log = MessageLog{};
    SearchOptions genOpts;
    genOpts.genMessages = true;
    genOpts.abstractLog = true;
    genOpts.target = ErrorFilter::Inv;
    SearchOutcome genOutcome = bfsSearch(marriageModel(), genInit, genOpts);
    c.require(genOutcome.statesExplored == oracle,
              "search explores exactly the oracle's state count");
}

struct Criterion {
    int id;
    const char* name;
    double limitSeconds;
    std::function<void(Checker&)> run;
};

} // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "invariant check reproduction (abc-single all pass)", 1.0, criterion1},
        {2, "rewrite reproduction (cyd.marry(ada) from abc-single)", 1.0, criterion2},
        {3, "precondition-violation reproduction (ab-married)", 1.0, criterion3},
        {4, "three-message search: 3 solutions and the paper path", 5.0, criterion4},
        {5, "invariant safety under generation (abstracted, exhausted)", 30.0, criterion5},
        {6, "married-never-single (abstracted, exhausted)", 30.0, criterion6},
        {7, "precondition-violation reachability (20 solutions)", 30.0, criterion7},
        {8, "no self-marriage with object generation", 60.0, criterion8},
        {9, "married-couple reachability with object generation", 120.0, criterion9},
        {10, "property suites (round trip, keys, witnesses, oracle count)", 120.0, criterion10},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        Checker checker;
        auto start = std::chrono::steady_clock::now();
        try {
            criterion.run(checker);
        } catch (const std::exception& e) {
            checker.ok = false;
            checker.detail << "    exception: " << e.what() << "\n";
        }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > criterion.limitSeconds) {
            checker.ok = false;
            checker.detail << "    time limit exceeded: " << elapsed << "s > "
                           << criterion.limitSeconds << "s\n";
        }
        std::printf("%s  criterion %2d (%6.2fs): %s\n", checker.ok ? "PASS" : "FAIL",
                    criterion.id, elapsed, criterion.name);
        if (!checker.ok) {
            std::fputs(checker.detail.str().c_str(), stdout);
            ++failures;
        }
    }
    if (failures == 0)
        std::printf("acceptance: all %zu criteria pass\n", criteria.size());
    else
        std::printf("acceptance: %d criteria FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
