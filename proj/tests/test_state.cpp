#include <doctest.h>

#include <algorithm>
#include <random>

#include "ocltrace/parser.hpp"
#include "ocltrace/state.hpp"

#include "test_support.hpp"

using namespace ocltrace;

TEST_CASE("canonicalKey ignores object declaration order") {
    std::string forward = ocltest::readFixture("abc-single.state");
    // Reverse the object lines.
    std::string reversed =
        "object cyd : Person { civstat : single, gender : male, wife : Set{}, husband : Set{} }\n"
        "object bob : Person { civstat : single, gender : male, wife : Set{}, husband : Set{} }\n"
        "object ada : Person { civstat : single, gender : female, wife : Set{}, husband : Set{} "
        "}\n";
    auto a = parseScenario(forward, ocltest::marriageModel());
    auto b = parseScenario(reversed, ocltest::marriageModel());
    REQUIRE(a.ok());
    REQUIRE(b.ok());
    CHECK(canonicalKey(*a.value) == canonicalKey(*b.value));
}

TEST_CASE("canonicalKey distinguishes distinct states") {
    CHECK(canonicalKey(ocltest::abcSingle()) != canonicalKey(ocltest::abMarried()));
}

TEST_CASE("canonicalKey: log entry order is semantic") {
    Configuration a = ocltest::abcSingle();
    a.log = MessageLog{{"m1", "m2"}, false};
    Configuration b = ocltest::abcSingle();
    b.log = MessageLog{{"m2", "m1"}, false};
    // Oracle: the entry sequences differ, so the keys must differ.
    REQUIRE(a.log->entries != b.log->entries);
    CHECK(canonicalKey(a) != canonicalKey(b));
}

TEST_CASE("canonicalKey ignores pending and completion order") {
    std::mt19937 rng(321);
    Configuration base = ocltest::abcSingle();
    base.pending.push_back(PendingCall{Oid{"ada"}, "marry", {Value::oid("bob")}});
    base.pending.push_back(PendingCall{Oid{"cyd"}, "marry", {Value::oid("ada")}});
    base.pending.push_back(PendingCall{Oid{"bob"}, "divorce", {}});
    base.completions.push_back(Completion{"marry", Value::integer(0)});
    base.completions.push_back(Completion{"divorce", Value::integer(0)});
    std::string key = canonicalKey(base);
    for (int round = 0; round < 20; ++round) {
        Configuration shuffled = base;
        std::shuffle(shuffled.pending.begin(), shuffled.pending.end(), rng);
        std::shuffle(shuffled.completions.begin(), shuffled.completions.end(), rng);
        CHECK(canonicalKey(shuffled) == key);
    }
}

TEST_CASE("canonicalKey reflects the held flag and budget") {
    Configuration a = ocltest::abcSingle();
    a.log = MessageLog{{}, false};
    Configuration b = a;
    b.log->held = true;
    CHECK(canonicalKey(a) != canonicalKey(b));

    Configuration c = a;
    c.budget = CreationBudget{2};
    Configuration d = a;
    d.budget = CreationBudget{3};
    CHECK(canonicalKey(c) != canonicalKey(d));
}

TEST_CASE("snapshotObjects is a deep independent copy") {
    Configuration config = ocltest::abcSingle();
    ObjectMap snap = snapshotObjects(config);
    config.objects.at(Oid{"ada"}).attrs["civstat"] = Value::enumLit("CivilStatus", "married");
    CHECK(valueEquals(snap.at(Oid{"ada"}).attrs.at("civstat"),
                      Value::enumLit("CivilStatus", "single")));
}

TEST_CASE("snapshotObjects of an empty configuration") {
    Configuration config;
    CHECK(snapshotObjects(config).empty());
}

TEST_CASE("snapshot of ab-married keeps ada.husband = Set{bob}") {
    ObjectMap snap = snapshotObjects(ocltest::abMarried());
    CHECK(valueEquals(snap.at(Oid{"ada"}).attrs.at("husband"),
                      Value::collection(CollKind::Set, {Value::oid("bob")})));
}

TEST_CASE("abstractLog erases entries, keeps held, and is idempotent") {
    Configuration config = ocltest::abcSingle();
    config.log = MessageLog{{"a", "b"}, true};
    Configuration once = abstractLog(config);
    REQUIRE(once.log.has_value());
    CHECK(once.log->entries.empty());
    CHECK(once.log->held == true);
    Configuration twice = abstractLog(once);
    CHECK(canonicalKey(once) == canonicalKey(twice));
    // Objects untouched.
    Configuration bare1 = config;
    bare1.log.reset();
    Configuration bare2 = once;
    bare2.log.reset();
    CHECK(canonicalKey(bare1) == canonicalKey(bare2));
}

TEST_CASE("abstractLog on an absent or empty log is the identity") {
    Configuration noLog = ocltest::abcSingle();
    CHECK(canonicalKey(abstractLog(noLog)) == canonicalKey(noLog));
    Configuration emptyLog = ocltest::abcSingle();
    emptyLog.log = MessageLog{{}, false};
    CHECK(canonicalKey(abstractLog(emptyLog)) == canonicalKey(emptyLog));
}

TEST_CASE("configuration rendering mirrors the object layout") {
    std::string text = renderConfiguration(ocltest::abMarried(), ocltest::marriageModel());
    CHECK(text.find("< ada : Person | civstat : married, gender : female, wife : Set{}, husband "
                    ": Set{bob} >") != std::string::npos);
    CHECK(text.find("< cyd : Person | civstat : single, gender : male, wife : Set{}, husband : "
                    "Set{} >") != std::string::npos);
}

TEST_CASE("rendering of pending calls, completions and errors") {
    CHECK(renderPendingCall(PendingCall{Oid{"cyd"}, "marry", {Value::oid("ada")}}) ==
          "cyd.marry(ada)");
    CHECK(renderCompletion(Completion{"marry", Value::integer(0)}) == "resume(marry, 0)");
    ErrorRecord err{ViolationKind::PreViolation, "marry", "Precondition violation",
                    mkBool(false)};
    CHECK(renderErrorRecord(err) == "error(\"Precondition violation\", marry, false)");
    ErrorRecord inv{ViolationKind::InvViolation, std::nullopt, "Invariant violation",
                    mkBool(false)};
    CHECK(renderErrorRecord(inv) == "error(\"Invariant violation\", false)");
}
