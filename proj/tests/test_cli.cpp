#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ocltrace/cli.hpp"

#include "test_support.hpp"

using namespace ocltrace;

namespace {

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

CliResult cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = runCli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string fixture(const char* name) {
    return std::string(OCLTRACE_FIXTURE_DIR) + "/" + name;
}

// Compares against tests/golden/<name>; set OCLTRACE_UPDATE_GOLDEN=1 to
// regenerate after an intentional output change.
void checkGolden(const char* name, const std::string& actual) {
    std::string path = std::string(OCLTRACE_GOLDEN_DIR) + "/" + name;
    const char* update = std::getenv("OCLTRACE_UPDATE_GOLDEN");
    if (update && std::string(update) == "1") {
        std::ofstream(path, std::ios::binary) << actual;
        return;
    }
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing golden file ", path,
                    " (run with OCLTRACE_UPDATE_GOLDEN=1 to create)");
    std::ostringstream buf;
    buf << in.rdbuf();
    CHECK_MESSAGE(buf.str() == actual, "golden mismatch for ", name, "\n--- expected\n",
                  buf.str(), "--- actual\n", actual);
}

} // namespace

TEST_CASE("check: all invariants pass on abc-single") {
    CliResult r = cli({"check", "--model", fixture("marriage.model"), "--state",
                       fixture("abc-single.state")});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("All invariants hold.") != std::string::npos);
    checkGolden("check-abc-single.txt", r.out);
}

TEST_CASE("check: expression false exits 1") {
    CliResult r = cli({"check", "--model", fixture("marriage.model"), "--state",
                       fixture("abc-single.state"), "--expr", "false"});
    CHECK(r.code == kExitFail);
    CHECK(r.out == "false\n");
}

TEST_CASE("check: missing state file exits 2") {
    CliResult r = cli({"check", "--model", fixture("marriage.model"), "--state",
                       fixture("no-such.state")});
    CHECK(r.code == kExitUsage);
    CHECK(!r.err.empty());
}

TEST_CASE("check: parse error in expression exits 2") {
    CliResult r = cli({"check", "--model", fixture("marriage.model"), "--state",
                       fixture("abc-single.state"), "--expr", "wife->"});
    CHECK(r.code == kExitUsage);
}

TEST_CASE("run: marry from abc-single") {
    CliResult r = cli({"run", "--model", fixture("marriage.model"), "--state",
                       fixture("abc-single.state"), "--msg", "cyd.marry(ada)"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("husband : Set{cyd}") != std::string::npos);
    CHECK(r.out.find("wife : Set{ada}") != std::string::npos);
    CHECK(r.out.find("resume(marry, 0)") != std::string::npos);
    CHECK(r.out.find("labels --> MARRY-INVOCATION MARRY") != std::string::npos);
    checkGolden("run-marry-abc-single.txt", r.out);
}

TEST_CASE("run: marry from ab-married violates the precondition") {
    CliResult r = cli({"run", "--model", fixture("marriage.model"), "--state",
                       fixture("ab-married-c-single.state"), "--msg", "cyd.marry(ada)"});
    CHECK(r.code == kExitErrorState);
    CHECK(r.out.find("error(\"Precondition violation\", marry,") != std::string::npos);
    CHECK(r.out.find("violation: PreViolation op=marry") != std::string::npos);
    checkGolden("run-marry-ab-married.txt", r.out);
}

TEST_CASE("run: no messages leaves the state unchanged") {
    CliResult r = cli({"run", "--model", fixture("marriage.model"), "--state",
                       fixture("abc-single.state")});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("labels -->\n") != std::string::npos);
    CHECK(r.out.find("civstat : single, gender : female") != std::string::npos);
}

TEST_CASE("run: unknown target oid exits 2") {
    CliResult r = cli({"run", "--model", fixture("marriage.model"), "--state",
                       fixture("abc-single.state"), "--msg", "eve.marry(ada)"});
    CHECK(r.code == kExitUsage);
}

TEST_CASE("search: three seeded messages, married-couple goal") {
    CliResult r = cli({"search", "--model", fixture("marriage.model"), "--state",
                       fixture("abc-single.state"), "--msg", "cyd.marry(ada)", "--msg",
                       "ada.marry(bob)", "--msg", "bob.divorce()", "--goal",
                       ocltest::kMarriedCoupleGoal, "--show-path"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("Solution 3 (state ") != std::string::npos);
    CHECK(r.out.find("No more solutions.") != std::string::npos);
    checkGolden("search-three-messages.txt", r.out);
}

TEST_CASE("search: invariant violations are unreachable (abstracted)") {
    CliResult r = cli({"search", "--model", fixture("marriage.model"), "--state",
                       fixture("abc-single.state"), "--gen-messages", "--abstract-log",
                       "--find-errors", "inv"});
    CHECK(r.code == kExitFail);
    CHECK(r.out == "No solution.\n");
}

TEST_CASE("search: bounded search without solutions exits 4") {
    CliResult r = cli({"search", "--model", fixture("marriage.model"), "--state",
                       fixture("abc-single.state"), "--gen-messages", "--max-depth", "3",
                       "--goal", "ada.civstat = divorced"});
    CHECK(r.code == kExitBoundNoSolution);
    CHECK(r.out == "Bound reached.\n");
}

TEST_CASE("search: pre-violations with bounds") {
    CliResult r = cli({"search", "--model", fixture("marriage.model"), "--state",
                       fixture("abc-single.state"), "--gen-messages", "--max-solutions", "20",
                       "--max-depth", "20", "--find-errors", "pre"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("Solution 20 (state ") != std::string::npos);
    CHECK(r.out.find("error(\"Precondition violation\", marry,") != std::string::npos);
}

TEST_CASE("search: --find-errors defaults to any") {
    CliResult r = cli({"search", "--model", fixture("marriage.model"), "--state",
                       fixture("abc-single.state"), "--gen-messages", "--max-solutions", "1",
                       "--max-depth", "20", "--find-errors"});
    CHECK(r.code == kExitOk);
}

TEST_CASE("search: goal and find-errors are mutually exclusive") {
    CliResult r = cli({"search", "--model", fixture("marriage.model"), "--state",
                       fixture("abc-single.state"), "--goal", "true", "--find-errors", "pre"});
    CHECK(r.code == kExitUsage);
}

TEST_CASE("search: json output carries the same fields") {
    CliResult r = cli({"search", "--model", fixture("marriage.model"), "--state",
                       fixture("abc-single.state"), "--msg", "cyd.marry(ada)", "--goal",
                       ocltest::kMarriedCoupleGoal, "--format", "json"});
    CHECK(r.code == kExitOk);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["command"] == "search");
    CHECK(j["exhausted"] == true);
    CHECK(j["exitCode"] == 0);
    REQUIRE(j["solutions"].size() == 1);
    CHECK(j["solutions"][0]["depth"] == 2);
    CHECK(j["solutions"][0]["labels"] ==
          nlohmann::json::array({"MARRY-INVOCATION", "MARRY"}));
    CHECK(j["statesExplored"].get<int>() > 0);
}

TEST_CASE("check json output") {
    CliResult r = cli({"check", "--model", fixture("marriage.model"), "--state",
                       fixture("abc-single.state"), "--format", "json"});
    CHECK(r.code == kExitOk);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["allPassed"] == true);
    CHECK(j["invariants"].size() == 15);
}

TEST_CASE("OCLTRACE_COLOR toggles ANSI escapes only") {
    auto strip = [](const std::string& s) {
        std::string out;
        for (size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '\x1b') {
                while (i < s.size() && s[i] != 'm')
                    ++i;
                continue;
            }
            out.push_back(s[i]);
        }
        return out;
    };
    setenv("OCLTRACE_COLOR", "1", 1);
    CliResult colored = cli({"check", "--model", fixture("marriage.model"), "--state",
                             fixture("abc-single.state")});
    setenv("OCLTRACE_COLOR", "0", 1);
    CliResult plain = cli({"check", "--model", fixture("marriage.model"), "--state",
                           fixture("abc-single.state")});
    unsetenv("OCLTRACE_COLOR");
    CHECK(colored.out != plain.out);
    CHECK(strip(colored.out) == plain.out);
    CHECK(colored.code == plain.code);
}

TEST_CASE("cli: unknown flag exits 2, help exits 0") {
    CHECK(cli({"search", "--bogus"}).code == kExitUsage);
    CHECK(cli({"--help"}).code == kExitOk);
}
