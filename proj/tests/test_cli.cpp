// End-to-end checks of the command-line tool.

#include "kger/validator.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <sys/wait.h>

namespace {

struct RunResult {
    int exitCode = -1;
    std::string output; // stdout only
};

RunResult run(const std::string& args) {
    std::string command = std::string(KGER_BIN) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult result;
    std::array<char, 4096> buffer{};
    std::size_t n = 0;
    while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
        result.output.append(buffer.data(), n);
    }
    int status = pclose(pipe);
    result.exitCode = WEXITSTATUS(status);
    return result;
}

std::string fixture(const std::string& name) {
    return std::string(FIXTURE_DIR) + "/" + name;
}

} // namespace

TEST_CASE("check passes the running example silently") {
    RunResult result = run("check " + fixture("running_example.kger"));
    CHECK(result.exitCode == 0);
    CHECK(result.output.empty());
}

TEST_CASE("check reports ill-formed schemas with exit 1") {
    std::string path = std::string(FIXTURE_DIR) + "/tmp_illformed.kger";
    {
        FILE* f = fopen(path.c_str(), "w");
        REQUIRE(f != nullptr);
        fputs("Entity(A)\nRelationship(R)\n", f); // WF4, WF6
        fclose(f);
    }
    RunResult result = run("check " + path);
    CHECK(result.exitCode == 1);
    CHECK(result.output.empty()); // diagnostics go to stderr
    std::remove(path.c_str());
}

TEST_CASE("validate --close-isa closes memberships before checking") {
    std::string base = "validate --schema " + fixture("hierarchy.kger") + " --graph " +
                       fixture("post_graph.json");
    CHECK(run(base).exitCode == 1);
    CHECK(run(base + " --close-isa").exitCode == 0);
}

TEST_CASE("check exits 2 on unreadable or unparseable input") {
    CHECK(run("check /nonexistent.kger").exitCode == 2);
    std::string path = std::string(FIXTURE_DIR) + "/tmp_broken.kger";
    {
        FILE* f = fopen(path.c_str(), "w");
        REQUIRE(f != nullptr);
        fputs("Entity(\n", f);
        fclose(f);
    }
    CHECK(run("check " + path).exitCode == 2);
    std::remove(path.c_str());
}

TEST_CASE("validate conforms on G0 and exits 1 on a violation") {
    std::string base = "validate --schema " + fixture("running_example.kger") + " --graph ";
    RunResult ok = run(base + fixture("g0.json"));
    CHECK(ok.exitCode == 0);
    CHECK(ok.output.find("conforms") != std::string::npos);

    RunResult bad = run(base + fixture("g0_duplicate_person.json"));
    CHECK(bad.exitCode == 1);
    CHECK(bad.output.find("VIOL-KEY") != std::string::npos);

    RunResult explained = run(base + fixture("g0_duplicate_person.json") + " --explain");
    CHECK(explained.exitCode == 1);
    CHECK(explained.output.find("clause:") != std::string::npos);
    CHECK(explained.output.find("∀") != std::string::npos);
    CHECK(explained.output.find("witness: pA pC") != std::string::npos);
}

TEST_CASE("validate --format structured emits a lossless report") {
    RunResult result = run("validate --schema " + fixture("running_example.kger") +
                           " --graph " + fixture("g0.json") + " --format structured");
    CHECK(result.exitCode == 0);
    auto report = kger::ValidationReport::fromStructured(result.output);
    REQUIRE(report.has_value());
    CHECK(report->conforms);
    CHECK(report->stats.entityInstances == 4);
}

TEST_CASE("validate --semantics implicit separates overlapping instances") {
    std::string base = "validate --schema " + fixture("running_example.kger") + " --graph " +
                       fixture("g0_person_university_overlap.json");
    CHECK(run(base).exitCode == 0);
    RunResult implicit = run(base + " --semantics implicit");
    CHECK(implicit.exitCode == 1);
    CHECK(implicit.output.find("VIOL-IMPLICIT-DISJOINT") != std::string::npos);
}

TEST_CASE("compile writes artifacts to stdout and files") {
    RunResult sql = run("compile --schema " + fixture("running_example.kger") +
                        " --target sql");
    CHECK(sql.exitCode == 0);
    CHECK(sql.output.find("CREATE TABLE University(") != std::string::npos);

    std::string outPath = std::string(FIXTURE_DIR) + "/tmp_out.dot";
    RunResult dot = run("compile --schema " + fixture("running_example.kger") +
                        " --target dot --out " + outPath);
    CHECK(dot.exitCode == 0);
    FILE* f = fopen(outPath.c_str(), "r");
    REQUIRE(f != nullptr);
    fclose(f);
    std::remove(outPath.c_str());

    CHECK(run("compile --schema " + fixture("running_example.kger") +
              " --target nonsense")
              .exitCode == 2);
}

TEST_CASE("verbalize prints sentences") {
    RunResult result = run("verbalize " + fixture("running_example.kger"));
    CHECK(result.exitCode == 0);
    CHECK(result.output.find("'University' is an entity.") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run("").exitCode == 2);
    CHECK(run("frobnicate x").exitCode == 2);
}
