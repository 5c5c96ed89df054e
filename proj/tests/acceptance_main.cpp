// Acceptance suite: end-to-end checks of the toolkit against its reference
// fixtures and semantic properties. Prints one PASS/FAIL line per criterion
// and exits non-zero if any fails.

#include "kger/emitters.hpp"
#include "kger/pattern_engine.hpp"
#include "kger/text_format.hpp"
#include "kger/validator.hpp"
#include "kger/wf.hpp"

#include "fixtures.hpp"
#include "generators.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <vector>

using namespace kger;
using kger::test::Gen;

namespace {

struct Criterion {
    std::string name;
    std::function<void(std::ostringstream&)> body; // throws on failure
};

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& message) {
    if (!condition) throw Failure(message);
}

std::set<std::string> errorCodes(const std::vector<Diagnostic>& diags) {
    std::set<std::string> out;
    for (const auto& d : diags) {
        if (d.isError()) out.insert(d.code);
    }
    return out;
}

// ---------------------------------------------------------------------------
// 1. Well-formedness fixture and its nine single-statement mutations.

void criterion1(std::ostringstream& detail) {
    std::string base = test::readFixture("running_example.kger");
    Schema schema = test::runningExample();
    require(checkWellFormed(schema).empty(), "running example must be well-formed");

    auto mutate = [&](const std::string& name, const std::string& removal,
                      const std::string& addition, const std::string& expectedCode) {
        std::string source = base;
        if (!removal.empty()) {
            auto pos = source.find(removal);
            require(pos != std::string::npos, name + ": removal target missing");
            source.erase(pos, removal.size());
        }
        source += "\n" + addition + "\n";
        SchemaParseResult parsed = parseSchema(source);
        require(parsed.ok(), name + ": mutation must still parse");
        std::set<std::string> codes = errorCodes(checkWellFormed(*parsed.schema));
        require(codes == std::set<std::string>{expectedCode},
                name + ": expected exactly " + expectedCode);
        detail << " " << expectedCode;
    };

    mutate("remove relationship identity",
           "Identity(wrote, [author(fname, lname), msg(number)])", "", "WF4");
    mutate("Isa cycle", "", "Isa(University, University)", "WF5");
    mutate("remove root identity", "Identity(University, [name])", "", "WF6");
    mutate("non-ground identity",
           "Identity(Message, [msg(author(fname, lname)), number])",
           "Identity(Message, [msg(author), number])", "WF3");
    mutate("dangling role declaration", "", "Role(wrote, editor, Publisher)", "WF1");
    mutate("dangling participation constraint", "", "Mandatory(Message, body)", "WF2");
    mutate("disjointness without common ancestor", "", "Disjoint(Person, University)",
           "WF7");
    mutate("cover by non-descendant", "", "Cover({University}, Person)", "WF8");
    mutate("non-rooted key pattern", "", "Key(University, [fname])", "WF9");
}

// ---------------------------------------------------------------------------
// 2. Pattern evaluation equals brute-force formula grounding.

void criterion2(std::ostringstream& detail) {
    Gen gen(20250810);
    int checked = 0;
    int attempts = 0;
    while (checked < 500 && attempts < 20000) {
        ++attempts;
        Schema schema = test::randomWellFormedSchema(gen);
        KnowledgeGraph graph = test::randomGraph(schema, gen, 8);

        std::vector<std::string> subjects(schema.entities.begin(), schema.entities.end());
        subjects.insert(subjects.end(), schema.relationships.begin(),
                        schema.relationships.end());
        const std::string& subject = gen.oneOf(subjects);
        auto pattern = test::randomRootedPattern(schema, gen, subject, 2);
        if (!pattern.has_value()) continue;
        std::size_t arity = patternArity(*pattern);
        // Keep the brute-force grounding tractable: wide answer tuples only
        // over small active domains.
        std::size_t domain = activeDomain(graph).size();
        if (arity > 3 || (arity == 3 && domain > 8)) continue;
        auto instances = graph.instancesOf(schema, subject);
        if (instances.empty()) continue;
        const std::string& inst = gen.oneOf(instances);

        auto direct = evalPattern(schema, graph, subject, *pattern, inst);
        FolFormula formula = translatePattern(schema, subject, *pattern);
        std::set<Tuple> oracle;
        for (const auto& assignment : evalFormula(graph, formula, {{"x", NodeId{inst}}})) {
            Tuple t;
            for (std::size_t i = 1; i <= arity; ++i) {
                t.push_back(assignment.at("y" + std::to_string(i)));
            }
            oracle.insert(std::move(t));
        }
        require(direct == oracle,
                "evalPattern disagrees with the oracle for " + pattern->render() +
                    " rooted at " + subject + " on instance " + inst);
        ++checked;
    }
    require(checked == 500, "not enough evaluable random cases generated");
    detail << " " << checked << " cases";
}

// ---------------------------------------------------------------------------
// 3. Fixture G0: conformance, the worked pattern, and seeded violations.

void criterion3(std::ostringstream& detail) {
    Schema schema = test::runningExample();
    KnowledgeGraph g0 = test::g0();

    require(g0.entityIds.size() == 4 && g0.relIds.size() == 3,
            "G0 must have 4 entity and 3 relationship instances");
    ValidationReport baseline = validateCore(schema, g0);
    require(baseline.conforms, "G0 must conform to the core semantics");

    Pattern p4 = Pattern::roleNode(
        "msg", {Pattern::roleNode("author", {Pattern::attrLeaf("fname"),
                                             Pattern::attrLeaf("lname")})});
    std::set<Tuple> expected{{Value::text("Ada"), Value::text("Lovelace")}};
    require(evalPattern(schema, g0, "Message", p4, "m1") == expected,
            "evalPattern(Message, msg(author(fname, lname)), m1) mismatch");

    // Each seeded violation flips conformance and introduces exactly the
    // derived code set. The second-author seeding necessarily also breaks
    // the weak-entity identity, whose witness set doubles.
    auto introduced = [&](const KnowledgeGraph& mutated) {
        return errorCodes(validateCore(schema, mutated).diagnostics);
    };

    {
        KnowledgeGraph g = g0;
        g.addEntity("pC", {"Person"});
        g.addAttrFact("pC", "fname", Value::text("Ada"));
        g.addAttrFact("pC", "lname", Value::text("Lovelace"));
        require(introduced(g) == std::set<std::string>{"VIOL-KEY"},
                "duplicate identity tuple must introduce exactly VIOL-KEY");
    }
    {
        KnowledgeGraph g = g0;
        g.removeAttrFact("m1", "date", Value::text("2024-01-01"));
        require(introduced(g) == std::set<std::string>{"VIOL-MANDATORY-ATTR"},
                "missing mandatory date must introduce exactly VIOL-MANDATORY-ATTR");
    }
    {
        KnowledgeGraph g = g0;
        g.addRelationship("w2", "wrote");
        g.addRoleFact("w2", "author", "pB");
        g.addRoleFact("w2", "msg", "m1");
        require(introduced(g) ==
                    std::set<std::string>{"VIOL-SINGLE-ROLE", "VIOL-IDENTITY"},
                "second author must introduce VIOL-SINGLE-ROLE (plus the implied "
                "VIOL-IDENTITY on the weak entity)");
    }
    {
        KnowledgeGraph g = g0;
        g.addRelationship("f2", "follows");
        g.addRoleFact("f2", "follower", "pB");
        g.addRoleFact("f2", "followee", "pA");
        g.addAttrFact("f2", "since", Value::text("2019"));
        require(introduced(g) == std::set<std::string>{"VIOL-KEY"},
                "duplicate follows edge must introduce exactly VIOL-KEY");
    }
    detail << " conforms + 4 seeded violations";
}

// ---------------------------------------------------------------------------
// 4. Implicit-disjointness conformance implies core conformance.

void criterion4(std::ostringstream& detail) {
    Gen gen(20250811);
    int separations = 0;
    for (int i = 0; i < 500; ++i) {
        Schema schema = test::randomWellFormedSchema(gen);
        KnowledgeGraph graph =
            gen.chance(0.4) ? test::randomGraph(schema, gen, 8)
                            : test::mostlyValidGraph(schema, gen, gen.chance(0.6), 8);
        ValidationReport core = validateCore(schema, graph);
        ValidationReport implicit = validateImplicitDisjointness(schema, graph);
        require(!implicit.conforms || core.conforms,
                "implicit-disjointness conformance must imply core conformance");
        if (core.conforms && !implicit.conforms) ++separations;
    }
    require(separations > 0, "no generated case separates the two semantics");
    detail << " 500 pairs, " << separations << " separations";
}

// ---------------------------------------------------------------------------
// 5. SQL golden test against the reference translation.

void criterion5(std::ostringstream& detail) {
    EmitterOutput output = emitSql(test::runningExample());
    const std::string& sql = output.artifact;

    auto tableBody = [&](const std::string& name) {
        std::regex re("CREATE TABLE " + name + R"(\(([^;]*)\);)");
        std::smatch m;
        require(std::regex_search(sql, m, re), "missing table " + name);
        return m[1].str();
    };
    auto hasLine = [&](const std::string& body, const std::string& needle) {
        return body.find(needle) != std::string::npos;
    };

    std::set<std::string> tables;
    std::regex tableRe(R"(CREATE TABLE (\w+)\()");
    for (auto it = std::sregex_iterator(sql.begin(), sql.end(), tableRe);
         it != std::sregex_iterator(); ++it) {
        tables.insert((*it)[1].str());
    }
    require(tables == std::set<std::string>{"University", "Person", "Emails", "Message",
                                            "Studies", "Follows"},
            "exactly the six reference tables must be emitted");

    std::string university = tableBody("University");
    require(hasLine(university, "name text") && hasLine(university, "PRIMARY KEY (name)"),
            "University(name) with PRIMARY KEY (name)");

    std::string person = tableBody("Person");
    require(hasLine(person, "PRIMARY KEY (fname, lname)"), "Person PK (fname, lname)");

    std::string emails = tableBody("Emails");
    require(hasLine(emails, "UNIQUE (email)"), "UNIQUE (email) must be present");
    require(hasLine(emails, "PRIMARY KEY (email, fname, lname)"), "Emails composite PK");
    require(hasLine(emails, "FOREIGN KEY (fname, lname) REFERENCES Person(fname, lname)"),
            "Emails FK to Person");

    std::string message = tableBody("Message");
    for (const char* col : {"author_fname text", "author_lname text", "number text",
                            "date text NOT NULL", "msg_text text"}) {
        require(hasLine(message, col), std::string("Message column ") + col);
    }
    require(hasLine(message, "PRIMARY KEY (author_fname, author_lname, number)"),
            "Message weak-entity PK");
    require(hasLine(message,
                    "FOREIGN KEY (author_fname, author_lname) REFERENCES Person(fname, "
                    "lname)"),
            "Message FK to Person");

    std::string studies = tableBody("Studies");
    require(hasLine(studies,
                    "PRIMARY KEY (uni_name, student_fname, student_lname, year)"),
            "Studies PK over role-prefixed identity columns");
    require(hasLine(studies, "FOREIGN KEY (uni_name) REFERENCES University(name)"),
            "Studies FK to University");

    std::string follows = tableBody("Follows");
    require(hasLine(follows, "PRIMARY KEY (follower_fname, follower_lname, "
                             "followee_fname, followee_lname)"),
            "Follows PK over both role navigations");
    require(hasLine(follows, "since text"), "Follows keeps its attribute column");

    require(output.unexpressed.empty(),
            "every running-example constraint is relationally expressible");
    detail << " 6 tables";
}

// ---------------------------------------------------------------------------
// 6. SHACL / ShEx / PG-Schema golden structure.

void criterion6(std::ostringstream& detail) {
    Schema schema = test::runningExample();

    EmitterOutput shacl = emitShacl(schema);
    for (const char* needle :
         {"ex:NameTargetShape", "sh:targetObjectsOf ex:name",
          "sh:path [ sh:inversePath ex:name ]", "ex:EmailTargetShape",
          "sh:path [ sh:inversePath ex:email ]"}) {
        require(shacl.artifact.find(needle) != std::string::npos,
                std::string("SHACL inverse-path key shape part missing: ") + needle);
    }
    std::set<std::string> shaclUnexpressed;
    for (const auto& d : shacl.unexpressed) shaclUnexpressed.insert(d.subject);
    require(shaclUnexpressed.count("Identity(Person, [fname, lname])") == 1,
            "composite Person key must be reported unexpressed in SHACL core");
    require(shaclUnexpressed.count(
                "Identity(Message, [msg(author(fname, lname)), number])") == 1,
            "navigation key must be reported unexpressed in SHACL core");

    EmitterOutput shex = emitShex(schema);
    require(shex.artifact.find("ex:email xsd:string*") != std::string::npos,
            "ShEx multi-valued email marker");
    int shexKeys = 0;
    for (const auto& d : shex.unexpressed) {
        if (d.subject.rfind("Key(", 0) == 0 || d.subject.rfind("Identity(", 0) == 0) {
            ++shexKeys;
        }
    }
    require(shexKeys == 7, "all seven key constraints must be unexpressed in ShEx");

    EmitterOutput pg = emitPgSchema(schema);
    for (const char* needle :
         {"FOR (u:universityType) IDENTIFIER u.name",
          "FOR (p:personType) IDENTIFIER p.fname, p.lname",
          "FOR (m:messageType) IDENTIFIER p.fname, p.lname, m.number WITHIN "
          "(p)-[:wrote]->(m)",
          "FOR (m:messageType) MANDATORY SINGLETON w WITHIN ()-[w:wrote]->(m)",
          "FOR (p:personType) EXCLUSIVE e WITHIN (p)-[:hasEmail]->(e)"}) {
        require(pg.artifact.find(needle) != std::string::npos,
                std::string("PG-Schema clause missing: ") + needle);
    }
    detail << " shacl/shex/pgschema";
}

// ---------------------------------------------------------------------------
// 7. Parse/serialize round-trip on random well-formed schemas.

void criterion7(std::ostringstream& detail) {
    Gen gen(20250812);
    for (int i = 0; i < 500; ++i) {
        Schema schema = test::randomWellFormedSchema(gen);
        SchemaParseResult reparsed = parseSchema(serializeSchema(schema));
        require(reparsed.ok(), "serialized schema must reparse");
        require(*reparsed.schema == schema, "round-trip must be the identity");
    }
    detail << " 500 schemas";
}

// ---------------------------------------------------------------------------
// 8. Verbalizer reproduces the reference conceptual text.

std::vector<std::string> sentencesOf(const std::string& text) {
    // Join wrapped lines (continuations start with whitespace), then split
    // into sentences and normalize inner whitespace.
    std::string joined;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (!joined.empty() && (line[0] == ' ' || line[0] == '\t')) {
            joined += " " + line;
        } else {
            joined += "\n" + line;
        }
    }
    std::vector<std::string> out;
    std::istringstream lines(joined);
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        std::string normalized;
        bool space = false;
        for (char c : line) {
            if (std::isspace(static_cast<unsigned char>(c))) {
                space = true;
                continue;
            }
            if (space && !normalized.empty()) normalized += ' ';
            space = false;
            normalized += c;
        }
        if (!normalized.empty()) out.push_back(normalized);
    }
    std::sort(out.begin(), out.end());
    return out;
}

void criterion8(std::ostringstream& detail) {
    SchemaParseResult parsed =
        parseSchema(test::readFixture("employee_department.kger"));
    require(parsed.ok(), "employee/department schema must parse");
    std::string produced = verbalize(*parsed.schema);
    std::string reference = test::readFixture("employee_department_expected.txt");

    auto producedSentences = sentencesOf(produced);
    auto referenceSentences = sentencesOf(reference);
    if (producedSentences != referenceSentences) {
        std::ostringstream diff;
        diff << "verbalization differs from the reference text;";
        for (const auto& s : referenceSentences) {
            if (!std::binary_search(producedSentences.begin(), producedSentences.end(), s)) {
                diff << " missing: \"" << s << "\"";
            }
        }
        for (const auto& s : producedSentences) {
            if (!std::binary_search(referenceSentences.begin(), referenceSentences.end(),
                                    s)) {
                diff << " extra: \"" << s << "\"";
            }
        }
        throw Failure(diff.str());
    }
    require(produced.find("participates in one or more instances") != std::string::npos,
            "fused participation phrasing must be present");
    detail << " " << referenceSentences.size() << " sentences";
}

} // namespace

int main() {
    std::vector<Criterion> criteria{
        {"1 well-formedness fixture and nine mutations", criterion1},
        {"2 pattern evaluation matches formula grounding (500 cases)", criterion2},
        {"3 fixture G0 conformance and seeded violations", criterion3},
        {"4 semantics containment with separating cases (500 pairs)", criterion4},
        {"5 SQL golden translation", criterion5},
        {"6 SHACL/ShEx/PG-Schema golden structure", criterion6},
        {"7 parse/serialize round-trip (500 schemas)", criterion7},
        {"8 verbalizer reference text", criterion8},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        auto start = std::chrono::steady_clock::now();
        std::ostringstream detail;
        std::string verdict = "PASS";
        std::string message;
        try {
            criterion.body(detail);
        } catch (const std::exception& e) {
            verdict = "FAIL";
            message = e.what();
            ++failures;
        }
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        std::cout << verdict << " criterion " << criterion.name;
        if (!detail.str().empty()) std::cout << " (" << detail.str().substr(1) << ")";
        std::cout << " [" << ms << " ms]";
        if (!message.empty()) std::cout << "\n     " << message;
        std::cout << "\n";
    }
    return failures == 0 ? 0 : 1;
}
