#include "kger/text_format.hpp"

#include "fixtures.hpp"
#include "generators.hpp"

#include <doctest.h>

#include <algorithm>

using namespace kger;

TEST_CASE("parseSchema reads the studies example") {
    const char* source = R"(
# persons studying at universities
Entity(University)
Attribute(University, name)
Entity(Person)
Attribute(Person, fname)
Attribute(Person, lname)
Attribute(Person, email)
Relationship(studies)
Attribute(studies, year)
Role(studies, uni, University)
Role(studies, student, Person)
)";
    SchemaParseResult parsed = parseSchema(source);
    REQUIRE(parsed.ok());
    CHECK(parsed.schema->attrsOf.at("Person") ==
          std::set<std::string>{"fname", "lname", "email"});

    // Equal to the programmatic construction.
    BuildResult direct = buildSchema(
        {EntityDecl{"University"}, AttributeDecl{"University", "name"},
         EntityDecl{"Person"}, AttributeDecl{"Person", "fname"},
         AttributeDecl{"Person", "lname"}, AttributeDecl{"Person", "email"},
         RelationshipDecl{"studies"}, AttributeDecl{"studies", "year"},
         RoleDecl{"studies", "uni", "University"}, RoleDecl{"studies", "student", "Person"}},
        {});
    CHECK(*parsed.schema == *direct.schema);
}

TEST_CASE("parseSchema handles the empty document") {
    SchemaParseResult parsed = parseSchema("");
    REQUIRE(parsed.ok());
    CHECK(parsed.schema->shape.empty());
}

TEST_CASE("parseSchema reports positions and keeps going") {
    SchemaParseResult parsed = parseSchema("Entity(A)\nEntity(\nRole(R)\nEntity(B)\n");
    CHECK_FALSE(parsed.ok());
    REQUIRE(parsed.parseErrors.size() == 2);
    CHECK(parsed.parseErrors[0].line == 2);
    CHECK(parsed.parseErrors[1].line == 3);
}

TEST_CASE("parseSchema rejects an empty pattern list") {
    SchemaParseResult parsed = parseSchema("Entity(Person)\nKey(Person, [])\n");
    CHECK_FALSE(parsed.ok());
    REQUIRE(parsed.parseErrors.size() == 1);
    CHECK(parsed.parseErrors[0].expected == "non-empty pattern list");
}

TEST_CASE("parseSchema distinguishes statement arities and rejects junk") {
    SchemaParseResult parsed = parseSchema(
        "Entity(A)\nRelationship(R)\nAttribute(A, x)\nRole(R, r, A)\n"
        "Mandatory(A, x)\nSingle(A, x)\nMandatory(A, r, R)\nSingle(A, r, R)\n"
        "Isa(A, A2) # unknown name is fine at parse time\nEntity(A2)\n"
        "Disjoint(A, A2)\nCover({A, A2}, A)\n");
    REQUIRE(parsed.parseErrors.empty());

    SchemaParseResult bad = parseSchema("Banana(A)\n");
    CHECK_FALSE(bad.ok());
    REQUIRE(bad.parseErrors.size() == 1);
    CHECK(bad.parseErrors[0].column == 1);

    SchemaParseResult trailing = parseSchema("Entity(A) Entity(B)\n");
    CHECK_FALSE(trailing.ok());
}

TEST_CASE("pattern leaves are classified against the vocabulary") {
    Schema schema = test::runningExample();
    // msg and author are roles, fname is an attribute.
    const IdentityConstraint* id = schema.identityOf("Message");
    REQUIRE(id != nullptr);
    REQUIRE(id->patterns.size() == 2);
    CHECK(id->patterns[0].kind == Pattern::Kind::RoleNode);
    CHECK(id->patterns[0].children[0].kind == Pattern::Kind::RoleNode);
    CHECK(id->patterns[0].children[0].children[0].kind == Pattern::Kind::AttrLeaf);
    CHECK(id->patterns[1].kind == Pattern::Kind::AttrLeaf);
}

TEST_CASE("buildSchema diagnostics surface through parseSchema") {
    SchemaParseResult parsed = parseSchema(
        "Entity(University)\nAttribute(University, email)\n"
        "Entity(Person)\nAttribute(Person, email)\n");
    CHECK_FALSE(parsed.ok());
    CHECK(parsed.parseErrors.empty());
    REQUIRE(parsed.buildDiagnostics.size() == 1);
    CHECK(parsed.buildDiagnostics[0].code == "DUP-ATTR-OWNER");
}

TEST_CASE("serializeSchema round-trips the running example") {
    Schema schema = test::runningExample();
    std::string text = serializeSchema(schema);
    SchemaParseResult reparsed = parseSchema(text);
    REQUIRE(reparsed.ok());
    CHECK(*reparsed.schema == schema);
    CHECK(std::count(text.begin(), text.end(), '\n') >= 39);

    CHECK(serializeSchema(*buildSchema({}, {}).schema).empty());
}

TEST_CASE("loadGraph builds G0 and rejects structural breakage") {
    Schema schema = test::runningExample();
    std::string source = test::readFixture("g0.json");

    GraphLoadResult loaded = loadGraph(source, schema);
    REQUIRE(loaded.ok());
    CHECK(loaded.graph->entityIds.size() == 4);
    CHECK(loaded.graph->relIds.size() == 3);
    CHECK(loaded.graph->attrValues("pA", "email").size() == 2);

    SUBCASE("empty sections give an empty graph") {
        GraphLoadResult empty = loadGraph(
            R"({"entities": [], "relationships": [], "attributes": [], "roles": []})",
            schema);
        REQUIRE(empty.ok());
        CHECK(empty.graph->nodeCount() == 0);
    }
    SUBCASE("role owner mismatch") {
        GraphLoadResult bad = loadGraph(R"({
            "entities": [{"id": "u1", "types": ["University"]}],
            "relationships": [{"id": "f1", "type": "follows"}],
            "roles": [{"rel": "f1", "role": "uni", "target": "u1"}]})",
                                        schema);
        CHECK_FALSE(bad.ok());
        REQUIRE(bad.diagnostics.size() == 1);
        CHECK(bad.diagnostics[0].code == "GRAPH-UNKNOWN-NAME");
    }
    SUBCASE("id reuse across sections") {
        GraphLoadResult bad = loadGraph(R"({
            "entities": [{"id": "x", "types": ["Person"]}],
            "relationships": [{"id": "x", "type": "follows"}]})",
                                        schema);
        CHECK_FALSE(bad.ok());
        CHECK(bad.diagnostics[0].code == "GRAPH-ID-CLASH");
    }
    SUBCASE("facts on unknown ids") {
        GraphLoadResult bad = loadGraph(R"({
            "entities": [{"id": "pA", "types": ["Person"]}],
            "attributes": [{"owner": "ghost", "name": "fname", "value": "x"}]})",
                                        schema);
        CHECK_FALSE(bad.ok());
        CHECK(bad.diagnostics[0].code == "GRAPH-BAD-REF");
    }
    SUBCASE("malformed document") {
        CHECK_FALSE(loadGraph("plainly not json", schema).ok());
        CHECK_FALSE(loadGraph(R"({"entities": 5})", schema).ok());
        GraphLoadResult noTypes = loadGraph(
            R"({"entities": [{"id": "x", "types": []}]})", schema);
        CHECK_FALSE(noTypes.ok());
        CHECK(noTypes.diagnostics[0].code == "GRAPH-SYNTAX");
    }
    SUBCASE("number and boolean values map to typed values") {
        GraphLoadResult typed = loadGraph(R"({
            "entities": [{"id": "m", "types": ["Message"]}],
            "attributes": [
                {"owner": "m", "name": "number", "value": 7},
                {"owner": "m", "name": "text", "value": true},
                {"owner": "m", "name": "date", "value": 7.5}]})",
                                          schema);
        REQUIRE(typed.ok());
        CHECK(typed.graph->attrValues("m", "number").front() == Value::integer(7));
        CHECK(typed.graph->attrValues("m", "text").front() == Value::boolean(true));
        CHECK(typed.graph->attrValues("m", "date").front() == Value::decimal("7.5"));
    }
}

TEST_CASE("graph serialization round-trips G0") {
    Schema schema = test::runningExample();
    KnowledgeGraph g0 = test::g0();
    GraphLoadResult reloaded = loadGraph(serializeGraph(g0), schema);
    REQUIRE(reloaded.ok());
    CHECK(reloaded.graph->entityIds == g0.entityIds);
    CHECK(reloaded.graph->attrFacts == g0.attrFacts);
    CHECK(reloaded.graph->roleFacts == g0.roleFacts);
}

TEST_CASE("schema round-trip holds on random well-formed schemas") {
    test::Gen gen(20240811);
    for (int i = 0; i < 60; ++i) {
        Schema schema = test::randomWellFormedSchema(gen);
        SchemaParseResult reparsed = parseSchema(serializeSchema(schema));
        REQUIRE(reparsed.ok());
        CHECK(*reparsed.schema == schema);
    }
}

TEST_CASE("parseSchema is total on arbitrary input") {
    test::Gen gen(111213);
    const std::string alphabet = "EntityRoleKy(){}[],# \t_09azZ\n\"\\";
    for (int i = 0; i < 300; ++i) {
        std::string junk;
        int length = gen.pick(0, 120);
        for (int j = 0; j < length; ++j) {
            junk += alphabet[static_cast<std::size_t>(
                gen.pick(0, static_cast<int>(alphabet.size()) - 1))];
        }
        SchemaParseResult parsed = parseSchema(junk); // must not crash
        if (!parsed.ok()) {
            CHECK((!parsed.parseErrors.empty() || !parsed.buildDiagnostics.empty()));
        }
    }
}
