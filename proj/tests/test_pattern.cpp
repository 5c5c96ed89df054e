#include "kger/pattern_engine.hpp"

#include "fixtures.hpp"

#include <doctest.h>

using namespace kger;

namespace {

Pattern p4() {
    return Pattern::roleNode(
        "msg", {Pattern::roleNode("author", {Pattern::attrLeaf("fname"),
                                             Pattern::attrLeaf("lname")})});
}

Tuple textTuple(std::initializer_list<const char*> parts) {
    Tuple t;
    for (const char* p : parts) t.push_back(Value::text(p));
    return t;
}

} // namespace

TEST_CASE("rootedness follows the shape graph in both directions") {
    Schema schema = test::runningExample();

    CHECK(isRootedAt(schema, Pattern::roleNode("msg", {Pattern::roleLeaf("author")}),
                     "Message"));
    CHECK(isRootedAt(schema, Pattern::roleLeaf("student"), "studies"));
    CHECK_FALSE(isRootedAt(schema, Pattern::roleLeaf("student"), "University"));
    CHECK(isRootedAt(schema, Pattern::attrLeaf("name"), "University"));
    CHECK(isRootedAt(schema, p4(), "Message"));
    CHECK_FALSE(isRootedAt(schema, p4(), "Person"));
    CHECK_FALSE(isRootedAt(schema, Pattern::attrLeaf("fname"), "University"));

    CHECK_THROWS_AS(isRootedAt(schema, Pattern::attrLeaf("name"), "Nothing"), Error);
    CHECK_THROWS_AS(isRootedAt(schema, Pattern::attrLeaf("ghost"), "University"), Error);
}

TEST_CASE("rootedness sees inherited attributes and participations") {
    SchemaParseResult parsed = parseSchema(R"(
Entity(Message)
Entity(Post)
Attribute(Message, number)
Relationship(wrote)
Entity(Person)
Attribute(Person, fname)
Role(wrote, author, Person)
Role(wrote, msg, Message)
Isa(Post, Message)
)");
    REQUIRE(parsed.ok());
    const Schema& schema = *parsed.schema;
    CHECK(isRootedAt(schema, Pattern::attrLeaf("number"), "Post"));
    CHECK(isRootedAt(schema,
                     Pattern::roleNode("msg", {Pattern::roleNode(
                                                  "author", {Pattern::attrLeaf("fname")})}),
                     "Post"));
    CHECK_FALSE(isRootedAt(schema, Pattern::attrLeaf("fname"), "Post"));
}

TEST_CASE("translatePattern produces the documented formulas") {
    Schema schema = test::runningExample();

    SUBCASE("attribute leaf") {
        FolFormula f = translatePattern(schema, "University", Pattern::attrLeaf("name"));
        CHECK(f.render() == "name(x, y1)");
    }
    SUBCASE("role leaf at the entity side reverses the atom") {
        FolFormula f = translatePattern(schema, "Person", Pattern::roleLeaf("student"));
        CHECK(f.render() == "student(y1, x)");
    }
    SUBCASE("role leaf at the relationship side") {
        FolFormula f = translatePattern(schema, "studies", Pattern::roleLeaf("student"));
        CHECK(f.render() == "student(x, y1)");
    }
    SUBCASE("nested navigation quantifies intermediate variables") {
        FolFormula f = translatePattern(schema, "Message", p4());
        CHECK(f.render() ==
              "∃z1. msg(z1, x) ∧ (∃z2. author(z1, z2) ∧ fname(z2, y1) ∧ lname(z2, y2))");
        CHECK(f.freeVariables() == std::vector<std::string>{"x", "y1", "y2"});
    }
    SUBCASE("not rooted throws") {
        CHECK_THROWS_AS(translatePattern(schema, "Person", p4()), Error);
    }
}

TEST_CASE("evalPattern on G0 matches the worked examples") {
    Schema schema = test::runningExample();
    KnowledgeGraph g0 = test::g0();

    CHECK(evalPattern(schema, g0, "Message", p4(), "m1") ==
          std::set<Tuple>{textTuple({"Ada", "Lovelace"})});
    CHECK(evalPattern(schema, g0, "Person", Pattern::attrLeaf("email"), "pA") ==
          std::set<Tuple>{textTuple({"a@x"}), textTuple({"b@x"})});
    CHECK(evalPattern(schema, g0, "University", Pattern::attrLeaf("name"), "u1") ==
          std::set<Tuple>{textTuple({"MIT"})});
    // No matching facts: empty set.
    CHECK(evalPattern(schema, g0, "Person", Pattern::attrLeaf("email"), "pB").empty());
    // Role leaves return instance ids.
    CHECK(evalPattern(schema, g0, "Person", Pattern::roleLeaf("author"), "pA") ==
          std::set<Tuple>{Tuple{NodeId{"w1"}}});

    CHECK_THROWS_AS(evalPattern(schema, g0, "Person", Pattern::attrLeaf("fname"), "u1"),
                    Error);
}

TEST_CASE("witnessTuples is the concatenated product") {
    Schema schema = test::runningExample();
    KnowledgeGraph g0 = test::g0();

    CHECK(witnessTuples(schema, g0, "Person",
                        {Pattern::attrLeaf("fname"), Pattern::attrLeaf("lname")}, "pA") ==
          std::set<Tuple>{textTuple({"Ada", "Lovelace"})});
    CHECK(witnessTuples(schema, g0, "Person",
                        {Pattern::attrLeaf("email"), Pattern::attrLeaf("fname")}, "pA") ==
          std::set<Tuple>{textTuple({"a@x", "Ada"}), textTuple({"b@x", "Ada"})});
    // An empty component empties the product.
    CHECK(witnessTuples(schema, g0, "Person",
                        {Pattern::attrLeaf("email"), Pattern::attrLeaf("fname")}, "pB")
              .empty());
}

TEST_CASE("evalFormula grounds formulas over the active domain") {
    Schema schema = test::runningExample();
    KnowledgeGraph g0 = test::g0();

    SUBCASE("university names with x bound") {
        FolFormula f = translatePattern(schema, "University", Pattern::attrLeaf("name"));
        auto result = evalFormula(g0, f, {{"x", NodeId{"u1"}}});
        REQUIRE(result.size() == 1);
        CHECK(result.begin()->at("y1") == Element{Value::text("MIT")});
    }
    SUBCASE("unsatisfiable atom over the empty graph") {
        KnowledgeGraph empty;
        FolFormula f = FolFormula::binAtom("name", "x", "y");
        CHECK(evalFormula(empty, f).empty());
    }
    SUBCASE("negative instance check") {
        FolFormula f = FolFormula::classAtom("Person", "x");
        CHECK(satisfies(g0, f, {{"x", NodeId{"pA"}}}));
        CHECK_FALSE(satisfies(g0, f, {{"x", NodeId{"u1"}}}));
    }
    SUBCASE("quantifiers") {
        // Every message has an author: ∀x. Message(x) ⇒ ∃y. msg(y, x)
        FolFormula f = FolFormula::forall(
            {"x"}, FolFormula::implies(
                       FolFormula::classAtom("Message", "x"),
                       FolFormula::exists({"y"}, FolFormula::binAtom("msg", "y", "x"))));
        CHECK(satisfies(g0, f));
    }
}
