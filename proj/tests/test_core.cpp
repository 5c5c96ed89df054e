#include "kger/core.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace kger;

namespace {

std::vector<ShapeStatement> example21Shape() {
    return {
        EntityDecl{"University"},
        EntityDecl{"Person"},
        RelationshipDecl{"studies"},
        AttributeDecl{"University", "name"},
        AttributeDecl{"Person", "fname"},
        AttributeDecl{"Person", "lname"},
        AttributeDecl{"Person", "email"},
        AttributeDecl{"studies", "year"},
        RoleDecl{"studies", "uni", "University"},
        RoleDecl{"studies", "student", "Person"},
    };
}

} // namespace

TEST_CASE("values canonicalize and compare numerically") {
    CHECK(Value::integer("007") == Value::integer(7));
    CHECK(Value::integer("-0") == Value::integer(0));
    CHECK(Value::decimal("2.50") == Value::decimal("2.5"));
    CHECK(Value::decimal("2.0") == Value::integer(2));
    CHECK(Value::decimal("1e2") == Value::integer(100));
    CHECK(Value::decimal("0.5e1") == Value::decimal("5"));
    CHECK(Value::text("2") != Value::integer(2));
    CHECK(Value::boolean(true).lexical() == "true");
    CHECK_THROWS_AS(Value::integer("1.5"), Error);
    CHECK_THROWS_AS(Value::decimal("abc"), Error);
}

TEST_CASE("pattern arity and groundness") {
    // p1 = name
    Pattern p1 = Pattern::attrLeaf("name");
    CHECK(patternArity(p1) == 1);
    CHECK(isGround(p1));

    // p3 = msg(author)
    Pattern p3 = Pattern::roleNode("msg", {Pattern::roleLeaf("author")});
    CHECK(patternArity(p3) == 1);
    CHECK_FALSE(isGround(p3));

    // p4 = msg(author(fname, lname))
    Pattern p4 = Pattern::roleNode(
        "msg", {Pattern::roleNode("author", {Pattern::attrLeaf("fname"),
                                             Pattern::attrLeaf("lname")})});
    CHECK(patternArity(p4) == 2);
    CHECK(isGround(p4));
    CHECK(p4.render() == "msg(author(fname, lname))");

    // B(B'(A), A', B'') has three leaves
    Pattern mixed = Pattern::roleNode(
        "b", {Pattern::roleNode("b2", {Pattern::attrLeaf("a")}), Pattern::attrLeaf("a2"),
              Pattern::roleLeaf("b3")});
    CHECK(patternArity(mixed) == 3);
    CHECK_FALSE(isGround(mixed));
}

TEST_CASE("buildSchema produces indexes for the studies example") {
    BuildResult result = buildSchema(example21Shape(), {});
    REQUIRE(result.ok());
    const Schema& schema = *result.schema;
    CHECK(schema.attrsOf.at("Person") ==
          std::set<std::string>{"fname", "lname", "email"});
    CHECK(schema.ownerOfAttr.at("name") == "University");
    CHECK(schema.ownerOfRole.at("uni") ==
          std::make_pair(std::string("studies"), std::string("University")));
    CHECK(schema.participations.at("Person") ==
          std::set<std::pair<std::string, std::string>>{{"studies", "student"}});
}

TEST_CASE("buildSchema accepts the empty statement list") {
    BuildResult result = buildSchema({}, {});
    REQUIRE(result.ok());
    CHECK(result.schema->shape.empty());
    CHECK(result.schema->constraints.empty());
}

TEST_CASE("buildSchema rejects a twice-owned attribute") {
    auto shape = example21Shape();
    shape.push_back(AttributeDecl{"University", "email"});
    BuildResult result = buildSchema(shape, {});
    CHECK_FALSE(result.ok());
    REQUIRE(result.diagnostics.size() == 1);
    CHECK(result.diagnostics.front().code == "DUP-ATTR-OWNER");
    CHECK(result.diagnostics.front().subject == "email");
}

TEST_CASE("buildSchema rejects role and name-class clashes") {
    auto shape = example21Shape();
    SUBCASE("role declared with two relationships") {
        shape.push_back(RelationshipDecl{"follows"});
        shape.push_back(RoleDecl{"follows", "uni", "Person"});
        BuildResult result = buildSchema(shape, {});
        CHECK_FALSE(result.ok());
        CHECK(result.diagnostics.front().code == "DUP-ROLE-OWNER");
    }
    SUBCASE("attribute name reused as role name") {
        shape.push_back(RoleDecl{"studies", "name", "Person"});
        BuildResult result = buildSchema(shape, {});
        CHECK_FALSE(result.ok());
        CHECK(std::any_of(result.diagnostics.begin(), result.diagnostics.end(),
                          [](const Diagnostic& d) { return d.code == "NAME-CLASS-OVERLAP"; }));
    }
    SUBCASE("entity name reused as relationship name") {
        shape.push_back(RelationshipDecl{"Person"});
        BuildResult result = buildSchema(shape, {});
        CHECK_FALSE(result.ok());
        CHECK(result.diagnostics.front().code == "NAME-CLASS-OVERLAP");
    }
}

TEST_CASE("buildSchema deduplicates and is order-insensitive") {
    auto shape = example21Shape();
    std::vector<ConstraintStatement> constraints{
        SingleAttr{"Person", "fname"},
        IdentityConstraint{"Person",
                           {Pattern::attrLeaf("fname"), Pattern::attrLeaf("lname")}},
    };
    auto duplicated = shape;
    duplicated.insert(duplicated.end(), shape.begin(), shape.end());
    BuildResult reference = buildSchema(shape, constraints);
    BuildResult doubled = buildSchema(duplicated, constraints);
    REQUIRE(reference.ok());
    REQUIRE(doubled.ok());
    CHECK(*reference.schema == *doubled.schema);

    std::mt19937 rng(7);
    for (int i = 0; i < 20; ++i) {
        auto permutedShape = shape;
        auto permutedConstraints = constraints;
        std::shuffle(permutedShape.begin(), permutedShape.end(), rng);
        std::shuffle(permutedConstraints.begin(), permutedConstraints.end(), rng);
        BuildResult permuted = buildSchema(permutedShape, permutedConstraints);
        REQUIRE(permuted.ok());
        CHECK(*reference.schema == *permuted.schema);
    }
}

TEST_CASE("ancestorsOf follows Isa reflexively and transitively") {
    std::vector<ShapeStatement> shape{
        EntityDecl{"Message"}, EntityDecl{"Post"}, EntityDecl{"Comment"},
        EntityDecl{"Person"}};
    std::vector<ConstraintStatement> constraints{IsaConstraint{"Post", "Message"},
                                                 IsaConstraint{"Comment", "Message"}};
    Schema schema = *buildSchema(shape, constraints).schema;

    CHECK(ancestorsOf(schema, "Post") == std::set<std::string>{"Post", "Message"});
    CHECK(ancestorsOf(schema, "Person") == std::set<std::string>{"Person"});
    CHECK_THROWS_AS(ancestorsOf(schema, "Nobody"), Error);

    SUBCASE("chains close transitively") {
        constraints.push_back(IsaConstraint{"Message", "Person"});
        Schema chained = *buildSchema(shape, constraints).schema;
        CHECK(ancestorsOf(chained, "Post") ==
              std::set<std::string>{"Post", "Message", "Person"});
        // Monotone along edges: ancestors of the superclass are included.
        for (const auto& super : ancestorsOf(chained, "Message")) {
            CHECK(ancestorsOf(chained, "Post").count(super) == 1);
        }
    }
}

TEST_CASE("rootsOf finds entities with no superclass") {
    std::vector<ShapeStatement> shape{EntityDecl{"A"}, EntityDecl{"B"}, EntityDecl{"C"},
                                      EntityDecl{"D"}};
    SUBCASE("no Isa statements: every entity is a root") {
        Schema schema = *buildSchema(shape, {}).schema;
        CHECK(rootsOf(schema) == std::set<std::string>{"A", "B", "C", "D"});
    }
    SUBCASE("diamond") {
        std::vector<ConstraintStatement> constraints{
            IsaConstraint{"A", "B"}, IsaConstraint{"A", "C"}, IsaConstraint{"B", "D"},
            IsaConstraint{"C", "D"}};
        Schema schema = *buildSchema(shape, constraints).schema;
        CHECK(rootsOf(schema) == std::set<std::string>{"D"});
    }
    SUBCASE("running example roots include the three entities") {
        Schema schema = kger::test::runningExample();
        auto roots = rootsOf(schema);
        CHECK(roots == std::set<std::string>{"University", "Person", "Message"});
    }
}
