// Property tests pitting the specialized evaluators against brute-force
// formula grounding.

#include "kger/pattern_engine.hpp"
#include "kger/validator.hpp"

#include "generators.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace kger;

namespace {

// Projects oracle assignments onto the answer variables, in order.
std::set<Tuple> oracleTuples(const KnowledgeGraph& graph, const FolFormula& formula,
                             const std::string& inst, std::size_t arity) {
    std::set<Tuple> out;
    for (const auto& assignment : evalFormula(graph, formula, {{"x", NodeId{inst}}})) {
        Tuple t;
        for (std::size_t i = 1; i <= arity; ++i) {
            t.push_back(assignment.at("y" + std::to_string(i)));
        }
        out.insert(std::move(t));
    }
    return out;
}

FolFormula renameBound(const FolFormula& f, const std::string& from,
                       const std::string& to) {
    FolFormula out = f;
    for (auto& v : out.vars) {
        if (v == from) v = to;
    }
    for (auto& c : out.children) c = renameBound(c, from, to);
    return out;
}

// Counts the enumeration cost of the oracle for a clause; used to skip the
// handful of generated statements that would make the brute force explode.
std::size_t quantifierCost(const FolFormula& f) {
    switch (f.kind) {
        case FolFormula::Kind::Exists:
        case FolFormula::Kind::Forall: {
            std::size_t inner = quantifierCost(f.children.front());
            return f.vars.size() + inner;
        }
        case FolFormula::Kind::And:
        case FolFormula::Kind::Or:
        case FolFormula::Kind::Implies: {
            std::size_t worst = 0;
            for (const auto& c : f.children) worst = std::max(worst, quantifierCost(c));
            return worst;
        }
        default:
            return 0;
    }
}

} // namespace

TEST_CASE("evalPattern agrees with formula grounding on random cases") {
    test::Gen gen(424242);
    int checked = 0;
    int attempts = 0;
    while (checked < 120 && attempts < 3000) {
        ++attempts;
        Schema schema = test::randomWellFormedSchema(gen);
        KnowledgeGraph graph = test::randomGraph(schema, gen, 6);

        std::vector<std::string> subjects(schema.entities.begin(), schema.entities.end());
        subjects.insert(subjects.end(), schema.relationships.begin(),
                        schema.relationships.end());
        const std::string& subject = gen.oneOf(subjects);
        auto pattern = test::randomRootedPattern(schema, gen, subject, 2);
        if (!pattern.has_value() || patternArity(*pattern) > 2) continue;
        REQUIRE(isRootedAt(schema, *pattern, subject));

        auto instances = graph.instancesOf(schema, subject);
        if (instances.empty()) continue;
        const std::string& inst = gen.oneOf(instances);

        std::size_t arity = patternArity(*pattern);
        auto direct = evalPattern(schema, graph, subject, *pattern, inst);
        FolFormula formula = translatePattern(schema, subject, *pattern);
        auto oracle = oracleTuples(graph, formula, inst, arity);
        CHECK(direct == oracle);

        // Tuple width always equals the pattern arity.
        for (const auto& t : direct) CHECK(t.size() == arity);
        // Ground patterns produce data values only.
        if (isGround(*pattern)) {
            for (const auto& t : direct) {
                for (const auto& e : t) CHECK(std::holds_alternative<Value>(e));
            }
        }
        ++checked;
    }
    CHECK(checked == 120);
}

TEST_CASE("alpha-renaming bound variables does not change oracle results") {
    test::Gen gen(515151);
    int checked = 0;
    int attempts = 0;
    while (checked < 25 && attempts < 1000) {
        ++attempts;
        Schema schema = test::randomWellFormedSchema(gen);
        KnowledgeGraph graph = test::randomGraph(schema, gen, 5);
        std::vector<std::string> subjects(schema.entities.begin(), schema.entities.end());
        const std::string& subject = gen.oneOf(subjects);
        auto pattern = test::randomRootedPattern(schema, gen, subject, 2);
        if (!pattern.has_value() || patternArity(*pattern) > 2) continue;
        auto instances = graph.instancesOf(schema, subject);
        if (instances.empty()) continue;
        const std::string& inst = instances.front();

        FolFormula formula = translatePattern(schema, subject, *pattern);
        FolFormula renamed = renameBound(renameBound(formula, "z1", "w9"), "z2", "w8");
        CHECK(oracleTuples(graph, formula, inst, patternArity(*pattern)) ==
              oracleTuples(graph, renamed, inst, patternArity(*pattern)));
        ++checked;
    }
    CHECK(checked == 25);
}

TEST_CASE("checkStatement verdicts match the brute-forced semantics clauses") {
    test::Gen gen(616161);
    int checkedStatements = 0;
    for (int round = 0; round < 40; ++round) {
        Schema schema = test::randomWellFormedSchema(gen);
        KnowledgeGraph graph = gen.chance(0.5) ? test::randomGraph(schema, gen, 5)
                                               : test::mostlyValidGraph(schema, gen,
                                                                        gen.chance(0.5), 5);
        std::size_t domain = activeDomain(graph).size();

        auto checkOne = [&](const Statement& stmt) {
            FolFormula clause = statementClause(schema, stmt);
            double grounding = std::pow(static_cast<double>(std::max<std::size_t>(domain, 1)),
                                        static_cast<double>(quantifierCost(clause)));
            if (grounding > 20000.0) return; // brute force too wide for this clause
            bool holds = satisfies(graph, clause);
            bool clean = !hasErrors(checkStatement(schema, graph, stmt));
            CHECK_MESSAGE(holds == clean,
                          render(stmt) << " disagrees with its clause on a graph with "
                                       << domain << " domain elements");
            ++checkedStatements;
        };
        for (const auto& s : schema.shape) checkOne(Statement{s});
        for (const auto& c : schema.constraints) checkOne(Statement{c});
    }
    // The cost cap must not hollow the test out.
    CHECK(checkedStatements > 300);
}
