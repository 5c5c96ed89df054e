#include "kger/validator.hpp"

#include "kger/pattern_engine.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <sstream>

namespace kger {

namespace {

Diagnostic violation(std::string code, std::string subject, std::string message,
                     std::vector<std::string> witnesses = {}) {
    Diagnostic d;
    d.severity = Diagnostic::Severity::Error;
    d.code = std::move(code);
    d.subject = std::move(subject);
    d.message = std::move(message);
    d.witnesses = std::move(witnesses);
    return d;
}

// Appends `fresh` to `out`, truncating per statement with a warning marker.
class DiagnosticSink {
public:
    DiagnosticSink(std::vector<Diagnostic>& out, const ValidatorOptions& options,
                   std::string subject)
        : out_(out), options_(options), subject_(std::move(subject)) {}

    void push(Diagnostic d) {
        if (count_ == options_.maxDiagnosticsPerStatement) {
            Diagnostic marker;
            marker.severity = Diagnostic::Severity::Warning;
            marker.code = "TRUNCATED";
            marker.subject = subject_;
            marker.message = "further diagnostics for this statement suppressed";
            out_.push_back(std::move(marker));
            ++count_;
            return;
        }
        if (count_ > options_.maxDiagnosticsPerStatement) {
            ++count_;
            return;
        }
        ++count_;
        out_.push_back(std::move(d));
    }

private:
    std::vector<Diagnostic>& out_;
    const ValidatorOptions& options_;
    std::string subject_;
    std::size_t count_ = 0;
};

std::string renderTupleSet(const std::set<Tuple>& tuples) {
    std::string out = "{";
    bool first = true;
    for (const auto& t : tuples) {
        if (!first) out += ", ";
        first = false;
        out += render(t);
    }
    return out + "}";
}

bool memberOf(const KnowledgeGraph& graph, const std::string& id, const std::string& name,
              const Schema& schema) {
    if (schema.isEntity(name)) return graph.isEntityInstanceOf(id, name);
    return graph.isRelInstanceOf(id, name);
}

} // namespace

// ---------------------------------------------------------------------------
// Data-model conditions

std::vector<Diagnostic> checkDataModel(const Schema& schema, const KnowledgeGraph& graph) {
    std::vector<Diagnostic> diags;

    // DM3 / structural integrity: disjoint id spaces, typed instances,
    // declared membership names.
    for (const auto& id : graph.entityIds) {
        if (graph.relIds.count(id) > 0) {
            diags.push_back(violation("DM3", id, "id used as both entity and relationship",
                                      {id}));
        }
        auto it = graph.entityMembership.find(id);
        if (it == graph.entityMembership.end() || it->second.empty()) {
            diags.push_back(violation("DM3", id, "entity instance belongs to no entity",
                                      {id}));
            continue;
        }
        for (const auto& name : it->second) {
            if (!schema.isEntity(name)) {
                diags.push_back(
                    violation("DM3", id, "membership in undeclared entity " + name, {id}));
            }
        }
    }
    for (const auto& id : graph.relIds) {
        auto it = graph.relMembership.find(id);
        if (it == graph.relMembership.end()) {
            diags.push_back(violation(
                "DM3", id, "relationship instance belongs to no relationship", {id}));
            continue;
        }
        if (!schema.isRelationship(it->second)) {
            diags.push_back(violation(
                "DM3", id, "membership in undeclared relationship " + it->second, {id}));
        }
    }

    // DM1: facts only on typed instances matching the declared owners.
    for (const auto& fact : graph.attrFacts) {
        auto owner = schema.ownerOfAttr.find(fact.attribute);
        if (owner == schema.ownerOfAttr.end()) {
            diags.push_back(violation("DM1", fact.owner,
                                      "fact uses undeclared attribute " + fact.attribute,
                                      {fact.owner, fact.value.render()}));
            continue;
        }
        if (!memberOf(graph, fact.owner, owner->second, schema)) {
            diags.push_back(violation(
                "DM1", fact.owner,
                "attribute " + fact.attribute + " of " + owner->second +
                    " asserted on an instance outside it",
                {fact.owner, fact.value.render()}));
        }
    }
    for (const auto& fact : graph.roleFacts) {
        auto owner = schema.ownerOfRole.find(fact.role);
        if (owner == schema.ownerOfRole.end()) {
            diags.push_back(violation("DM1", fact.rel,
                                      "fact uses undeclared role " + fact.role,
                                      {fact.rel, fact.target}));
            continue;
        }
        const auto& [rel, entity] = owner->second;
        if (!graph.isRelInstanceOf(fact.rel, rel)) {
            diags.push_back(violation("DM1", fact.rel,
                                      "role " + fact.role + " of " + rel +
                                          " asserted on an instance outside it",
                                      {fact.rel, fact.target}));
        }
        if (!graph.isEntityInstanceOf(fact.target, entity)) {
            diags.push_back(violation("DM1", fact.target,
                                      "role " + fact.role + " targets an instance outside " +
                                          entity,
                                      {fact.rel, fact.target}));
        }
    }

    // DM2: role names are partial functions per relationship instance.
    for (const auto& id : graph.relIds) {
        std::map<std::string, std::vector<std::string>> byRole;
        for (const auto& fact : graph.roleFacts) {
            if (fact.rel == id) byRole[fact.role].push_back(fact.target);
        }
        for (const auto& [role, fillers] : byRole) {
            if (fillers.size() > 1) {
                std::vector<std::string> witnesses{id};
                witnesses.insert(witnesses.end(), fillers.begin(), fillers.end());
                diags.push_back(violation("DM2", id,
                                          "role " + role + " filled " +
                                              std::to_string(fillers.size()) +
                                              " times on one instance",
                                          std::move(witnesses)));
            }
        }
    }

    return diags;
}

// ---------------------------------------------------------------------------
// Statement clauses

FolFormula disjointnessClause(const std::string& left, const std::string& right) {
    return FolFormula::forall(
        {"x"},
        FolFormula::implies(FolFormula::conj({FolFormula::classAtom(left, "x"),
                                              FolFormula::classAtom(right, "x")}),
                            FolFormula::mkFalse()));
}

namespace {

std::vector<std::string> numberedVars(const std::string& prefix, std::size_t count) {
    std::vector<std::string> out;
    out.reserve(count);
    for (std::size_t i = 1; i <= count; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

// ψ(inst, answers) = X(inst) ∧ ⋀_i φ_{p_i}^X(inst, answers_i)
FolFormula witnessFormula(const Schema& schema, const std::string& subject,
                          const std::vector<Pattern>& patterns, const std::string& instVar,
                          const std::vector<std::string>& answerVars,
                          std::size_t& boundCounter) {
    std::vector<FolFormula> parts{FolFormula::classAtom(subject, instVar)};
    std::size_t answerIndex = 0;
    for (const auto& p : patterns) {
        parts.push_back(translatePatternWith(schema, subject, p, instVar, answerVars,
                                             answerIndex, "w", boundCounter));
    }
    return FolFormula::conj(std::move(parts));
}

FolFormula keyClause(const Schema& schema, const std::string& subject,
                     const std::vector<Pattern>& patterns) {
    std::size_t arity = 0;
    for (const auto& p : patterns) arity += patternArity(p);
    auto answers = numberedVars("z", arity);
    std::size_t boundCounter = 0;
    FolFormula psiX = witnessFormula(schema, subject, patterns, "x", answers, boundCounter);
    FolFormula psiY = witnessFormula(schema, subject, patterns, "y", answers, boundCounter);
    std::vector<std::string> quantified{"x", "y"};
    quantified.insert(quantified.end(), answers.begin(), answers.end());
    return FolFormula::forall(
        quantified, FolFormula::implies(FolFormula::conj({psiX, psiY}),
                                        FolFormula::equal("x", "y")));
}

FolFormula identityClause(const Schema& schema, const std::string& subject,
                          const std::vector<Pattern>& patterns) {
    std::size_t arity = 0;
    for (const auto& p : patterns) arity += patternArity(p);

    auto phiAll = [&](const std::string& instVar, const std::vector<std::string>& answers,
                      std::size_t& boundCounter) {
        std::vector<FolFormula> parts;
        std::size_t answerIndex = 0;
        for (const auto& p : patterns) {
            parts.push_back(translatePatternWith(schema, subject, p, instVar, answers,
                                                 answerIndex, "w", boundCounter));
        }
        return FolFormula::conj(std::move(parts));
    };

    auto ys = numberedVars("y", arity);
    auto zs = numberedVars("z", arity);

    std::size_t counter = 0;
    FolFormula atLeast = FolFormula::forall(
        {"x"}, FolFormula::implies(FolFormula::classAtom(subject, "x"),
                                   FolFormula::exists(ys, phiAll("x", ys, counter))));

    counter = 0;
    std::vector<FolFormula> equalities;
    for (std::size_t i = 0; i < arity; ++i) {
        equalities.push_back(FolFormula::equal(ys[i], zs[i]));
    }
    std::vector<std::string> inner = ys;
    inner.insert(inner.end(), zs.begin(), zs.end());
    FolFormula both = FolFormula::conj({phiAll("x", ys, counter), phiAll("x", zs, counter)});
    FolFormula atMost = FolFormula::forall(
        {"x"},
        FolFormula::implies(
            FolFormula::classAtom(subject, "x"),
            FolFormula::forall(inner, FolFormula::implies(
                                          both, FolFormula::conj(std::move(equalities))))));

    return FolFormula::conj(
        {keyClause(schema, subject, patterns), std::move(atLeast), std::move(atMost)});
}

struct ClauseBuilder {
    const Schema& schema;

    FolFormula operator()(const ShapeStatement& s) const {
        if (std::holds_alternative<EntityDecl>(s) ||
            std::holds_alternative<RelationshipDecl>(s)) {
            return FolFormula::mkTrue();
        }
        if (const auto* a = std::get_if<AttributeDecl>(&s)) {
            return FolFormula::forall(
                {"x", "y"}, FolFormula::implies(FolFormula::binAtom(a->attribute, "x", "y"),
                                                FolFormula::classAtom(a->owner, "x")));
        }
        const auto& r = std::get<RoleDecl>(s);
        return FolFormula::forall(
            {"x", "y"},
            FolFormula::implies(FolFormula::binAtom(r.role, "x", "y"),
                                FolFormula::conj({FolFormula::classAtom(r.relationship, "x"),
                                                  FolFormula::classAtom(r.entity, "y")})));
    }

    FolFormula operator()(const ConstraintStatement& c) const {
        if (const auto* m = std::get_if<MandatoryAttr>(&c)) {
            return FolFormula::forall(
                {"x"},
                FolFormula::implies(
                    FolFormula::classAtom(m->owner, "x"),
                    FolFormula::exists({"y"}, FolFormula::binAtom(m->attribute, "x", "y"))));
        }
        if (const auto* s = std::get_if<SingleAttr>(&c)) {
            return FolFormula::forall(
                {"x", "y", "z"},
                FolFormula::implies(
                    FolFormula::conj({FolFormula::binAtom(s->attribute, "x", "y"),
                                      FolFormula::binAtom(s->attribute, "x", "z")}),
                    FolFormula::equal("y", "z")));
        }
        if (const auto* m = std::get_if<MandatoryRole>(&c)) {
            return FolFormula::forall(
                {"x"},
                FolFormula::implies(
                    FolFormula::classAtom(m->entity, "x"),
                    FolFormula::exists({"y"}, FolFormula::binAtom(m->role, "y", "x"))));
        }
        if (const auto* s = std::get_if<SingleRole>(&c)) {
            return FolFormula::forall(
                {"x", "y", "z"},
                FolFormula::implies(FolFormula::conj({FolFormula::binAtom(s->role, "y", "x"),
                                                      FolFormula::binAtom(s->role, "z", "x")}),
                                    FolFormula::equal("y", "z")));
        }
        if (const auto* key = std::get_if<KeyConstraint>(&c)) {
            return keyClause(schema, key->subject, key->patterns);
        }
        if (const auto* id = std::get_if<IdentityConstraint>(&c)) {
            return identityClause(schema, id->subject, id->patterns);
        }
        if (const auto* isa = std::get_if<IsaConstraint>(&c)) {
            return FolFormula::forall(
                {"x"}, FolFormula::implies(FolFormula::classAtom(isa->sub, "x"),
                                           FolFormula::classAtom(isa->super, "x")));
        }
        if (const auto* dis = std::get_if<DisjointConstraint>(&c)) {
            return disjointnessClause(dis->left, dis->right);
        }
        const auto& cover = std::get<CoverConstraint>(c);
        std::vector<FolFormula> options;
        options.reserve(cover.members.size());
        for (const auto& member : cover.members) {
            options.push_back(FolFormula::classAtom(member, "x"));
        }
        return FolFormula::forall(
            {"x"}, FolFormula::implies(FolFormula::classAtom(cover.covered, "x"),
                                       FolFormula::disj(std::move(options))));
    }
};

} // namespace

FolFormula statementClause(const Schema& schema, const Statement& stmt) {
    return std::visit(ClauseBuilder{schema}, stmt);
}

// ---------------------------------------------------------------------------
// Specialized statement checks

namespace {

struct StatementChecker {
    const Schema& schema;
    const KnowledgeGraph& graph;
    DiagnosticSink& sink;
    const std::string subject;

    void operator()(const ShapeStatement& s) const {
        if (const auto* a = std::get_if<AttributeDecl>(&s)) {
            for (const auto& fact : graph.attrFacts) {
                if (fact.attribute != a->attribute) continue;
                if (!memberOf(graph, fact.owner, a->owner, schema)) {
                    sink.push(violation("VIOL-ATTR-DECL", subject,
                                        fact.owner + " has attribute " + a->attribute +
                                            " but is not an instance of " + a->owner,
                                        {fact.owner, fact.value.render()}));
                }
            }
        } else if (const auto* r = std::get_if<RoleDecl>(&s)) {
            for (const auto& fact : graph.roleFacts) {
                if (fact.role != r->role) continue;
                if (!graph.isRelInstanceOf(fact.rel, r->relationship)) {
                    sink.push(violation("VIOL-ROLE-DECL", subject,
                                        fact.rel + " fills role " + r->role +
                                            " but is not an instance of " + r->relationship,
                                        {fact.rel, fact.target}));
                }
                if (!graph.isEntityInstanceOf(fact.target, r->entity)) {
                    sink.push(violation("VIOL-ROLE-DECL", subject,
                                        fact.target + " plays role " + r->role +
                                            " but is not an instance of " + r->entity,
                                        {fact.rel, fact.target}));
                }
            }
        }
        // Entity and Relationship declarations map to true.
    }

    void operator()(const ConstraintStatement& c) const {
        if (const auto* m = std::get_if<MandatoryAttr>(&c)) {
            for (const auto& inst : graph.instancesOf(schema, m->owner)) {
                if (graph.attrValues(inst, m->attribute).empty()) {
                    sink.push(violation("VIOL-MANDATORY-ATTR", subject,
                                        inst + " has no value for " + m->attribute, {inst}));
                }
            }
        } else if (const auto* s = std::get_if<SingleAttr>(&c)) {
            // The clause quantifies over every instance, not only members.
            std::map<std::string, std::vector<Value>> byOwner;
            for (const auto& fact : graph.attrFacts) {
                if (fact.attribute == s->attribute) byOwner[fact.owner].push_back(fact.value);
            }
            for (const auto& [owner, values] : byOwner) {
                if (values.size() > 1) {
                    std::vector<std::string> witnesses{owner};
                    for (const auto& v : values) witnesses.push_back(v.render());
                    sink.push(violation("VIOL-SINGLE-ATTR", subject,
                                        owner + " has " + std::to_string(values.size()) +
                                            " values for " + s->attribute,
                                        std::move(witnesses)));
                }
            }
        } else if (const auto* m = std::get_if<MandatoryRole>(&c)) {
            for (const auto& inst : graph.instancesOf(schema, m->entity)) {
                if (graph.relsWithFiller(m->role, inst).empty()) {
                    sink.push(violation("VIOL-MANDATORY-ROLE", subject,
                                        inst + " does not participate in " +
                                            m->relationship + " through " + m->role,
                                        {inst}));
                }
            }
        } else if (const auto* s = std::get_if<SingleRole>(&c)) {
            std::map<std::string, std::vector<std::string>> byTarget;
            for (const auto& fact : graph.roleFacts) {
                if (fact.role == s->role) byTarget[fact.target].push_back(fact.rel);
            }
            for (const auto& [target, rels] : byTarget) {
                if (rels.size() > 1) {
                    std::vector<std::string> witnesses{target};
                    witnesses.insert(witnesses.end(), rels.begin(), rels.end());
                    sink.push(violation("VIOL-SINGLE-ROLE", subject,
                                        target + " participates " +
                                            std::to_string(rels.size()) + " times through " +
                                            s->role,
                                        std::move(witnesses)));
                }
            }
        } else if (const auto* key = std::get_if<KeyConstraint>(&c)) {
            checkKeyPart(key->subject, key->patterns);
        } else if (const auto* id = std::get_if<IdentityConstraint>(&c)) {
            checkKeyPart(id->subject, id->patterns);
            for (const auto& inst : graph.instancesOf(schema, id->subject)) {
                auto tuples = witnessTuples(schema, graph, id->subject, id->patterns, inst);
                if (tuples.empty()) {
                    sink.push(violation("VIOL-IDENTITY", subject,
                                        inst + " has no key tuple", {inst}));
                } else if (tuples.size() > 1) {
                    sink.push(violation("VIOL-IDENTITY", subject,
                                        inst + " has " + std::to_string(tuples.size()) +
                                            " key tuples",
                                        {inst, renderTupleSet(tuples)}));
                }
            }
        } else if (const auto* isa = std::get_if<IsaConstraint>(&c)) {
            for (const auto& inst : graph.instancesOf(schema, isa->sub)) {
                if (!graph.isEntityInstanceOf(inst, isa->super)) {
                    sink.push(violation("VIOL-ISA", subject,
                                        inst + " is an instance of " + isa->sub +
                                            " but not of " + isa->super,
                                        {inst}));
                }
            }
        } else if (const auto* dis = std::get_if<DisjointConstraint>(&c)) {
            for (const auto& inst : graph.instancesOf(schema, dis->left)) {
                if (graph.isEntityInstanceOf(inst, dis->right)) {
                    sink.push(violation("VIOL-DISJOINT", subject,
                                        inst + " is an instance of both " + dis->left +
                                            " and " + dis->right,
                                        {inst}));
                }
            }
        } else if (const auto* cover = std::get_if<CoverConstraint>(&c)) {
            for (const auto& inst : graph.instancesOf(schema, cover->covered)) {
                bool covered = std::any_of(
                    cover->members.begin(), cover->members.end(),
                    [&](const std::string& m) { return graph.isEntityInstanceOf(inst, m); });
                if (!covered) {
                    sink.push(violation("VIOL-COVER", subject,
                                        inst + " is in none of the covering entities",
                                        {inst}));
                }
            }
        }
    }

    void checkKeyPart(const std::string& keySubject,
                      const std::vector<Pattern>& patterns) const {
        std::map<Tuple, std::vector<std::string>> buckets;
        for (const auto& inst : graph.instancesOf(schema, keySubject)) {
            for (const auto& tuple : witnessTuples(schema, graph, keySubject, patterns,
                                                   inst)) {
                buckets[tuple].push_back(inst);
            }
        }
        for (const auto& [tuple, instances] : buckets) {
            if (instances.size() > 1) {
                std::vector<std::string> witnesses = instances;
                witnesses.push_back(render(tuple));
                sink.push(violation("VIOL-KEY", subject,
                                    std::to_string(instances.size()) +
                                        " instances share the key tuple " + render(tuple),
                                    std::move(witnesses)));
            }
        }
    }
};

} // namespace

std::vector<Diagnostic> checkStatement(const Schema& schema, const KnowledgeGraph& graph,
                                       const Statement& stmt,
                                       const ValidatorOptions& options) {
    std::vector<Diagnostic> diags;
    DiagnosticSink sink(diags, options, render(stmt));
    StatementChecker checker{schema, graph, sink, render(stmt)};
    std::visit(checker, stmt);
    return diags;
}

// ---------------------------------------------------------------------------
// Reports

namespace {

ValidationStats statsFor(const Schema& schema, const KnowledgeGraph& graph) {
    ValidationStats stats;
    stats.statements = schema.shape.size() + schema.constraints.size();
    stats.entityInstances = graph.entityIds.size();
    stats.relationshipInstances = graph.relIds.size();
    stats.attributeFacts = graph.attrFacts.size();
    stats.roleFacts = graph.roleFacts.size();
    return stats;
}

} // namespace

ValidationReport validateCore(const Schema& schema, const KnowledgeGraph& graph,
                              const ValidatorOptions& options) {
    ValidationReport report;
    report.semantics = ValidationReport::Semantics::Core;
    report.stats = statsFor(schema, graph);
    report.diagnostics = checkDataModel(schema, graph);
    for (const auto& s : schema.shape) {
        auto diags = checkStatement(schema, graph, Statement{s}, options);
        report.diagnostics.insert(report.diagnostics.end(), diags.begin(), diags.end());
    }
    for (const auto& c : schema.constraints) {
        auto diags = checkStatement(schema, graph, Statement{c}, options);
        report.diagnostics.insert(report.diagnostics.end(), diags.begin(), diags.end());
    }
    report.conforms = !hasErrors(report.diagnostics);
    return report;
}

std::set<std::pair<std::string, std::string>> implicitDisjointPairs(const Schema& schema) {
    std::set<std::pair<std::string, std::string>> pairs;
    std::map<std::string, std::set<std::string>> ancestors;
    for (const auto& e : schema.entities) ancestors[e] = ancestorsOf(schema, e);
    for (auto first = schema.entities.begin(); first != schema.entities.end(); ++first) {
        for (auto second = std::next(first); second != schema.entities.end(); ++second) {
            const auto& a = ancestors[*first];
            const auto& b = ancestors[*second];
            bool common = std::any_of(a.begin(), a.end(), [&](const std::string& anc) {
                return b.count(anc) > 0;
            });
            if (!common) pairs.insert({*first, *second});
        }
    }
    return pairs;
}

ValidationReport validateImplicitDisjointness(const Schema& schema,
                                              const KnowledgeGraph& graph,
                                              const ValidatorOptions& options) {
    ValidationReport report = validateCore(schema, graph, options);
    report.semantics = ValidationReport::Semantics::ImplicitDisjointness;
    for (const auto& [left, right] : implicitDisjointPairs(schema)) {
        std::string subject = "ImplicitDisjoint(" + left + ", " + right + ")";
        DiagnosticSink sink(report.diagnostics, options, subject);
        for (const auto& inst : graph.instancesOf(schema, left)) {
            if (graph.isEntityInstanceOf(inst, right)) {
                sink.push(violation("VIOL-IMPLICIT-DISJOINT", subject,
                                    inst + " is an instance of both " + left + " and " +
                                        right + ", which have no common Isa-ancestor",
                                    {inst}));
            }
        }
    }
    report.conforms = !hasErrors(report.diagnostics);
    return report;
}

KnowledgeGraph closeIsaMemberships(const Schema& schema, const KnowledgeGraph& graph) {
    KnowledgeGraph closed = graph;
    for (auto& [id, types] : closed.entityMembership) {
        std::set<std::string> expanded;
        for (const auto& t : types) {
            if (!schema.isEntity(t)) {
                expanded.insert(t);
                continue;
            }
            auto ancestors = ancestorsOf(schema, t);
            expanded.insert(ancestors.begin(), ancestors.end());
        }
        types = std::move(expanded);
    }
    return closed;
}

// ---------------------------------------------------------------------------
// Renderings

namespace {

using nlohmann::json;

const char* severityName(Diagnostic::Severity s) {
    return s == Diagnostic::Severity::Error ? "error" : "warning";
}

const char* semanticsName(ValidationReport::Semantics s) {
    return s == ValidationReport::Semantics::Core ? "core" : "implicit-disjointness";
}

} // namespace

std::string ValidationReport::renderText() const {
    std::ostringstream out;
    for (const auto& d : diagnostics) {
        out << severityName(d.severity) << " " << d.code << " [" << d.subject
            << "]: " << d.message;
        if (!d.witnesses.empty()) {
            out << " (witnesses:";
            for (const auto& w : d.witnesses) out << " " << w;
            out << ")";
        }
        out << "\n";
    }
    out << (conforms ? "conforms" : "does not conform") << " (semantics: "
        << semanticsName(semantics) << ", statements: " << stats.statements
        << ", instances: " << stats.entityInstances + stats.relationshipInstances
        << ", diagnostics: " << diagnostics.size() << ")\n";
    return out.str();
}

std::string ValidationReport::renderStructured() const {
    json doc;
    doc["conforms"] = conforms;
    doc["semantics"] = semanticsName(semantics);
    doc["stats"] = {{"statements", stats.statements},
                    {"entityInstances", stats.entityInstances},
                    {"relationshipInstances", stats.relationshipInstances},
                    {"attributeFacts", stats.attributeFacts},
                    {"roleFacts", stats.roleFacts}};
    doc["diagnostics"] = json::array();
    for (const auto& d : diagnostics) {
        doc["diagnostics"].push_back({{"severity", severityName(d.severity)},
                                      {"code", d.code},
                                      {"subject", d.subject},
                                      {"message", d.message},
                                      {"witnesses", d.witnesses}});
    }
    return doc.dump(2) + "\n";
}

std::optional<ValidationReport> ValidationReport::fromStructured(const std::string& text) {
    json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object()) return std::nullopt;
    try {
        ValidationReport report;
        report.conforms = doc.at("conforms").get<bool>();
        report.semantics = doc.at("semantics").get<std::string>() == "core"
                               ? Semantics::Core
                               : Semantics::ImplicitDisjointness;
        const auto& stats = doc.at("stats");
        report.stats.statements = stats.at("statements").get<std::size_t>();
        report.stats.entityInstances = stats.at("entityInstances").get<std::size_t>();
        report.stats.relationshipInstances =
            stats.at("relationshipInstances").get<std::size_t>();
        report.stats.attributeFacts = stats.at("attributeFacts").get<std::size_t>();
        report.stats.roleFacts = stats.at("roleFacts").get<std::size_t>();
        for (const auto& item : doc.at("diagnostics")) {
            Diagnostic d;
            d.severity = item.at("severity").get<std::string>() == "error"
                             ? Diagnostic::Severity::Error
                             : Diagnostic::Severity::Warning;
            d.code = item.at("code").get<std::string>();
            d.subject = item.at("subject").get<std::string>();
            d.message = item.at("message").get<std::string>();
            d.witnesses = item.at("witnesses").get<std::vector<std::string>>();
            report.diagnostics.push_back(std::move(d));
        }
        return report;
    } catch (const json::exception&) {
        return std::nullopt;
    }
}

bool ValidationReport::operator==(const ValidationReport& other) const {
    auto diagKey = [](const Diagnostic& d) {
        return std::make_tuple(d.severity, d.code, d.subject, d.message, d.witnesses);
    };
    if (conforms != other.conforms || semantics != other.semantics ||
        !(stats == other.stats) || diagnostics.size() != other.diagnostics.size()) {
        return false;
    }
    for (std::size_t i = 0; i < diagnostics.size(); ++i) {
        if (diagKey(diagnostics[i]) != diagKey(other.diagnostics[i])) return false;
    }
    return true;
}

} // namespace kger
