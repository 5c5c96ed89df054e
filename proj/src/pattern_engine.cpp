#include "kger/pattern_engine.hpp"

#include <algorithm>

namespace kger {

namespace {

void requireNamesDeclared(const Schema& schema, const Pattern& p) {
    if (p.kind == Pattern::Kind::AttrLeaf) {
        if (schema.attributes.count(p.name) == 0) {
            throw Error("UNKNOWN-NAME", "undeclared attribute: " + p.name);
        }
        return;
    }
    if (schema.roles.count(p.name) == 0) {
        throw Error("UNKNOWN-NAME", "undeclared role: " + p.name);
    }
    for (const auto& child : p.children) requireNamesDeclared(schema, child);
}

// Attribute ownership, inheritance-aware on the entity side.
bool subjectHasAttr(const Schema& schema, const std::string& subject,
                    const std::string& attribute) {
    auto it = schema.ownerOfAttr.find(attribute);
    if (it == schema.ownerOfAttr.end()) return false;
    if (schema.isRelationship(subject)) return it->second == subject;
    return ancestorsOf(schema, subject).count(it->second) > 0;
}

// The relationship an entity participates in through `role`, if any,
// considering inherited participations.
const std::string* subjectParticipation(const Schema& schema, const std::string& entity,
                                        const std::string& role) {
    auto it = schema.ownerOfRole.find(role);
    if (it == schema.ownerOfRole.end()) return nullptr;
    if (ancestorsOf(schema, entity).count(it->second.second) == 0) return nullptr;
    return &it->second.first;
}

bool rootedRec(const Schema& schema, const Pattern& p, const std::string& subject) {
    bool atRelationship = schema.isRelationship(subject);
    switch (p.kind) {
        case Pattern::Kind::AttrLeaf:
            return subjectHasAttr(schema, subject, p.name);
        case Pattern::Kind::RoleLeaf:
        case Pattern::Kind::RoleNode: {
            auto it = schema.ownerOfRole.find(p.name);
            if (it == schema.ownerOfRole.end()) return false;
            const auto& [rel, entity] = it->second;
            std::string next;
            if (atRelationship) {
                if (rel != subject) return false;
                next = entity;
            } else {
                if (subjectParticipation(schema, subject, p.name) == nullptr) return false;
                next = rel;
            }
            return std::all_of(p.children.begin(), p.children.end(), [&](const Pattern& c) {
                return rootedRec(schema, c, next);
            });
        }
    }
    return false;
}

FolFormula translateRec(const Schema& schema, const std::string& subject, const Pattern& p,
                        const std::string& instVar, const std::vector<std::string>& answerVars,
                        std::size_t& answerIndex, const std::string& boundPrefix,
                        std::size_t& boundCounter) {
    bool atRelationship = schema.isRelationship(subject);
    switch (p.kind) {
        case Pattern::Kind::AttrLeaf:
            return FolFormula::binAtom(p.name, instVar, answerVars.at(answerIndex++));
        case Pattern::Kind::RoleLeaf: {
            const std::string& answer = answerVars.at(answerIndex++);
            if (atRelationship) return FolFormula::binAtom(p.name, instVar, answer);
            return FolFormula::binAtom(p.name, answer, instVar);
        }
        case Pattern::Kind::RoleNode: {
            const auto& [rel, entity] = schema.ownerOfRole.at(p.name);
            std::string fresh = boundPrefix + std::to_string(++boundCounter);
            std::vector<FolFormula> parts;
            std::string next;
            if (atRelationship) {
                parts.push_back(FolFormula::binAtom(p.name, instVar, fresh));
                next = entity;
            } else {
                parts.push_back(FolFormula::binAtom(p.name, fresh, instVar));
                next = rel;
            }
            for (const auto& child : p.children) {
                parts.push_back(translateRec(schema, next, child, fresh, answerVars,
                                             answerIndex, boundPrefix, boundCounter));
            }
            return FolFormula::exists({fresh}, FolFormula::conj(std::move(parts)));
        }
    }
    throw Error("NOT-ROOTED", "unreachable pattern kind");
}

std::set<Tuple> product(const std::vector<std::set<Tuple>>& components) {
    std::set<Tuple> out;
    if (components.empty()) {
        out.insert(Tuple{});
        return out;
    }
    std::vector<Tuple> partial{Tuple{}};
    for (const auto& component : components) {
        std::vector<Tuple> next;
        for (const auto& prefix : partial) {
            for (const auto& tuple : component) {
                Tuple combined = prefix;
                combined.insert(combined.end(), tuple.begin(), tuple.end());
                next.push_back(std::move(combined));
            }
        }
        partial = std::move(next);
        if (partial.empty()) break;
    }
    out.insert(partial.begin(), partial.end());
    return out;
}

std::set<Tuple> evalRec(const Schema& schema, const KnowledgeGraph& graph,
                        const std::string& subject, const Pattern& p,
                        const std::string& inst) {
    bool atRelationship = schema.isRelationship(subject);
    std::set<Tuple> out;
    switch (p.kind) {
        case Pattern::Kind::AttrLeaf:
            for (const auto& value : graph.attrValues(inst, p.name)) {
                out.insert(Tuple{value});
            }
            return out;
        case Pattern::Kind::RoleLeaf: {
            if (atRelationship) {
                for (const auto& filler : graph.roleFillers(inst, p.name)) {
                    out.insert(Tuple{NodeId{filler}});
                }
            } else {
                for (const auto& rel : graph.relsWithFiller(p.name, inst)) {
                    out.insert(Tuple{NodeId{rel}});
                }
            }
            return out;
        }
        case Pattern::Kind::RoleNode: {
            const auto& [rel, entity] = schema.ownerOfRole.at(p.name);
            std::vector<std::string> mids;
            std::string next;
            if (atRelationship) {
                mids = graph.roleFillers(inst, p.name);
                next = entity;
            } else {
                mids = graph.relsWithFiller(p.name, inst);
                next = rel;
            }
            for (const auto& mid : mids) {
                std::vector<std::set<Tuple>> components;
                components.reserve(p.children.size());
                for (const auto& child : p.children) {
                    components.push_back(evalRec(schema, graph, next, child, mid));
                }
                auto tuples = product(components);
                out.insert(tuples.begin(), tuples.end());
            }
            return out;
        }
    }
    return out;
}

void requireInstance(const Schema& schema, const KnowledgeGraph& graph,
                     const std::string& subject, const std::string& inst) {
    bool ok = schema.isEntity(subject) ? graph.isEntityInstanceOf(inst, subject)
                                       : graph.isRelInstanceOf(inst, subject);
    if (!ok) {
        throw Error("NOT-AN-INSTANCE", inst + " is not an instance of " + subject);
    }
}

} // namespace

bool isRootedAt(const Schema& schema, const Pattern& p, const std::string& subject) {
    if (!schema.isDeclared(subject)) {
        throw Error("UNKNOWN-NAME", "undeclared entity or relationship: " + subject);
    }
    requireNamesDeclared(schema, p);
    return rootedRec(schema, p, subject);
}

FolFormula translatePattern(const Schema& schema, const std::string& subject,
                            const Pattern& p) {
    if (!isRootedAt(schema, p, subject)) {
        throw Error("NOT-ROOTED", p.render() + " is not rooted at " + subject);
    }
    std::size_t arity = patternArity(p);
    std::vector<std::string> answerVars;
    answerVars.reserve(arity);
    for (std::size_t i = 1; i <= arity; ++i) answerVars.push_back("y" + std::to_string(i));
    std::size_t answerIndex = 0;
    std::size_t boundCounter = 0;
    return translateRec(schema, subject, p, "x", answerVars, answerIndex, "z", boundCounter);
}

FolFormula translatePatternWith(const Schema& schema, const std::string& subject,
                                const Pattern& p, const std::string& instVar,
                                const std::vector<std::string>& answerVars,
                                std::size_t& answerIndex, const std::string& boundPrefix,
                                std::size_t& boundCounter) {
    if (!isRootedAt(schema, p, subject)) {
        throw Error("NOT-ROOTED", p.render() + " is not rooted at " + subject);
    }
    return translateRec(schema, subject, p, instVar, answerVars, answerIndex, boundPrefix,
                        boundCounter);
}

std::set<Tuple> evalPattern(const Schema& schema, const KnowledgeGraph& graph,
                            const std::string& subject, const Pattern& p,
                            const std::string& inst) {
    if (!isRootedAt(schema, p, subject)) {
        throw Error("NOT-ROOTED", p.render() + " is not rooted at " + subject);
    }
    requireInstance(schema, graph, subject, inst);
    return evalRec(schema, graph, subject, p, inst);
}

std::set<Tuple> witnessTuples(const Schema& schema, const KnowledgeGraph& graph,
                              const std::string& subject,
                              const std::vector<Pattern>& patterns,
                              const std::string& inst) {
    std::vector<std::set<Tuple>> components;
    components.reserve(patterns.size());
    for (const auto& p : patterns) {
        components.push_back(evalPattern(schema, graph, subject, p, inst));
    }
    return product(components);
}

} // namespace kger
