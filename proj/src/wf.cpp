#include "kger/wf.hpp"

#include "kger/pattern_engine.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace kger {

namespace {

Diagnostic wfError(std::string code, const std::string& subject, std::string message,
                   std::vector<std::string> witnesses = {}) {
    Diagnostic d;
    d.severity = Diagnostic::Severity::Error;
    d.code = std::move(code);
    d.subject = subject;
    d.message = std::move(message);
    d.witnesses = std::move(witnesses);
    return d;
}

// Undeclared names inside patterns, reported instead of thrown.
void collectUnknownPatternNames(const Schema& schema, const Pattern& p,
                                std::vector<std::string>& out) {
    if (p.kind == Pattern::Kind::RoleNode || p.kind == Pattern::Kind::RoleLeaf) {
        if (schema.roles.count(p.name) == 0 && schema.attributes.count(p.name) == 0) {
            out.push_back(p.name);
        }
    } else if (schema.attributes.count(p.name) == 0 && schema.roles.count(p.name) == 0) {
        out.push_back(p.name);
    }
    for (const auto& child : p.children) collectUnknownPatternNames(schema, child, out);
}

bool isaAcyclic(const Schema& schema, std::vector<std::string>& cycle) {
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& [sub, super] : schema.isaEdges()) out[sub].push_back(super);

    std::map<std::string, int> state; // 0 unvisited, 1 on stack, 2 done
    std::vector<std::string> stack;
    std::function<bool(const std::string&)> visit = [&](const std::string& node) -> bool {
        state[node] = 1;
        stack.push_back(node);
        for (const auto& next : out[node]) {
            if (state[next] == 1) {
                auto it = std::find(stack.begin(), stack.end(), next);
                cycle.assign(it, stack.end());
                return false;
            }
            if (state[next] == 0 && !visit(next)) return false;
        }
        stack.pop_back();
        state[node] = 2;
        return true;
    };
    for (const auto& [sub, unused] : out) {
        (void)unused;
        if (state[sub] == 0 && !visit(sub)) return false;
    }
    return true;
}

} // namespace

std::vector<Diagnostic> checkWellFormed(const Schema& schema) {
    std::vector<Diagnostic> diags;

    // WF1: shape declarations reference declared entities/relationships.
    for (const auto& s : schema.shape) {
        if (const auto* a = std::get_if<AttributeDecl>(&s)) {
            if (!schema.isDeclared(a->owner)) {
                diags.push_back(wfError("WF1", render(s),
                                        "attribute declared on undeclared entity or "
                                        "relationship " + a->owner,
                                        {a->owner}));
            }
        } else if (const auto* r = std::get_if<RoleDecl>(&s)) {
            if (!schema.isRelationship(r->relationship)) {
                diags.push_back(wfError("WF1", render(s),
                                        "role declared on undeclared relationship " +
                                            r->relationship,
                                        {r->relationship}));
            }
            if (!schema.isEntity(r->entity)) {
                diags.push_back(wfError("WF1", render(s),
                                        "role declared with undeclared entity " + r->entity,
                                        {r->entity}));
            }
        }
    }

    // WF2: participation constraints reference declared Attribute/Role
    // statements.
    for (const auto& c : schema.constraints) {
        const std::string* owner = nullptr;
        const std::string* attribute = nullptr;
        const std::string* entity = nullptr;
        const std::string* role = nullptr;
        const std::string* relationship = nullptr;
        if (const auto* m = std::get_if<MandatoryAttr>(&c)) {
            owner = &m->owner;
            attribute = &m->attribute;
        } else if (const auto* s = std::get_if<SingleAttr>(&c)) {
            owner = &s->owner;
            attribute = &s->attribute;
        } else if (const auto* m = std::get_if<MandatoryRole>(&c)) {
            entity = &m->entity;
            role = &m->role;
            relationship = &m->relationship;
        } else if (const auto* s = std::get_if<SingleRole>(&c)) {
            entity = &s->entity;
            role = &s->role;
            relationship = &s->relationship;
        } else {
            continue;
        }
        if (attribute != nullptr) {
            auto it = schema.ownerOfAttr.find(*attribute);
            if (it == schema.ownerOfAttr.end() || it->second != *owner) {
                diags.push_back(wfError("WF2", render(c),
                                        "no Attribute(" + *owner + ", " + *attribute +
                                            ") declaration in the shape graph"));
            }
        } else {
            auto it = schema.ownerOfRole.find(*role);
            if (it == schema.ownerOfRole.end() ||
                it->second != std::make_pair(*relationship, *entity)) {
                diags.push_back(wfError("WF2", render(c),
                                        "no Role(" + *relationship + ", " + *role + ", " +
                                            *entity + ") declaration in the shape graph"));
            }
        }
    }

    // Name references of hierarchy and key statements.
    auto checkEntityRef = [&](const ConstraintStatement& c, const std::string& name) {
        if (!schema.isEntity(name)) {
            diags.push_back(
                wfError("UNKNOWN-NAME", render(c), "undeclared entity " + name, {name}));
            return false;
        }
        return true;
    };
    std::map<std::string, bool> keySubjectKnown;
    for (const auto& c : schema.constraints) {
        if (const auto* isa = std::get_if<IsaConstraint>(&c)) {
            checkEntityRef(c, isa->sub);
            checkEntityRef(c, isa->super);
        } else if (const auto* dis = std::get_if<DisjointConstraint>(&c)) {
            checkEntityRef(c, dis->left);
            checkEntityRef(c, dis->right);
        } else if (const auto* cover = std::get_if<CoverConstraint>(&c)) {
            checkEntityRef(c, cover->covered);
            for (const auto& member : cover->members) checkEntityRef(c, member);
        } else if (const auto* key = std::get_if<KeyConstraint>(&c)) {
            keySubjectKnown[render(c)] = schema.isDeclared(key->subject);
            if (!keySubjectKnown[render(c)]) {
                diags.push_back(wfError("UNKNOWN-NAME", render(c),
                                        "undeclared entity or relationship " + key->subject,
                                        {key->subject}));
            }
        } else if (const auto* id = std::get_if<IdentityConstraint>(&c)) {
            keySubjectKnown[render(c)] = schema.isDeclared(id->subject);
            if (!keySubjectKnown[render(c)]) {
                diags.push_back(wfError("UNKNOWN-NAME", render(c),
                                        "undeclared entity or relationship " + id->subject,
                                        {id->subject}));
            }
        }
    }

    // WF3: Identity keys use ground patterns only.
    for (const auto& c : schema.constraints) {
        if (const auto* id = std::get_if<IdentityConstraint>(&c)) {
            for (const auto& p : id->patterns) {
                if (!isGround(p)) {
                    diags.push_back(wfError("WF3", render(c),
                                            "identity pattern " + p.render() +
                                                " is not ground"));
                }
            }
        }
    }

    // WF4: every relationship has an identifying key.
    for (const auto& rel : schema.relationships) {
        if (schema.identityOf(rel) == nullptr) {
            diags.push_back(wfError("WF4", "Relationship(" + rel + ")",
                                    "relationship " + rel + " has no identifying key",
                                    {rel}));
        }
    }

    // WF5: the Isa hierarchy is acyclic.
    std::vector<std::string> cycle;
    bool acyclic = isaAcyclic(schema, cycle);
    if (!acyclic) {
        std::string msg = "Isa cycle:";
        for (const auto& e : cycle) msg += " " + e;
        diags.push_back(wfError("WF5", cycle.empty() ? "Isa" : "Isa(" + cycle.front() + ", ...)",
                                msg, cycle));
    }

    // WF6: every root of the hierarchy has a directly declared identifying
    // key. Roots are meaningless while WF5 fails.
    if (acyclic) {
        for (const auto& root : rootsOf(schema)) {
            if (schema.identityOf(root) == nullptr) {
                diags.push_back(wfError("WF6", "Entity(" + root + ")",
                                        "root entity " + root + " has no identifying key",
                                        {root}));
            }
        }
    }

    // WF7: explicit disjointness only between entities with a common
    // Isa-ancestor.
    for (const auto& c : schema.constraints) {
        const auto* dis = std::get_if<DisjointConstraint>(&c);
        if (dis == nullptr || !schema.isEntity(dis->left) || !schema.isEntity(dis->right)) {
            continue;
        }
        auto left = ancestorsOf(schema, dis->left);
        auto right = ancestorsOf(schema, dis->right);
        bool common = std::any_of(left.begin(), left.end(), [&](const std::string& a) {
            return right.count(a) > 0;
        });
        if (!common) {
            diags.push_back(wfError("WF7", render(c),
                                    dis->left + " and " + dis->right +
                                        " have no common Isa-ancestor"));
        }
    }

    // WF8: Cover members are Isa-descendants of the covered entity.
    for (const auto& c : schema.constraints) {
        const auto* cover = std::get_if<CoverConstraint>(&c);
        if (cover == nullptr || !schema.isEntity(cover->covered)) continue;
        for (const auto& member : cover->members) {
            if (!schema.isEntity(member)) continue;
            if (ancestorsOf(schema, member).count(cover->covered) == 0) {
                diags.push_back(wfError("WF8", render(c),
                                        member + " is not an Isa-descendant of " +
                                            cover->covered,
                                        {member}));
            }
        }
    }

    // WF9: key patterns are rooted at their subject.
    for (const auto& c : schema.constraints) {
        const std::string* subject = nullptr;
        const std::vector<Pattern>* patterns = nullptr;
        if (const auto* key = std::get_if<KeyConstraint>(&c)) {
            subject = &key->subject;
            patterns = &key->patterns;
        } else if (const auto* id = std::get_if<IdentityConstraint>(&c)) {
            subject = &id->subject;
            patterns = &id->patterns;
        } else {
            continue;
        }
        if (!keySubjectKnown[render(c)]) continue;
        for (const auto& p : *patterns) {
            std::vector<std::string> unknown;
            collectUnknownPatternNames(schema, p, unknown);
            if (!unknown.empty()) {
                for (const auto& name : unknown) {
                    diags.push_back(wfError("UNKNOWN-NAME", render(c),
                                            "undeclared name " + name + " in pattern " +
                                                p.render(),
                                            {name}));
                }
                continue;
            }
            if (!isRootedAt(schema, p, *subject)) {
                diags.push_back(wfError("WF9", render(c),
                                        "pattern " + p.render() + " is not rooted at " +
                                            *subject));
            }
        }
    }

    return diags;
}

} // namespace kger
