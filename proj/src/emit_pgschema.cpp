#include "kger/emitters.hpp"

#include "emit_common.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>

namespace kger {

namespace {

using emit::Analysis;
using emit::WeakLink;

class PgSchemaEmitter {
public:
    explicit PgSchemaEmitter(const Schema& schema)
        : schema_(schema), analysis_(emit::analyze(schema)) {}

    EmitterOutput run() {
        emit::reportHierarchyUnexpressed(schema_, output_, "PG-Schema");
        assignVariables();

        std::vector<std::string> nodeTypes = renderNodeTypes();
        std::vector<std::string> edgeTypes = renderEdgeTypes();
        std::vector<std::string> nodeIdentifiers = renderNodeIdentifiers();
        std::vector<std::string> edgeIdentifiers = renderEdgeIdentifiers();
        std::vector<std::string> otherConstraints = renderConstraintClauses();

        std::vector<std::string> allClauses;
        auto appendSection = [&](const char* comment, std::vector<std::string>& clauses) {
            if (clauses.empty()) return;
            allClauses.push_back(std::string("  // ") + comment);
            for (auto& clause : clauses) allClauses.push_back("  " + clause);
        };
        appendSection("Node types", nodeTypes);
        appendSection("Edge types", edgeTypes);
        appendSection("Node identifiers", nodeIdentifiers);
        appendSection("Edge identifiers", edgeIdentifiers);
        appendSection("Key and participation constraints", otherConstraints);

        std::ostringstream out;
        out << "CREATE GRAPH TYPE schemaGraphType STRICT {\n";
        // Comma-terminate every clause line except the last.
        std::vector<std::size_t> clauseIndexes;
        for (std::size_t i = 0; i < allClauses.size(); ++i) {
            if (allClauses[i].find("// ") == std::string::npos) clauseIndexes.push_back(i);
        }
        for (std::size_t i = 0; i < allClauses.size(); ++i) {
            out << allClauses[i];
            bool isClause = allClauses[i].find("// ") == std::string::npos;
            if (isClause && (clauseIndexes.empty() || i != clauseIndexes.back())) out << ",";
            out << "\n";
        }
        out << "}\n";
        for (const auto& d : output_.unexpressed) {
            out << "// UNEXPRESSED: " << d.subject << ": " << d.message << "\n";
        }
        output_.artifact = out.str();
        return std::move(output_);
    }

private:
    std::string nodeTypeName(const std::string& name) const {
        return emit::lowercaseFirst(name) + "Type";
    }

    void assignVariables() {
        std::map<std::string, int> used;
        for (const auto& entity : schema_.entities) {
            std::string base(1, static_cast<char>(
                                    std::tolower(static_cast<unsigned char>(entity[0]))));
            int n = ++used[base];
            varOf_[entity] = n == 1 ? base : base + std::to_string(n);
        }
        for (const auto& rel : schema_.relationships) {
            std::string base(1,
                             static_cast<char>(std::tolower(static_cast<unsigned char>(rel[0]))));
            int n = ++used[base];
            relVarOf_[rel] = n == 1 ? base : base + std::to_string(n);
        }
    }

    std::string propertyList(const std::string& owner) const {
        std::vector<std::string> props;
        for (const auto& attr : emit::singleValuedAttrs(schema_, owner)) {
            bool optional = !emit::attrMinOne(schema_, owner, attr);
            props.push_back((optional ? "OPTIONAL " : "") + attr + " STRING");
        }
        if (props.empty()) return "";
        std::string out = " {";
        for (std::size_t i = 0; i < props.size(); ++i) {
            if (i > 0) out += ", ";
            out += props[i];
        }
        return out + "}";
    }

    std::vector<std::string> renderNodeTypes() {
        std::vector<std::string> out;
        for (const auto& entity : schema_.entities) {
            out.push_back("(" + nodeTypeName(entity) + ": " + entity +
                          propertyList(entity) + ")");
        }
        // Auxiliary node types for set-valued attributes.
        for (const auto& [attr, owner] : schema_.ownerOfAttr) {
            if (emit::isSingleValued(schema_, owner, attr)) continue;
            out.push_back("(" + attr + "Type: " + emit::capitalize(attr) + " {" + attr +
                          " STRING})");
            auxVarOf_[attr] = std::string(1, attr[0]);
        }
        // Relationships with three or more roles become node types.
        for (const auto& rel : schema_.relationships) {
            if (schema_.rolesOf.at(rel).size() == 2) continue;
            out.push_back("(" + nodeTypeName(rel) + ": " + rel + propertyList(rel) + ")");
            naryRels_.insert(rel);
        }
        return out;
    }

    std::vector<std::string> renderEdgeTypes() {
        std::vector<std::string> out;
        for (const auto& rel : schema_.relationships) {
            if (naryRels_.count(rel) > 0) {
                for (const auto& role : schema_.rolesOf.at(rel)) {
                    out.push_back("(:" + nodeTypeName(rel) + ")-[:" + role + "]->(:" +
                                  nodeTypeName(schema_.ownerOfRole.at(role).second) + ")");
                }
                continue;
            }
            auto roles = emit::subjectObjectRoles(schema_, analysis_, rel);
            const auto& [subjectRole, objectRole] = *roles;
            out.push_back("(:" + nodeTypeName(schema_.ownerOfRole.at(subjectRole).second) +
                          ")-[:" + rel + propertyList(rel) + "]->(:" +
                          nodeTypeName(schema_.ownerOfRole.at(objectRole).second) + ")");
        }
        for (const auto& [attr, owner] : schema_.ownerOfAttr) {
            if (emit::isSingleValued(schema_, owner, attr)) continue;
            std::string ownerType =
                schema_.isEntity(owner) ? nodeTypeName(owner) : nodeTypeName(owner);
            out.push_back("(:" + ownerType + ")-[:has" + emit::capitalize(attr) + "]->(:" +
                          attr + "Type)");
        }
        return out;
    }

    // Renders one identity component as qualified property references, or
    // nullopt when it navigates beyond depth 1.
    std::optional<std::string> identityComponents(const Pattern& p,
                                                  const std::string& selfVar) const {
        if (p.kind == Pattern::Kind::AttrLeaf) return selfVar + "." + p.name;
        if (p.kind != Pattern::Kind::RoleNode) return std::nullopt;
        auto owner = schema_.ownerOfRole.find(p.name);
        if (owner == schema_.ownerOfRole.end()) return std::nullopt;
        std::string fillerVar = varOf_.at(owner->second.second);
        std::string out;
        for (const auto& child : p.children) {
            if (child.kind != Pattern::Kind::AttrLeaf) return std::nullopt;
            if (!out.empty()) out += ", ";
            out += fillerVar + "." + child.name;
        }
        return out;
    }

    std::vector<std::string> renderNodeIdentifiers() {
        std::vector<std::string> out;
        for (const auto& c : schema_.constraints) {
            const auto* id = std::get_if<IdentityConstraint>(&c);
            if (id == nullptr || !schema_.isEntity(id->subject)) continue;
            const std::string& entity = id->subject;
            const IdentityConstraint* first = schema_.identityOf(entity);
            if (first != nullptr && !(first->patterns == id->patterns)) {
                output_.unexpressed.push_back(emit::unexpressed(
                    c, "only one identifier per node type is emitted"));
                continue;
            }
            const std::string& var = varOf_.at(entity);
            auto weak = analysis_.weakOf.find(entity);
            if (emit::hasFlatAttrIdentity(schema_, entity)) {
                std::string components;
                for (const auto& p : id->patterns) {
                    if (!components.empty()) components += ", ";
                    components += var + "." + p.name;
                }
                out.push_back("FOR (" + var + ":" + nodeTypeName(entity) + ") IDENTIFIER " +
                              components);
                output_.expressed.push_back(render(ConstraintStatement{*id}));
                continue;
            }
            if (weak != analysis_.weakOf.end()) {
                const WeakLink& link = weak->second;
                std::string parentVar = varOf_.at(link.parent);
                if (parentVar == var) parentVar += "0"; // self-referential weak entity
                std::string components;
                for (const auto& p : id->patterns) {
                    std::string part;
                    if (p.kind == Pattern::Kind::RoleNode) {
                        for (const auto& leaf : link.parentLeaves) {
                            if (!part.empty()) part += ", ";
                            part += parentVar + "." + leaf;
                        }
                    } else {
                        part = var + "." + p.name;
                    }
                    if (!components.empty()) components += ", ";
                    components += part;
                }
                auto roles = emit::subjectObjectRoles(schema_, analysis_, link.relationship);
                std::string path = "(" + parentVar + ")-[:" + link.relationship + "]->(" +
                                   var + ")";
                if (roles.has_value() && roles->first == link.viaRole) {
                    path = "(" + var + ")-[:" + link.relationship + "]->(" + parentVar + ")";
                }
                out.push_back("FOR (" + var + ":" + nodeTypeName(entity) + ") IDENTIFIER " +
                              components + " WITHIN " + path);
                output_.expressed.push_back(render(ConstraintStatement{*id}));
                continue;
            }
            output_.unexpressed.push_back(
                emit::unexpressed(ConstraintStatement{*id},
                                  "identity navigates beyond a single edge"));
        }
        return out;
    }

    std::vector<std::string> renderEdgeIdentifiers() {
        std::vector<std::string> out;
        for (const auto& c : schema_.constraints) {
            const auto* id = std::get_if<IdentityConstraint>(&c);
            if (id == nullptr || !schema_.isRelationship(id->subject)) continue;
            const std::string& rel = id->subject;
            const IdentityConstraint* first = schema_.identityOf(rel);
            if (first != nullptr && !(first->patterns == id->patterns)) {
                output_.unexpressed.push_back(emit::unexpressed(
                    c, "only one identifier per edge type is emitted"));
                continue;
            }
            if (naryRels_.count(rel) > 0) {
                output_.unexpressed.push_back(emit::unexpressed(
                    ConstraintStatement{*id},
                    "identifiers of non-binary relationships are not covered"));
                continue;
            }
            auto roles = emit::subjectObjectRoles(schema_, analysis_, rel);
            const auto& [subjectRole, objectRole] = *roles;
            std::string subjectEntity = schema_.ownerOfRole.at(subjectRole).second;
            std::string objectEntity = schema_.ownerOfRole.at(objectRole).second;
            std::string subjectVar = varOf_.at(subjectEntity);
            std::string objectVar = varOf_.at(objectEntity);
            if (subjectEntity == objectEntity) {
                subjectVar += "1";
                objectVar += "2";
            }
            const std::string& edgeVar = relVarOf_.at(rel);

            std::string components;
            bool expressible = true;
            for (const auto& p : id->patterns) {
                std::optional<std::string> part;
                if (p.kind == Pattern::Kind::AttrLeaf) {
                    part = edgeVar + "." + p.name;
                } else if (p.kind == Pattern::Kind::RoleNode) {
                    std::string fillerVar =
                        p.name == subjectRole ? subjectVar : objectVar;
                    part.emplace();
                    for (const auto& child : p.children) {
                        if (child.kind != Pattern::Kind::AttrLeaf) {
                            part = std::nullopt;
                            break;
                        }
                        if (!part->empty()) *part += ", ";
                        *part += fillerVar + "." + child.name;
                    }
                } else {
                    part = std::nullopt;
                }
                if (!part.has_value()) {
                    expressible = false;
                    break;
                }
                if (!components.empty()) components += ", ";
                components += *part;
            }
            if (!expressible) {
                output_.unexpressed.push_back(emit::unexpressed(
                    ConstraintStatement{*id}, "identity navigates beyond the edge endpoints"));
                continue;
            }
            out.push_back("FOR ()-[" + edgeVar + ":" + rel + "]->() IDENTIFIER " +
                          components + " WITHIN (" + subjectVar + ")-[" + edgeVar + ":" +
                          rel + "]->(" + objectVar + ")");
            output_.expressed.push_back(render(ConstraintStatement{*id}));
        }
        return out;
    }

    std::vector<std::string> renderConstraintClauses() {
        std::vector<std::string> out;
        // Mandatory/Single on roles: merged per (entity, role, relationship).
        struct RoleBound {
            bool mandatory = false;
            bool single = false;
            std::vector<const ConstraintStatement*> sources;
        };
        std::map<std::tuple<std::string, std::string, std::string>, RoleBound> bounds;
        for (const auto& c : schema_.constraints) {
            if (const auto* m = std::get_if<MandatoryRole>(&c)) {
                auto& b = bounds[{m->entity, m->role, m->relationship}];
                b.mandatory = true;
                b.sources.push_back(&c);
            } else if (const auto* s = std::get_if<SingleRole>(&c)) {
                auto& b = bounds[{s->entity, s->role, s->relationship}];
                b.single = true;
                b.sources.push_back(&c);
            }
        }
        for (const auto& [key, bound] : bounds) {
            const auto& [entity, role, rel] = key;
            if (naryRels_.count(rel) > 0) {
                for (const auto* c : bound.sources) {
                    output_.unexpressed.push_back(emit::unexpressed(
                        *c, "participation of non-binary relationships is not covered"));
                }
                continue;
            }
            auto roles = emit::subjectObjectRoles(schema_, analysis_, rel);
            const auto& [subjectRole, objectRole] = *roles;
            std::string subjectEntity = schema_.ownerOfRole.at(subjectRole).second;
            std::string objectEntity = schema_.ownerOfRole.at(objectRole).second;
            std::string subjectVar = varOf_.at(subjectEntity);
            std::string objectVar = varOf_.at(objectEntity);
            if (subjectEntity == objectEntity) {
                subjectVar += "1";
                objectVar += "2";
            }
            const std::string& edgeVar = relVarOf_.at(rel);
            std::string keyword = bound.mandatory && bound.single ? "MANDATORY SINGLETON"
                                  : bound.mandatory              ? "MANDATORY"
                                                                  : "SINGLETON";
            std::string entityVar = role == subjectRole ? subjectVar : objectVar;
            std::string path = role == subjectRole
                                   ? "(" + entityVar + ")-[" + edgeVar + ":" + rel + "]->()"
                                   : "()-[" + edgeVar + ":" + rel + "]->(" + entityVar + ")";
            out.push_back("FOR (" + entityVar + ":" + nodeTypeName(entity) + ") " + keyword +
                          " " + edgeVar + " WITHIN " + path);
            for (const auto* c : bound.sources) output_.expressed.push_back(render(*c));
        }

        // Mandatory set-valued attributes: at least one auxiliary edge.
        for (const auto& c : schema_.constraints) {
            if (const auto* m = std::get_if<MandatoryAttr>(&c)) {
                if (emit::isSingleValued(schema_, m->owner, m->attribute)) {
                    output_.expressed.push_back(render(c)); // non-OPTIONAL property
                    continue;
                }
                if (!schema_.isEntity(m->owner)) {
                    output_.unexpressed.push_back(emit::unexpressed(
                        c, "set-valued attributes of relationships are not covered"));
                    continue;
                }
                std::string var = varOf_.at(m->owner);
                std::string aux = auxVarOf_.at(m->attribute);
                if (aux == var) aux += "0";
                out.push_back("FOR (" + var + ":" + nodeTypeName(m->owner) + ") MANDATORY " +
                              aux + " WITHIN (" + var + ")-[:has" +
                              emit::capitalize(m->attribute) + "]->(" + aux + ")");
                output_.expressed.push_back(render(c));
            } else if (std::holds_alternative<SingleAttr>(c)) {
                output_.expressed.push_back(render(c)); // properties are single-valued
            }
        }

        // Keys: single set-valued attribute -> EXCLUSIVE over the auxiliary
        // edge; single scalar attribute -> EXCLUSIVE on the property.
        for (const auto& c : schema_.constraints) {
            const auto* key = std::get_if<KeyConstraint>(&c);
            if (key == nullptr) continue;
            if (key->patterns.size() == 1 &&
                key->patterns.front().kind == Pattern::Kind::AttrLeaf) {
                const std::string& attr = key->patterns.front().name;
                const std::string& owner = schema_.ownerOfAttr.at(attr);
                if (!schema_.isEntity(owner)) {
                    output_.unexpressed.push_back(emit::unexpressed(
                        c, "keys on relationship attributes are not covered"));
                    continue;
                }
                std::string var = varOf_.at(owner);
                if (emit::isSingleValued(schema_, owner, attr)) {
                    out.push_back("FOR (" + var + ":" + nodeTypeName(owner) +
                                  ") EXCLUSIVE " + var + "." + attr);
                } else {
                    std::string aux = auxVarOf_.at(attr);
                    if (aux == var) aux += "0";
                    out.push_back("FOR (" + var + ":" + nodeTypeName(owner) +
                                  ") EXCLUSIVE " + aux + " WITHIN (" + var + ")-[:has" +
                                  emit::capitalize(attr) + "]->(" + aux + ")");
                }
                output_.expressed.push_back(render(c));
                continue;
            }
            output_.unexpressed.push_back(
                emit::unexpressed(c, "only single-attribute keys map to EXCLUSIVE"));
        }
        return out;
    }

    const Schema& schema_;
    Analysis analysis_;
    EmitterOutput output_;
    std::map<std::string, std::string> varOf_;    // entity -> variable
    std::map<std::string, std::string> relVarOf_; // relationship -> variable
    std::map<std::string, std::string> auxVarOf_; // set-valued attr -> variable
    std::set<std::string> naryRels_;
};

} // namespace

EmitterOutput emitPgSchema(const Schema& schema) { return PgSchemaEmitter(schema).run(); }

} // namespace kger
