#include "kger/emitters.hpp"

#include "emit_common.hpp"

#include <algorithm>
#include <sstream>

namespace kger {

namespace {

using emit::Analysis;

struct ShaclProperty {
    std::string path;
    std::string datatype; // xsd:... or empty
    std::string nodeRef;  // ex:...Shape or empty
    std::string classRef; // ex:Entity or empty
    int minCount = -1;    // -1 = omit
    int maxCount = -1;
};

void renderProperty(std::ostringstream& out, const ShaclProperty& p, bool last) {
    out << "    sh:property [\n";
    out << "        sh:path " << p.path << " ;\n";
    if (!p.datatype.empty()) out << "        sh:datatype " << p.datatype << " ;\n";
    if (!p.nodeRef.empty()) out << "        sh:node " << p.nodeRef << " ;\n";
    if (!p.classRef.empty()) out << "        sh:class " << p.classRef << " ;\n";
    if (p.minCount >= 0) out << "        sh:minCount " << p.minCount << " ;\n";
    if (p.maxCount >= 0) out << "        sh:maxCount " << p.maxCount << " ;\n";
    out << "    ]" << (last ? " ." : " ;") << "\n";
}

class ShaclEmitter {
public:
    explicit ShaclEmitter(const Schema& schema)
        : schema_(schema), analysis_(emit::analyze(schema)) {}

    EmitterOutput run() {
        emit::reportHierarchyUnexpressed(schema_, output_, "SHACL core");

        std::ostringstream out;
        out << "@prefix sh: <http://www.w3.org/ns/shacl#> .\n";
        out << "@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n";
        out << "@prefix ex: <http://example.org/> .\n";

        for (const auto& entity : schema_.entities) {
            emitEntityShape(out, entity);
            emitKeyTargetShapes(out, entity);
        }
        for (const auto& rel : schema_.relationships) {
            if (isFlattened(rel)) continue;
            emitRelationshipShape(out, rel);
            emitKeyTargetShapes(out, rel);
        }

        applyConstraintAccounting();
        for (const auto& d : output_.unexpressed) {
            out << "\n# UNEXPRESSED: " << d.subject << ": " << d.message;
        }
        if (!output_.unexpressed.empty()) out << "\n";
        output_.artifact = out.str();
        return std::move(output_);
    }

private:
    // An identifying relationship of a weak entity collapses to a direct
    // property when it carries no attributes of its own.
    bool isFlattened(const std::string& rel) const {
        auto absorbed = analysis_.absorbedRel.find(rel);
        if (absorbed == analysis_.absorbedRel.end()) return false;
        auto attrs = schema_.attrsOf.find(rel);
        return attrs == schema_.attrsOf.end() || attrs->second.empty();
    }

    ShaclProperty attrProperty(const std::string& owner, const std::string& attr) const {
        ShaclProperty p;
        p.path = "ex:" + attr;
        p.datatype = "xsd:string";
        if (emit::attrMinOne(schema_, owner, attr)) p.minCount = 1;
        if (emit::attrMaxOne(schema_, owner, attr)) p.maxCount = 1;
        if (p.minCount < 0 && p.maxCount < 0) p.minCount = 0; // explicit optionality
        return p;
    }

    void emitEntityShape(std::ostringstream& out, const std::string& entity) const {
        std::vector<ShaclProperty> properties;
        auto attrs = schema_.attrsOf.find(entity);
        if (attrs != schema_.attrsOf.end()) {
            for (const auto& attr : attrs->second) {
                properties.push_back(attrProperty(entity, attr));
            }
        }

        // Relationships this entity reaches as the subject side.
        for (const auto& rel : schema_.relationships) {
            auto roles = emit::subjectObjectRoles(schema_, analysis_, rel);
            if (!roles.has_value()) continue;
            const auto& [subjectRole, objectRole] = *roles;
            if (schema_.ownerOfRole.at(subjectRole).second != entity) continue;
            ShaclProperty p;
            p.path = "ex:" + rel;
            if (isFlattened(rel)) {
                p.nodeRef = "ex:" + schema_.ownerOfRole.at(objectRole).second + "Shape";
            } else {
                p.nodeRef = "ex:" + emit::capitalize(rel) + "RelShape";
            }
            bool mandatory = schema_.hasMandatoryRole(entity, subjectRole, rel);
            bool single = schema_.hasSingleRole(entity, subjectRole, rel);
            p.minCount = mandatory ? 1 : 0;
            if (single) p.maxCount = 1;
            properties.push_back(p);
        }

        // The inverse side of a flattened identifying relationship.
        auto weak = analysis_.weakOf.find(entity);
        if (weak != analysis_.weakOf.end() && isFlattened(weak->second.relationship)) {
            ShaclProperty p;
            p.path = "ex:" + weak->second.parentRole;
            p.classRef = "ex:" + weak->second.parent;
            p.minCount = 1;
            p.maxCount = 1;
            properties.push_back(p);
        }

        out << "\nex:" << entity << "Shape\n";
        out << "    a sh:NodeShape ;\n";
        out << "    sh:targetClass ex:" << entity;
        if (properties.empty()) {
            out << " .\n";
            return;
        }
        out << " ;\n";
        for (std::size_t i = 0; i < properties.size(); ++i) {
            renderProperty(out, properties[i], i + 1 == properties.size());
        }
    }

    void emitRelationshipShape(std::ostringstream& out, const std::string& rel) const {
        std::vector<ShaclProperty> properties;
        auto attrs = schema_.attrsOf.find(rel);
        if (attrs != schema_.attrsOf.end()) {
            for (const auto& attr : attrs->second) {
                properties.push_back(attrProperty(rel, attr));
            }
        }
        auto roles = emit::subjectObjectRoles(schema_, analysis_, rel);
        std::vector<std::string> objectRoles;
        if (roles.has_value()) {
            objectRoles.push_back(roles->second);
        } else {
            // n-ary: every role becomes an outgoing property.
            for (const auto& role : schema_.rolesOf.at(rel)) objectRoles.push_back(role);
        }
        for (const auto& role : objectRoles) {
            ShaclProperty p;
            p.path = "ex:" + role;
            p.classRef = "ex:" + schema_.ownerOfRole.at(role).second;
            if (roleNavigatedInIdentity(rel, role)) p.minCount = 1;
            p.maxCount = 1; // roles are partial functions
            properties.push_back(p);
        }

        out << "\nex:" << emit::capitalize(rel) << "RelShape\n";
        out << "    a sh:NodeShape";
        if (properties.empty()) {
            out << " .\n";
            return;
        }
        out << " ;\n";
        for (std::size_t i = 0; i < properties.size(); ++i) {
            renderProperty(out, properties[i], i + 1 == properties.size());
        }
    }

    bool roleNavigatedInIdentity(const std::string& rel, const std::string& role) const {
        const IdentityConstraint* id = schema_.identityOf(rel);
        if (id == nullptr) return false;
        return std::any_of(id->patterns.begin(), id->patterns.end(), [&](const Pattern& p) {
            return p.kind != Pattern::Kind::AttrLeaf && p.name == role;
        });
    }

    // Single-attribute keys become shapes over the attribute's objects with
    // an inverse-path maxCount, valid under global attribute-name uniqueness.
    void emitKeyTargetShapes(std::ostringstream& out, const std::string& subject) {
        std::set<std::string> keyed;
        auto singleAttrKey = [&](const std::vector<Pattern>& patterns) -> const std::string* {
            if (patterns.size() != 1 || patterns.front().kind != Pattern::Kind::AttrLeaf) {
                return nullptr;
            }
            return &patterns.front().name;
        };
        for (const auto* key : schema_.keysOf(subject)) {
            if (const auto* attr = singleAttrKey(key->patterns)) keyed.insert(*attr);
        }
        for (const auto& c : schema_.constraints) {
            const auto* id = std::get_if<IdentityConstraint>(&c);
            if (id == nullptr || id->subject != subject) continue;
            if (const auto* attr = singleAttrKey(id->patterns)) keyed.insert(*attr);
        }
        for (const auto& attr : keyed) {
            out << "\n# Unicity of " << attr << " globally (hence per " << subject << ")\n";
            out << "ex:" << emit::capitalize(attr) << "TargetShape\n";
            out << "    a sh:NodeShape ;\n";
            out << "    sh:targetObjectsOf ex:" << attr << " ;\n";
            out << "    sh:property [\n";
            out << "        sh:path [ sh:inversePath ex:" << attr << " ] ;\n";
            out << "        sh:maxCount 1 ;\n";
            out << "    ] .\n";
        }
    }

    void applyConstraintAccounting() {
        for (const auto& c : schema_.constraints) {
            if (std::holds_alternative<IsaConstraint>(c) ||
                std::holds_alternative<DisjointConstraint>(c) ||
                std::holds_alternative<CoverConstraint>(c)) {
                continue; // hierarchy, reported upfront
            }
            if (std::holds_alternative<MandatoryAttr>(c) ||
                std::holds_alternative<SingleAttr>(c)) {
                output_.expressed.push_back(render(c)); // min/maxCount
                continue;
            }
            if (const auto* m = std::get_if<MandatoryRole>(&c)) {
                accountRoleConstraint(c, m->entity, m->role, m->relationship);
                continue;
            }
            if (const auto* s = std::get_if<SingleRole>(&c)) {
                accountRoleConstraint(c, s->entity, s->role, s->relationship);
                continue;
            }
            const std::vector<Pattern>* patterns = nullptr;
            if (const auto* key = std::get_if<KeyConstraint>(&c)) patterns = &key->patterns;
            if (const auto* id = std::get_if<IdentityConstraint>(&c)) {
                patterns = &id->patterns;
            }
            if (patterns != nullptr) {
                bool singleAttr = patterns->size() == 1 &&
                                  patterns->front().kind == Pattern::Kind::AttrLeaf;
                if (singleAttr) {
                    output_.expressed.push_back(render(c));
                } else {
                    output_.unexpressed.push_back(emit::unexpressed(
                        c, "composite unique keys are not expressible in SHACL core"));
                }
            }
        }
    }

    void accountRoleConstraint(const ConstraintStatement& c, const std::string& entity,
                               const std::string& role, const std::string& rel) {
        auto roles = emit::subjectObjectRoles(schema_, analysis_, rel);
        bool onSubjectSide = roles.has_value() && roles->first == role;
        bool flattenedObject = isFlattened(rel) && roles.has_value() && roles->second == role;
        (void)entity;
        if (onSubjectSide || flattenedObject) {
            output_.expressed.push_back(render(c));
        } else {
            output_.unexpressed.push_back(emit::unexpressed(
                c, "participation of a non-subject role has no property to constrain"));
        }
    }

    const Schema& schema_;
    Analysis analysis_;
    EmitterOutput output_;
};

} // namespace

EmitterOutput emitShacl(const Schema& schema) { return ShaclEmitter(schema).run(); }

} // namespace kger
