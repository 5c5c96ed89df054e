#include "kger/emitters.hpp"

#include "emit_common.hpp"

#include <algorithm>
#include <sstream>

namespace kger {

namespace {

using emit::Analysis;

// Cardinality marker: bare = exactly one, ? = 0..1, + = 1..*, * = 0..*.
std::string marker(bool minOne, bool maxOne) {
    if (minOne && maxOne) return "";
    if (!minOne && maxOne) return "?";
    if (minOne) return "+";
    return "*";
}

class ShexEmitter {
public:
    explicit ShexEmitter(const Schema& schema)
        : schema_(schema), analysis_(emit::analyze(schema)) {}

    EmitterOutput run() {
        emit::reportHierarchyUnexpressed(schema_, output_, "ShEx");

        std::ostringstream out;
        out << "PREFIX ex: <http://example.org/>\n";
        out << "PREFIX xsd: <http://www.w3.org/2001/XMLSchema#>\n";

        for (const auto& entity : schema_.entities) emitEntityShape(out, entity);
        for (const auto& rel : schema_.relationships) {
            if (isFlattened(rel)) continue;
            emitRelationshipShape(out, rel);
        }

        accountConstraints();
        for (const auto& d : output_.unexpressed) {
            out << "\n# UNEXPRESSED: " << d.subject << ": " << d.message;
        }
        if (!output_.unexpressed.empty()) out << "\n";
        output_.artifact = out.str();
        return std::move(output_);
    }

private:
    bool isFlattened(const std::string& rel) const {
        auto absorbed = analysis_.absorbedRel.find(rel);
        if (absorbed == analysis_.absorbedRel.end()) return false;
        auto attrs = schema_.attrsOf.find(rel);
        return attrs == schema_.attrsOf.end() || attrs->second.empty();
    }

    void emitShape(std::ostringstream& out, const std::string& shapeName,
                   const std::vector<std::string>& constraintsLines) const {
        out << "\nex:" << shapeName << " {\n";
        for (std::size_t i = 0; i < constraintsLines.size(); ++i) {
            out << "  " << constraintsLines[i]
                << (i + 1 < constraintsLines.size() ? " ;" : "") << "\n";
        }
        out << "}\n";
    }

    void emitEntityShape(std::ostringstream& out, const std::string& entity) const {
        std::vector<std::string> lines;
        auto attrs = schema_.attrsOf.find(entity);
        if (attrs != schema_.attrsOf.end()) {
            for (const auto& attr : attrs->second) {
                lines.push_back("ex:" + attr + " xsd:string" +
                                marker(emit::attrMinOne(schema_, entity, attr),
                                       emit::attrMaxOne(schema_, entity, attr)));
            }
        }
        for (const auto& rel : schema_.relationships) {
            auto roles = emit::subjectObjectRoles(schema_, analysis_, rel);
            if (!roles.has_value()) continue;
            const auto& [subjectRole, objectRole] = *roles;
            if (schema_.ownerOfRole.at(subjectRole).second != entity) continue;
            std::string target = isFlattened(rel)
                                     ? schema_.ownerOfRole.at(objectRole).second + "Shape"
                                     : emit::capitalize(rel) + "RelShape";
            lines.push_back("ex:" + rel + " @ex:" + target +
                            marker(schema_.hasMandatoryRole(entity, subjectRole, rel),
                                   schema_.hasSingleRole(entity, subjectRole, rel)));
        }
        auto weak = analysis_.weakOf.find(entity);
        if (weak != analysis_.weakOf.end() && isFlattened(weak->second.relationship)) {
            lines.push_back("ex:" + weak->second.parentRole + " @ex:" + weak->second.parent +
                            "Shape");
        }
        emitShape(out, entity + "Shape", lines);
    }

    void emitRelationshipShape(std::ostringstream& out, const std::string& rel) const {
        std::vector<std::string> lines;
        auto attrs = schema_.attrsOf.find(rel);
        if (attrs != schema_.attrsOf.end()) {
            for (const auto& attr : attrs->second) {
                lines.push_back("ex:" + attr + " xsd:string" +
                                marker(emit::attrMinOne(schema_, rel, attr),
                                       emit::attrMaxOne(schema_, rel, attr)));
            }
        }
        auto roles = emit::subjectObjectRoles(schema_, analysis_, rel);
        std::vector<std::string> objectRoles;
        if (roles.has_value()) {
            objectRoles.push_back(roles->second);
        } else {
            for (const auto& role : schema_.rolesOf.at(rel)) objectRoles.push_back(role);
        }
        for (const auto& role : objectRoles) {
            const IdentityConstraint* id = schema_.identityOf(rel);
            bool navigated =
                id != nullptr &&
                std::any_of(id->patterns.begin(), id->patterns.end(), [&](const Pattern& p) {
                    return p.kind != Pattern::Kind::AttrLeaf && p.name == role;
                });
            lines.push_back("ex:" + role + " @ex:" + schema_.ownerOfRole.at(role).second +
                            "Shape" + marker(navigated, true));
        }
        emitShape(out, emit::capitalize(rel) + "RelShape", lines);
    }

    void accountConstraints() {
        for (const auto& c : schema_.constraints) {
            if (std::holds_alternative<IsaConstraint>(c) ||
                std::holds_alternative<DisjointConstraint>(c) ||
                std::holds_alternative<CoverConstraint>(c)) {
                continue;
            }
            if (std::holds_alternative<MandatoryAttr>(c) ||
                std::holds_alternative<SingleAttr>(c)) {
                output_.expressed.push_back(render(c));
                continue;
            }
            if (const auto* m = std::get_if<MandatoryRole>(&c)) {
                accountRoleConstraint(c, m->role, m->relationship);
                continue;
            }
            if (const auto* s = std::get_if<SingleRole>(&c)) {
                accountRoleConstraint(c, s->role, s->relationship);
                continue;
            }
            if (std::holds_alternative<KeyConstraint>(c) ||
                std::holds_alternative<IdentityConstraint>(c)) {
                output_.unexpressed.push_back(emit::unexpressed(
                    c, "key constraints await ShEx extensions under development"));
            }
        }
    }

    void accountRoleConstraint(const ConstraintStatement& c, const std::string& role,
                               const std::string& rel) {
        auto roles = emit::subjectObjectRoles(schema_, analysis_, rel);
        bool onSubjectSide = roles.has_value() && roles->first == role;
        bool flattenedObject = isFlattened(rel) && roles.has_value() && roles->second == role;
        if (onSubjectSide || flattenedObject) {
            output_.expressed.push_back(render(c));
        } else {
            output_.unexpressed.push_back(emit::unexpressed(
                c, "participation of a non-subject role has no triple constraint"));
        }
    }

    const Schema& schema_;
    Analysis analysis_;
    EmitterOutput output_;
};

} // namespace

EmitterOutput emitShex(const Schema& schema) { return ShexEmitter(schema).run(); }

} // namespace kger
