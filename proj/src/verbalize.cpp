#include "kger/emitters.hpp"

#include <sstream>

namespace kger {

namespace {

std::string quoted(const std::string& name) { return "'" + name + "'"; }

std::string ownerKind(const Schema& schema, const std::string& name) {
    return schema.isEntity(name) ? "entity" : "relationship";
}

std::string patternListText(const std::vector<Pattern>& patterns) {
    std::string out = "[";
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        if (i > 0) out += ", ";
        out += patterns[i].render();
    }
    return out + "]";
}

// The participation phrasing fuses the role declaration with its
// mandatory/single constraints into one sentence.
std::string participationPhrase(bool mandatory, bool single) {
    if (mandatory && single) return "exactly one instance";
    if (mandatory) return "one or more instances";
    if (single) return "at most one instance";
    return "zero or more instances";
}

} // namespace

std::string verbalize(const Schema& schema) {
    std::ostringstream out;

    for (const auto& entity : schema.entities) {
        out << quoted(entity) << " is an entity.\n";
        auto attrs = schema.attrsOf.find(entity);
        if (attrs == schema.attrsOf.end()) continue;
        for (const auto& attr : attrs->second) {
            out << quoted(attr) << " is an attribute of the entity " << quoted(entity)
                << ".\n";
        }
    }
    for (const auto& rel : schema.relationships) {
        out << quoted(rel) << " is an relationship.\n";
        auto attrs = schema.attrsOf.find(rel);
        if (attrs != schema.attrsOf.end()) {
            for (const auto& attr : attrs->second) {
                out << quoted(attr) << " is an attribute of the relationship " << quoted(rel)
                    << ".\n";
            }
        }
        auto roles = schema.rolesOf.find(rel);
        if (roles == schema.rolesOf.end()) continue;
        for (const auto& role : roles->second) {
            const std::string& entity = schema.ownerOfRole.at(role).second;
            out << "Every instance of the entity " << quoted(entity) << " participates in "
                << participationPhrase(schema.hasMandatoryRole(entity, role, rel),
                                       schema.hasSingleRole(entity, role, rel))
                << " of the relationship " << quoted(rel) << " through the role "
                << quoted(role) << ".\n";
        }
    }

    for (const auto& c : schema.constraints) {
        if (const auto* m = std::get_if<MandatoryAttr>(&c)) {
            out << "Every instance of the " << ownerKind(schema, m->owner) << " "
                << quoted(m->owner) << " must have an attribute value for "
                << quoted(m->attribute) << ".\n";
        } else if (const auto* s = std::get_if<SingleAttr>(&c)) {
            out << "Every instance of the " << ownerKind(schema, s->owner) << " "
                << quoted(s->owner) << " must have at most one attribute value of "
                << quoted(s->attribute) << ".\n";
        } else if (const auto* key = std::get_if<KeyConstraint>(&c)) {
            out << "No two instances of " << quoted(key->subject)
                << " may have the same key values obtained with "
                << patternListText(key->patterns) << ".\n";
        } else if (const auto* id = std::get_if<IdentityConstraint>(&c)) {
            out << "Every instance of " << quoted(id->subject)
                << " must have precisely one tuple of key values obtained with "
                << patternListText(id->patterns) << ", and no two instances of "
                << quoted(id->subject) << " may have the same key values.\n";
        } else if (const auto* isa = std::get_if<IsaConstraint>(&c)) {
            out << quoted(isa->sub) << " is a subclass of " << quoted(isa->super)
                << "; in particular, " << quoted(isa->sub)
                << " inherits all attributes, relationships, and constraints of "
                << quoted(isa->super) << ".\n";
        } else if (const auto* dis = std::get_if<DisjointConstraint>(&c)) {
            out << "No instance of " << quoted(dis->left) << " is an instance of "
                << quoted(dis->right) << " and vice versa.\n";
        } else if (const auto* cover = std::get_if<CoverConstraint>(&c)) {
            out << "Any instance of " << quoted(cover->covered)
                << " is an instance of at least one of ";
            for (std::size_t i = 0; i < cover->members.size(); ++i) {
                if (i > 0) out << ", ";
                out << quoted(cover->members[i]);
            }
            out << ".\n";
        }
        // Mandatory/Single role constraints are fused into the participation
        // sentences above.
    }
    return out.str();
}

} // namespace kger
