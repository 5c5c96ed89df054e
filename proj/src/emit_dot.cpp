#include "kger/emitters.hpp"

#include <sstream>

namespace kger {

// Graphical conventions: rectangular entity nodes, oval attribute nodes,
// hexagonal relationship nodes, role-labeled relationship-entity edges,
// dashed Isa arrows.
std::string emitDot(const Schema& schema) {
    std::ostringstream out;
    out << "digraph schema {\n";
    bool any = false;
    for (const auto& entity : schema.entities) {
        out << "    " << entity << " [shape=box];\n";
        any = true;
    }
    for (const auto& rel : schema.relationships) {
        out << "    " << rel << " [shape=hexagon];\n";
        any = true;
    }
    for (const auto& s : schema.shape) {
        if (const auto* a = std::get_if<AttributeDecl>(&s)) {
            out << "    " << a->attribute << " [shape=ellipse];\n";
            any = true;
        }
    }
    if (any) out << "\n";
    for (const auto& s : schema.shape) {
        if (const auto* a = std::get_if<AttributeDecl>(&s)) {
            out << "    " << a->owner << " -> " << a->attribute << " [arrowhead=none];\n";
        } else if (const auto* r = std::get_if<RoleDecl>(&s)) {
            out << "    " << r->relationship << " -> " << r->entity << " [label=\""
                << r->role << "\"];\n";
        }
    }
    for (const auto& c : schema.constraints) {
        if (const auto* isa = std::get_if<IsaConstraint>(&c)) {
            out << "    " << isa->sub << " -> " << isa->super << " [style=dashed];\n";
        }
    }
    out << "}\n";
    return out.str();
}

} // namespace kger
