#pragma once

// Schema well-formedness: WF1-WF9 plus reference checks for hierarchy and key
// statements. A schema is well-formed iff the returned list is empty.

#include "kger/core.hpp"

#include <vector>

namespace kger {

// One diagnostic per violated condition, in statement order per check:
//   WF1  attribute/role declarations reference declared entities/relationships
//   WF2  participation constraints reference declared Attribute/Role statements
//   WF3  Identity keys use ground patterns only
//   WF4  every relationship has an identifying key
//   WF5  the Isa hierarchy is acyclic
//   WF6  every root entity has a directly declared identifying key
//        (skipped while WF5 fails)
//   WF7  Disjoint only between entities with a common Isa-ancestor
//   WF8  Cover members are Isa-descendants of the covered entity
//   WF9  every Key/Identity pattern is rooted at its subject
//   UNKNOWN-NAME  a constraint references an undeclared name
std::vector<Diagnostic> checkWellFormed(const Schema& schema);

} // namespace kger
