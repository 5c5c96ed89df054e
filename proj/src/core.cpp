#include "kger/core.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <deque>
#include <sstream>

namespace kger {

bool isValidIdentifier(const std::string& name) {
    if (name.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') return false;
    for (char c : name) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Values

namespace {

bool parseCanonicalNumber(const std::string& in, bool allowFraction, std::string& out) {
    // Accepts [+-] digits [. digits] [eE [+-] digits] and produces the
    // minimal plain decimal form (no exponent, no trailing fractional
    // zeros, no leading integer zeros, no negative zero).
    std::size_t i = 0;
    bool negative = false;
    if (i < in.size() && (in[i] == '+' || in[i] == '-')) {
        negative = in[i] == '-';
        ++i;
    }
    std::string intPart, fracPart;
    while (i < in.size() && std::isdigit(static_cast<unsigned char>(in[i]))) {
        intPart += in[i++];
    }
    if (i < in.size() && in[i] == '.') {
        ++i;
        while (i < in.size() && std::isdigit(static_cast<unsigned char>(in[i]))) {
            fracPart += in[i++];
        }
    }
    long long exponent = 0;
    if (i < in.size() && (in[i] == 'e' || in[i] == 'E')) {
        ++i;
        bool expNeg = false;
        if (i < in.size() && (in[i] == '+' || in[i] == '-')) {
            expNeg = in[i] == '-';
            ++i;
        }
        if (i >= in.size()) return false;
        std::string digits;
        while (i < in.size() && std::isdigit(static_cast<unsigned char>(in[i]))) {
            digits += in[i++];
        }
        if (digits.empty() || digits.size() > 6) return false;
        exponent = std::stoll(digits) * (expNeg ? -1 : 1);
    }
    if (i != in.size()) return false;
    if (intPart.empty() && fracPart.empty()) return false;

    // Shift the point by the exponent over the digit string.
    std::string digits = intPart + fracPart;
    long long pointPos = static_cast<long long>(intPart.size()) + exponent;
    std::string intDigits, fracDigits;
    if (pointPos <= 0) {
        intDigits = "0";
        fracDigits = std::string(static_cast<std::size_t>(-pointPos), '0') + digits;
    } else if (pointPos >= static_cast<long long>(digits.size())) {
        intDigits =
            digits + std::string(static_cast<std::size_t>(pointPos - digits.size()), '0');
        fracDigits.clear();
    } else {
        intDigits = digits.substr(0, static_cast<std::size_t>(pointPos));
        fracDigits = digits.substr(static_cast<std::size_t>(pointPos));
    }

    std::size_t firstNonZero = intDigits.find_first_not_of('0');
    intDigits = firstNonZero == std::string::npos ? "0" : intDigits.substr(firstNonZero);
    std::size_t lastNonZero = fracDigits.find_last_not_of('0');
    fracDigits = lastNonZero == std::string::npos ? "" : fracDigits.substr(0, lastNonZero + 1);

    if (!allowFraction && !fracDigits.empty()) return false;
    if (intDigits == "0" && fracDigits.empty()) negative = false;

    out = (negative ? "-" : "") + intDigits;
    if (!fracDigits.empty()) out += "." + fracDigits;
    return true;
}

} // namespace

Value Value::text(std::string s) { return Value(Tag::Text, std::move(s)); }

Value Value::boolean(bool b) { return Value(Tag::Boolean, b ? "true" : "false"); }

Value Value::integer(const std::string& lexical) {
    std::string canonical;
    if (!parseCanonicalNumber(lexical, /*allowFraction=*/false, canonical)) {
        throw Error("BAD-VALUE", "not an integer literal: " + lexical);
    }
    return Value(Tag::Integer, canonical);
}

Value Value::integer(long long v) { return Value(Tag::Integer, std::to_string(v)); }

Value Value::decimal(const std::string& lexical) {
    std::string canonical;
    if (!parseCanonicalNumber(lexical, /*allowFraction=*/true, canonical)) {
        throw Error("BAD-VALUE", "not a decimal literal: " + lexical);
    }
    return Value(Tag::Decimal, canonical);
}

Value Value::decimal(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return decimal(std::string(buf));
}

bool Value::operator==(const Value& other) const {
    if (isNumeric() && other.isNumeric()) return lexical_ == other.lexical_;
    return tag_ == other.tag_ && lexical_ == other.lexical_;
}

bool Value::operator<(const Value& other) const {
    auto rank = [](const Value& v) { return v.isNumeric() ? 0 : v.tag_ == Tag::Text ? 1 : 2; };
    if (rank(*this) != rank(other)) return rank(*this) < rank(other);
    return lexical_ < other.lexical_;
}

std::string Value::render() const {
    if (tag_ == Tag::Text) return "\"" + lexical_ + "\"";
    return lexical_;
}

// ---------------------------------------------------------------------------
// Patterns

Pattern Pattern::attrLeaf(std::string attribute) {
    Pattern p;
    p.kind = Kind::AttrLeaf;
    p.name = std::move(attribute);
    return p;
}

Pattern Pattern::roleLeaf(std::string role) {
    Pattern p;
    p.kind = Kind::RoleLeaf;
    p.name = std::move(role);
    return p;
}

Pattern Pattern::roleNode(std::string role, std::vector<Pattern> children) {
    if (children.empty()) throw Error("BAD-PATTERN", "role node requires children");
    Pattern p;
    p.kind = Kind::RoleNode;
    p.name = std::move(role);
    p.children = std::move(children);
    return p;
}

std::string Pattern::render() const {
    if (kind != Kind::RoleNode) return name;
    std::string out = name + "(";
    for (std::size_t i = 0; i < children.size(); ++i) {
        if (i > 0) out += ", ";
        out += children[i].render();
    }
    return out + ")";
}

bool Pattern::operator==(const Pattern& other) const {
    return kind == other.kind && name == other.name && children == other.children;
}

bool Pattern::operator<(const Pattern& other) const {
    if (name != other.name) return name < other.name;
    if (kind != other.kind) return kind < other.kind;
    return children < other.children;
}

std::size_t patternArity(const Pattern& p) {
    if (p.kind != Pattern::Kind::RoleNode) return 1;
    std::size_t arity = 0;
    for (const auto& child : p.children) arity += patternArity(child);
    return arity;
}

bool isGround(const Pattern& p) {
    if (p.kind == Pattern::Kind::AttrLeaf) return true;
    if (p.kind == Pattern::Kind::RoleLeaf) return false;
    return std::all_of(p.children.begin(), p.children.end(),
                       [](const Pattern& c) { return isGround(c); });
}

// ---------------------------------------------------------------------------
// Statement rendering and ordering

namespace {

std::string renderPatternList(const std::vector<Pattern>& patterns) {
    std::string out = "[";
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        if (i > 0) out += ", ";
        out += patterns[i].render();
    }
    return out + "]";
}

} // namespace

std::string render(const ShapeStatement& s) {
    if (const auto* e = std::get_if<EntityDecl>(&s)) return "Entity(" + e->entity + ")";
    if (const auto* r = std::get_if<RelationshipDecl>(&s)) {
        return "Relationship(" + r->relationship + ")";
    }
    if (const auto* a = std::get_if<AttributeDecl>(&s)) {
        return "Attribute(" + a->owner + ", " + a->attribute + ")";
    }
    const auto& role = std::get<RoleDecl>(s);
    return "Role(" + role.relationship + ", " + role.role + ", " + role.entity + ")";
}

std::string render(const ConstraintStatement& s) {
    struct Renderer {
        std::string operator()(const MandatoryAttr& c) const {
            return "Mandatory(" + c.owner + ", " + c.attribute + ")";
        }
        std::string operator()(const SingleAttr& c) const {
            return "Single(" + c.owner + ", " + c.attribute + ")";
        }
        std::string operator()(const MandatoryRole& c) const {
            return "Mandatory(" + c.entity + ", " + c.role + ", " + c.relationship + ")";
        }
        std::string operator()(const SingleRole& c) const {
            return "Single(" + c.entity + ", " + c.role + ", " + c.relationship + ")";
        }
        std::string operator()(const KeyConstraint& c) const {
            return "Key(" + c.subject + ", " + renderPatternList(c.patterns) + ")";
        }
        std::string operator()(const IdentityConstraint& c) const {
            return "Identity(" + c.subject + ", " + renderPatternList(c.patterns) + ")";
        }
        std::string operator()(const IsaConstraint& c) const {
            return "Isa(" + c.sub + ", " + c.super + ")";
        }
        std::string operator()(const DisjointConstraint& c) const {
            return "Disjoint(" + c.left + ", " + c.right + ")";
        }
        std::string operator()(const CoverConstraint& c) const {
            std::string out = "Cover({";
            for (std::size_t i = 0; i < c.members.size(); ++i) {
                if (i > 0) out += ", ";
                out += c.members[i];
            }
            return out + "}, " + c.covered + ")";
        }
    };
    return std::visit(Renderer{}, s);
}

std::string render(const Statement& s) {
    if (const auto* shape = std::get_if<ShapeStatement>(&s)) return render(*shape);
    return render(std::get<ConstraintStatement>(s));
}

int kindRank(const ShapeStatement& s) { return static_cast<int>(s.index()); }

int kindRank(const ConstraintStatement& s) { return static_cast<int>(s.index()); }

bool operator==(const ShapeStatement& a, const ShapeStatement& b) {
    return a.index() == b.index() && render(a) == render(b);
}

bool operator==(const ConstraintStatement& a, const ConstraintStatement& b) {
    return a.index() == b.index() && render(a) == render(b);
}

bool hasErrors(const std::vector<Diagnostic>& diagnostics) {
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [](const Diagnostic& d) { return d.isError(); });
}

// ---------------------------------------------------------------------------
// Schema

bool Schema::hasMandatoryAttr(const std::string& owner, const std::string& attribute) const {
    for (const auto& c : constraints) {
        if (const auto* m = std::get_if<MandatoryAttr>(&c)) {
            if (m->owner == owner && m->attribute == attribute) return true;
        }
    }
    return false;
}

bool Schema::hasSingleAttr(const std::string& owner, const std::string& attribute) const {
    for (const auto& c : constraints) {
        if (const auto* s = std::get_if<SingleAttr>(&c)) {
            if (s->owner == owner && s->attribute == attribute) return true;
        }
    }
    return false;
}

bool Schema::hasMandatoryRole(const std::string& entity, const std::string& role,
                              const std::string& relationship) const {
    for (const auto& c : constraints) {
        if (const auto* m = std::get_if<MandatoryRole>(&c)) {
            if (m->entity == entity && m->role == role && m->relationship == relationship) {
                return true;
            }
        }
    }
    return false;
}

bool Schema::hasSingleRole(const std::string& entity, const std::string& role,
                           const std::string& relationship) const {
    for (const auto& c : constraints) {
        if (const auto* s = std::get_if<SingleRole>(&c)) {
            if (s->entity == entity && s->role == role && s->relationship == relationship) {
                return true;
            }
        }
    }
    return false;
}

const IdentityConstraint* Schema::identityOf(const std::string& subject) const {
    for (const auto& c : constraints) {
        if (const auto* id = std::get_if<IdentityConstraint>(&c)) {
            if (id->subject == subject) return id;
        }
    }
    return nullptr;
}

std::vector<const KeyConstraint*> Schema::keysOf(const std::string& subject) const {
    std::vector<const KeyConstraint*> out;
    for (const auto& c : constraints) {
        if (const auto* key = std::get_if<KeyConstraint>(&c)) {
            if (key->subject == subject) out.push_back(key);
        }
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> Schema::isaEdges() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& c : constraints) {
        if (const auto* isa = std::get_if<IsaConstraint>(&c)) {
            out.emplace_back(isa->sub, isa->super);
        }
    }
    return out;
}

namespace {

template <typename S>
void sortAndDedup(std::vector<S>& statements) {
    std::sort(statements.begin(), statements.end(), [](const S& a, const S& b) {
        int ra = kindRank(a);
        int rb = kindRank(b);
        if (ra != rb) return ra < rb;
        return render(a) < render(b);
    });
    statements.erase(std::unique(statements.begin(), statements.end()), statements.end());
}

Diagnostic schemaError(std::string code, std::string subject, std::string message,
                       std::vector<std::string> witnesses = {}) {
    Diagnostic d;
    d.severity = Diagnostic::Severity::Error;
    d.code = std::move(code);
    d.subject = std::move(subject);
    d.message = std::move(message);
    d.witnesses = std::move(witnesses);
    return d;
}

} // namespace

BuildResult buildSchema(const std::vector<ShapeStatement>& shape,
                        const std::vector<ConstraintStatement>& constraints) {
    BuildResult result;
    Schema schema;
    schema.shape = shape;
    schema.constraints = constraints;
    for (auto& c : schema.constraints) {
        if (auto* cover = std::get_if<CoverConstraint>(&c)) {
            std::sort(cover->members.begin(), cover->members.end());
            cover->members.erase(std::unique(cover->members.begin(), cover->members.end()),
                                 cover->members.end());
        }
    }
    sortAndDedup(schema.shape);
    sortAndDedup(schema.constraints);

    for (const auto& s : schema.shape) {
        if (const auto* e = std::get_if<EntityDecl>(&s)) {
            schema.entities.insert(e->entity);
        } else if (const auto* r = std::get_if<RelationshipDecl>(&s)) {
            schema.relationships.insert(r->relationship);
        } else if (const auto* a = std::get_if<AttributeDecl>(&s)) {
            schema.attributes.insert(a->attribute);
        } else {
            schema.roles.insert(std::get<RoleDecl>(s).role);
        }
    }

    // Pairwise disjointness of the four name classes.
    std::map<std::string, std::vector<std::string>> classesOf;
    for (const auto& n : schema.entities) classesOf[n].push_back("entity");
    for (const auto& n : schema.relationships) classesOf[n].push_back("relationship");
    for (const auto& n : schema.attributes) classesOf[n].push_back("attribute");
    for (const auto& n : schema.roles) classesOf[n].push_back("role");
    for (const auto& [name, classes] : classesOf) {
        if (classes.size() > 1) {
            std::string kinds;
            for (std::size_t i = 0; i < classes.size(); ++i) {
                if (i > 0) kinds += " and ";
                kinds += classes[i];
            }
            result.diagnostics.push_back(schemaError(
                "NAME-CLASS-OVERLAP", name, "name used as " + kinds, {name}));
        }
    }

    // Global uniqueness of attribute and role ownership.
    std::map<std::string, std::set<std::string>> attrOwners;
    std::map<std::string, std::set<std::string>> roleOwners;
    for (const auto& s : schema.shape) {
        if (const auto* a = std::get_if<AttributeDecl>(&s)) {
            attrOwners[a->attribute].insert(a->owner);
        } else if (const auto* r = std::get_if<RoleDecl>(&s)) {
            roleOwners[r->role].insert(r->relationship + "/" + r->entity);
        }
    }
    for (const auto& [attribute, owners] : attrOwners) {
        if (owners.size() > 1) {
            result.diagnostics.push_back(schemaError(
                "DUP-ATTR-OWNER", attribute,
                "attribute " + attribute + " owned by more than one entity or relationship",
                {owners.begin(), owners.end()}));
        }
    }
    for (const auto& [role, owners] : roleOwners) {
        if (owners.size() > 1) {
            result.diagnostics.push_back(schemaError(
                "DUP-ROLE-OWNER", role,
                "role " + role + " declared with more than one relationship or entity",
                {owners.begin(), owners.end()}));
        }
    }

    // Structural sanity of constraint statements (parser rules restated for
    // programmatic construction).
    for (const auto& c : schema.constraints) {
        if (const auto* key = std::get_if<KeyConstraint>(&c)) {
            if (key->patterns.empty()) {
                result.diagnostics.push_back(schemaError(
                    "BAD-STATEMENT", render(c), "Key requires a non-empty pattern list"));
            }
        } else if (const auto* id = std::get_if<IdentityConstraint>(&c)) {
            if (id->patterns.empty()) {
                result.diagnostics.push_back(schemaError(
                    "BAD-STATEMENT", render(c), "Identity requires a non-empty pattern list"));
            }
        } else if (const auto* cover = std::get_if<CoverConstraint>(&c)) {
            if (cover->members.empty()) {
                result.diagnostics.push_back(schemaError(
                    "BAD-STATEMENT", render(c), "Cover requires a non-empty entity set"));
            }
        }
    }

    if (hasErrors(result.diagnostics)) return result;

    for (const auto& s : schema.shape) {
        if (const auto* a = std::get_if<AttributeDecl>(&s)) {
            schema.attrsOf[a->owner].insert(a->attribute);
            schema.ownerOfAttr[a->attribute] = a->owner;
        } else if (const auto* r = std::get_if<RoleDecl>(&s)) {
            schema.rolesOf[r->relationship].insert(r->role);
            schema.participations[r->entity].insert({r->relationship, r->role});
            schema.ownerOfRole[r->role] = {r->relationship, r->entity};
        }
    }

    result.schema = std::move(schema);
    return result;
}

std::set<std::string> ancestorsOf(const Schema& schema, const std::string& entity) {
    if (!schema.isEntity(entity)) {
        throw Error("UNKNOWN-ENTITY", "not a declared entity: " + entity);
    }
    std::set<std::string> closure{entity};
    std::deque<std::string> queue{entity};
    auto edges = schema.isaEdges();
    while (!queue.empty()) {
        std::string current = queue.front();
        queue.pop_front();
        for (const auto& [sub, super] : edges) {
            if (sub == current && closure.insert(super).second) queue.push_back(super);
        }
    }
    return closure;
}

std::set<std::string> rootsOf(const Schema& schema) {
    std::set<std::string> roots = schema.entities;
    for (const auto& [sub, super] : schema.isaEdges()) {
        (void)super;
        roots.erase(sub);
    }
    return roots;
}

// ---------------------------------------------------------------------------
// Knowledge graphs

bool KnowledgeGraph::AttrFact::operator<(const AttrFact& o) const {
    if (owner != o.owner) return owner < o.owner;
    if (attribute != o.attribute) return attribute < o.attribute;
    return value < o.value;
}

bool KnowledgeGraph::RoleFact::operator<(const RoleFact& o) const {
    if (rel != o.rel) return rel < o.rel;
    if (role != o.role) return role < o.role;
    return target < o.target;
}

void KnowledgeGraph::addEntity(const std::string& id, const std::set<std::string>& types) {
    entityIds.insert(id);
    entityMembership[id].insert(types.begin(), types.end());
}

void KnowledgeGraph::addRelationship(const std::string& id, const std::string& type) {
    relIds.insert(id);
    relMembership[id] = type;
}

void KnowledgeGraph::addAttrFact(const std::string& owner, const std::string& attribute,
                                 Value value) {
    AttrFact fact{owner, attribute, std::move(value)};
    auto it = std::lower_bound(attrFacts.begin(), attrFacts.end(), fact);
    if (it == attrFacts.end() || !(*it == fact)) attrFacts.insert(it, fact);
}

void KnowledgeGraph::addRoleFact(const std::string& rel, const std::string& role,
                                 const std::string& target) {
    RoleFact fact{rel, role, target};
    auto it = std::lower_bound(roleFacts.begin(), roleFacts.end(), fact);
    if (it == roleFacts.end() || !(*it == fact)) roleFacts.insert(it, fact);
}

void KnowledgeGraph::removeAttrFact(const std::string& owner, const std::string& attribute,
                                    const Value& value) {
    AttrFact fact{owner, attribute, value};
    auto it = std::lower_bound(attrFacts.begin(), attrFacts.end(), fact);
    if (it != attrFacts.end() && *it == fact) attrFacts.erase(it);
}

bool KnowledgeGraph::isEntityInstanceOf(const std::string& id,
                                        const std::string& entity) const {
    auto it = entityMembership.find(id);
    return it != entityMembership.end() && it->second.count(entity) > 0;
}

bool KnowledgeGraph::isRelInstanceOf(const std::string& id,
                                     const std::string& relationship) const {
    auto it = relMembership.find(id);
    return it != relMembership.end() && it->second == relationship;
}

std::vector<std::string> KnowledgeGraph::instancesOf(const Schema& schema,
                                                     const std::string& name) const {
    std::vector<std::string> out;
    if (schema.isEntity(name)) {
        for (const auto& [id, types] : entityMembership) {
            if (types.count(name) > 0) out.push_back(id);
        }
    } else if (schema.isRelationship(name)) {
        for (const auto& [id, type] : relMembership) {
            if (type == name) out.push_back(id);
        }
    } else {
        throw Error("UNKNOWN-NAME", "not a declared entity or relationship: " + name);
    }
    return out;
}

std::vector<Value> KnowledgeGraph::attrValues(const std::string& owner,
                                              const std::string& attribute) const {
    std::vector<Value> out;
    for (const auto& fact : attrFacts) {
        if (fact.owner == owner && fact.attribute == attribute) out.push_back(fact.value);
    }
    return out;
}

std::vector<std::string> KnowledgeGraph::roleFillers(const std::string& rel,
                                                     const std::string& role) const {
    std::vector<std::string> out;
    for (const auto& fact : roleFacts) {
        if (fact.rel == rel && fact.role == role) out.push_back(fact.target);
    }
    return out;
}

std::vector<std::string> KnowledgeGraph::relsWithFiller(const std::string& role,
                                                        const std::string& target) const {
    std::vector<std::string> out;
    for (const auto& fact : roleFacts) {
        if (fact.role == role && fact.target == target) out.push_back(fact.rel);
    }
    return out;
}

} // namespace kger
