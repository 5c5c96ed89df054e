#include "kger/text_format.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <sstream>

namespace kger {

std::string ParseError::message() const {
    std::ostringstream out;
    out << "line " << line << ", column " << column << ": expected " << expected
        << ", found " << (found.empty() ? "end of line" : "'" + found + "'");
    return out.str();
}

namespace {

// ---------------------------------------------------------------------------
// Statement-line parser: a hand-rolled scanner over one logical line.

struct LineParser {
    const std::string& text;
    std::size_t line;
    std::size_t pos = 0;
    ParseError error;
    bool failed = false;

    LineParser(const std::string& text, std::size_t line) : text(text), line(line) {}

    void skipSpace() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
            ++pos;
        }
    }

    bool atEnd() {
        skipSpace();
        return pos >= text.size();
    }

    std::string peekLexeme() {
        skipSpace();
        if (pos >= text.size()) return "";
        char c = text[pos];
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos;
            while (end < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[end])) || text[end] == '_')) {
                ++end;
            }
            return text.substr(pos, end - pos);
        }
        return std::string(1, c);
    }

    void fail(const std::string& expected) {
        if (failed) return;
        failed = true;
        skipSpace();
        error.line = line;
        error.column = pos + 1;
        error.expected = expected;
        error.found = peekLexeme();
    }

    bool expect(char c) {
        skipSpace();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        fail(std::string("'") + c + "'");
        return false;
    }

    std::string identifier(const std::string& what) {
        skipSpace();
        std::size_t start = pos;
        if (pos < text.size() &&
            (std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
            ++pos;
            while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                         text[pos] == '_')) {
                ++pos;
            }
            return text.substr(start, pos - start);
        }
        fail(what);
        return "";
    }

    bool expectEnd() {
        if (!atEnd()) {
            fail("end of statement");
            return false;
        }
        return true;
    }

    Pattern pattern() {
        std::string name = identifier("pattern name");
        if (failed) return Pattern{};
        skipSpace();
        if (pos < text.size() && text[pos] == '(') {
            ++pos;
            std::vector<Pattern> children = patternList(')');
            if (failed) return Pattern{};
            expect(')');
            return Pattern::roleNode(name, std::move(children));
        }
        // Leaf kind (attribute vs role) is resolved against the schema by the
        // callers that need it; syntactically a bare name is one leaf.
        Pattern leaf;
        leaf.kind = Pattern::Kind::AttrLeaf;
        leaf.name = name;
        return leaf;
    }

    std::vector<Pattern> patternList(char closer) {
        std::vector<Pattern> out;
        skipSpace();
        if (pos < text.size() && text[pos] == closer) {
            fail("non-empty pattern list");
            return out;
        }
        while (true) {
            out.push_back(pattern());
            if (failed) return out;
            skipSpace();
            if (pos < text.size() && text[pos] == ',') {
                ++pos;
                continue;
            }
            return out;
        }
    }

    std::vector<std::string> identifierSet() {
        std::vector<std::string> out;
        if (!expect('{')) return out;
        skipSpace();
        if (pos < text.size() && text[pos] == '}') {
            fail("non-empty entity set");
            return out;
        }
        while (true) {
            out.push_back(identifier("entity name"));
            if (failed) return out;
            skipSpace();
            if (pos < text.size() && text[pos] == ',') {
                ++pos;
                continue;
            }
            expect('}');
            return out;
        }
    }
};

// Leaf kinds in parsed patterns default to AttrLeaf; fix them up against the
// schema vocabulary once names are known.
Pattern resolveLeafKinds(const Pattern& p, const Schema& schema) {
    Pattern out = p;
    if (p.kind == Pattern::Kind::RoleNode) {
        for (auto& child : out.children) child = resolveLeafKinds(child, schema);
        return out;
    }
    out.kind = schema.roles.count(p.name) > 0 ? Pattern::Kind::RoleLeaf
                                              : Pattern::Kind::AttrLeaf;
    return out;
}

void resolveLeafKinds(std::vector<ConstraintStatement>& constraints, const Schema& schema) {
    for (auto& c : constraints) {
        if (auto* key = std::get_if<KeyConstraint>(&c)) {
            for (auto& p : key->patterns) p = resolveLeafKinds(p, schema);
        } else if (auto* id = std::get_if<IdentityConstraint>(&c)) {
            for (auto& p : id->patterns) p = resolveLeafKinds(p, schema);
        }
    }
}

struct ParsedStatement {
    std::optional<ShapeStatement> shape;
    std::optional<ConstraintStatement> constraint;
};

ParsedStatement parseStatementLine(LineParser& p) {
    ParsedStatement out;
    std::string keyword = p.identifier("statement keyword");
    if (p.failed) return out;

    auto arity2 = [&](std::string& a, std::string& b, const char* first,
                      const char* second) {
        if (!p.expect('(')) return false;
        a = p.identifier(first);
        if (p.failed) return false;
        if (!p.expect(',')) return false;
        b = p.identifier(second);
        if (p.failed) return false;
        return p.expect(')') && p.expectEnd();
    };

    if (keyword == "Entity") {
        if (!p.expect('(')) return out;
        std::string name = p.identifier("entity name");
        if (p.failed || !p.expect(')') || !p.expectEnd()) return out;
        out.shape = EntityDecl{name};
    } else if (keyword == "Relationship") {
        if (!p.expect('(')) return out;
        std::string name = p.identifier("relationship name");
        if (p.failed || !p.expect(')') || !p.expectEnd()) return out;
        out.shape = RelationshipDecl{name};
    } else if (keyword == "Attribute") {
        std::string owner, attribute;
        if (!arity2(owner, attribute, "entity or relationship name", "attribute name")) {
            return out;
        }
        out.shape = AttributeDecl{owner, attribute};
    } else if (keyword == "Role") {
        if (!p.expect('(')) return out;
        std::string rel = p.identifier("relationship name");
        if (p.failed || !p.expect(',')) return out;
        std::string role = p.identifier("role name");
        if (p.failed || !p.expect(',')) return out;
        std::string entity = p.identifier("entity name");
        if (p.failed || !p.expect(')') || !p.expectEnd()) return out;
        out.shape = RoleDecl{rel, role, entity};
    } else if (keyword == "Mandatory" || keyword == "Single") {
        if (!p.expect('(')) return out;
        std::string first = p.identifier("entity or relationship name");
        if (p.failed || !p.expect(',')) return out;
        std::string second = p.identifier("attribute or role name");
        if (p.failed) return out;
        p.skipSpace();
        if (p.pos < p.text.size() && p.text[p.pos] == ',') {
            ++p.pos;
            std::string rel = p.identifier("relationship name");
            if (p.failed || !p.expect(')') || !p.expectEnd()) return out;
            if (keyword == "Mandatory") {
                out.constraint = MandatoryRole{first, second, rel};
            } else {
                out.constraint = SingleRole{first, second, rel};
            }
        } else {
            if (!p.expect(')') || !p.expectEnd()) return out;
            if (keyword == "Mandatory") {
                out.constraint = MandatoryAttr{first, second};
            } else {
                out.constraint = SingleAttr{first, second};
            }
        }
    } else if (keyword == "Key" || keyword == "Identity") {
        if (!p.expect('(')) return out;
        std::string subject = p.identifier("entity or relationship name");
        if (p.failed || !p.expect(',') || !p.expect('[')) return out;
        std::vector<Pattern> patterns = p.patternList(']');
        if (p.failed || !p.expect(']') || !p.expect(')') || !p.expectEnd()) return out;
        if (keyword == "Key") {
            out.constraint = KeyConstraint{subject, std::move(patterns)};
        } else {
            out.constraint = IdentityConstraint{subject, std::move(patterns)};
        }
    } else if (keyword == "Isa") {
        std::string sub, super;
        if (!arity2(sub, super, "entity name", "entity name")) return out;
        out.constraint = IsaConstraint{sub, super};
    } else if (keyword == "Disjoint") {
        std::string left, right;
        if (!arity2(left, right, "entity name", "entity name")) return out;
        out.constraint = DisjointConstraint{left, right};
    } else if (keyword == "Cover") {
        if (!p.expect('(')) return out;
        std::vector<std::string> members = p.identifierSet();
        if (p.failed || !p.expect(',')) return out;
        std::string covered = p.identifier("entity name");
        if (p.failed || !p.expect(')') || !p.expectEnd()) return out;
        out.constraint = CoverConstraint{std::move(members), covered};
    } else {
        p.pos -= keyword.size();
        p.fail("statement keyword (Entity, Relationship, Attribute, Role, Mandatory, "
               "Single, Key, Identity, Isa, Disjoint, Cover)");
    }
    return out;
}

} // namespace

SchemaParseResult parseSchema(const std::string& source) {
    SchemaParseResult result;
    std::vector<ShapeStatement> shape;
    std::vector<ConstraintStatement> constraints;

    std::istringstream in(source);
    std::string rawLine;
    std::size_t lineNo = 0;
    while (std::getline(in, rawLine)) {
        ++lineNo;
        std::string text = rawLine;
        if (auto hash = text.find('#'); hash != std::string::npos) {
            text = text.substr(0, hash);
        }
        bool blank = std::all_of(text.begin(), text.end(), [](unsigned char c) {
            return std::isspace(c) != 0;
        });
        if (blank) continue;

        LineParser parser(text, lineNo);
        ParsedStatement parsed = parseStatementLine(parser);
        if (parser.failed) {
            result.parseErrors.push_back(parser.error);
            continue;
        }
        if (parsed.shape.has_value()) shape.push_back(*parsed.shape);
        if (parsed.constraint.has_value()) constraints.push_back(*parsed.constraint);
    }

    if (!result.parseErrors.empty()) return result;

    // Pattern leaves can only be classified once the vocabulary is known, so
    // build once for classification, then rebuild with resolved patterns.
    BuildResult first = buildSchema(shape, constraints);
    if (!first.ok()) {
        result.buildDiagnostics = std::move(first.diagnostics);
        return result;
    }
    resolveLeafKinds(constraints, *first.schema);
    BuildResult second = buildSchema(shape, constraints);
    if (!second.ok()) {
        result.buildDiagnostics = std::move(second.diagnostics);
        return result;
    }
    result.schema = std::move(second.schema);
    return result;
}

std::optional<Pattern> parsePattern(const std::string& source, ParseError& error) {
    LineParser parser(source, 1);
    Pattern p = parser.pattern();
    if (!parser.failed && !parser.expectEnd()) {
        error = parser.error;
        return std::nullopt;
    }
    if (parser.failed) {
        error = parser.error;
        return std::nullopt;
    }
    return p;
}

std::string serializeSchema(const Schema& schema) {
    std::string out;
    for (const auto& s : schema.shape) out += render(s) + "\n";
    for (const auto& c : schema.constraints) out += render(c) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Graph interchange format

namespace {

using nlohmann::json;

Diagnostic graphError(std::string code, std::string subject, std::string message) {
    Diagnostic d;
    d.severity = Diagnostic::Severity::Error;
    d.code = std::move(code);
    d.subject = std::move(subject);
    d.message = std::move(message);
    return d;
}

std::optional<Value> valueFromJson(const json& j) {
    if (j.is_string()) return Value::text(j.get<std::string>());
    if (j.is_boolean()) return Value::boolean(j.get<bool>());
    if (j.is_number_integer() || j.is_number_unsigned()) {
        return Value::integer(std::to_string(j.get<long long>()));
    }
    if (j.is_number_float()) return Value::decimal(j.get<double>());
    return std::nullopt;
}

json valueToJson(const Value& v) {
    switch (v.tag()) {
        case Value::Tag::Text:
            return v.lexical();
        case Value::Tag::Boolean:
            return v.lexical() == "true";
        case Value::Tag::Integer:
        case Value::Tag::Decimal:
            return json::parse(v.lexical());
    }
    return nullptr;
}

} // namespace

GraphLoadResult loadGraph(const std::string& source, const Schema& schema) {
    GraphLoadResult result;
    auto& diags = result.diagnostics;

    json doc = json::parse(source, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object()) {
        diags.push_back(graphError("GRAPH-SYNTAX", "document",
                                   "not a JSON object with graph sections"));
        return result;
    }
    static const std::set<std::string> knownKeys{"entities", "relationships", "attributes",
                                                 "roles"};
    for (const auto& [key, unused] : doc.items()) {
        (void)unused;
        if (knownKeys.count(key) == 0) {
            diags.push_back(graphError("GRAPH-SYNTAX", key, "unknown top-level key"));
        }
    }
    auto section = [&](const char* name) -> json {
        if (!doc.contains(name)) return json::array();
        if (!doc[name].is_array()) {
            diags.push_back(graphError("GRAPH-SYNTAX", name, "section must be an array"));
            return json::array();
        }
        return doc[name];
    };

    KnowledgeGraph graph;

    for (const auto& item : section("entities")) {
        if (!item.is_object() || !item.contains("id") || !item["id"].is_string() ||
            !item.contains("types") || !item["types"].is_array()) {
            diags.push_back(graphError("GRAPH-SYNTAX", "entities",
                                       "entries must be {id, types: [entity...]}"));
            continue;
        }
        std::string id = item["id"].get<std::string>();
        if (graph.entityIds.count(id) > 0) {
            diags.push_back(graphError("GRAPH-ID-CLASH", id, "entity id listed twice"));
            continue;
        }
        std::set<std::string> types;
        for (const auto& t : item["types"]) {
            if (!t.is_string()) {
                diags.push_back(graphError("GRAPH-SYNTAX", id, "types must be strings"));
                continue;
            }
            std::string typeName = t.get<std::string>();
            if (!schema.isEntity(typeName)) {
                diags.push_back(
                    graphError("GRAPH-UNKNOWN-NAME", id, "unknown entity: " + typeName));
                continue;
            }
            types.insert(typeName);
        }
        if (types.empty()) {
            diags.push_back(graphError("GRAPH-SYNTAX", id,
                                       "entity instance requires at least one entity"));
            continue;
        }
        graph.addEntity(id, types);
    }

    for (const auto& item : section("relationships")) {
        if (!item.is_object() || !item.contains("id") || !item["id"].is_string() ||
            !item.contains("type") || !item["type"].is_string()) {
            diags.push_back(graphError("GRAPH-SYNTAX", "relationships",
                                       "entries must be {id, type}"));
            continue;
        }
        std::string id = item["id"].get<std::string>();
        std::string type = item["type"].get<std::string>();
        if (graph.entityIds.count(id) > 0 || graph.relIds.count(id) > 0) {
            diags.push_back(graphError("GRAPH-ID-CLASH", id,
                                       "id reused across instances"));
            continue;
        }
        if (!schema.isRelationship(type)) {
            diags.push_back(
                graphError("GRAPH-UNKNOWN-NAME", id, "unknown relationship: " + type));
            continue;
        }
        graph.addRelationship(id, type);
    }

    for (const auto& item : section("attributes")) {
        if (!item.is_object() || !item.contains("owner") || !item["owner"].is_string() ||
            !item.contains("name") || !item["name"].is_string() || !item.contains("value")) {
            diags.push_back(graphError("GRAPH-SYNTAX", "attributes",
                                       "entries must be {owner, name, value}"));
            continue;
        }
        std::string owner = item["owner"].get<std::string>();
        std::string name = item["name"].get<std::string>();
        auto value = valueFromJson(item["value"]);
        if (!value.has_value()) {
            diags.push_back(graphError("GRAPH-SYNTAX", owner,
                                       "value must be a string, number, or boolean"));
            continue;
        }
        if (schema.attributes.count(name) == 0) {
            diags.push_back(
                graphError("GRAPH-UNKNOWN-NAME", owner, "unknown attribute: " + name));
            continue;
        }
        if (graph.entityIds.count(owner) == 0 && graph.relIds.count(owner) == 0) {
            diags.push_back(graphError("GRAPH-BAD-REF", owner,
                                       "attribute fact references unknown id"));
            continue;
        }
        graph.addAttrFact(owner, name, *value);
    }

    for (const auto& item : section("roles")) {
        if (!item.is_object() || !item.contains("rel") || !item["rel"].is_string() ||
            !item.contains("role") || !item["role"].is_string() ||
            !item.contains("target") || !item["target"].is_string()) {
            diags.push_back(graphError("GRAPH-SYNTAX", "roles",
                                       "entries must be {rel, role, target}"));
            continue;
        }
        std::string rel = item["rel"].get<std::string>();
        std::string role = item["role"].get<std::string>();
        std::string target = item["target"].get<std::string>();
        auto owner = schema.ownerOfRole.find(role);
        if (owner == schema.ownerOfRole.end()) {
            diags.push_back(graphError("GRAPH-UNKNOWN-NAME", rel, "unknown role: " + role));
            continue;
        }
        if (graph.relIds.count(rel) == 0) {
            diags.push_back(
                graphError("GRAPH-BAD-REF", rel, "role fact references unknown instance"));
            continue;
        }
        if (graph.relMembership.at(rel) != owner->second.first) {
            diags.push_back(graphError(
                "GRAPH-UNKNOWN-NAME", rel,
                "role " + role + " belongs to " + owner->second.first + ", not " +
                    graph.relMembership.at(rel)));
            continue;
        }
        if (graph.entityIds.count(target) == 0) {
            diags.push_back(
                graphError("GRAPH-BAD-REF", target, "role target is not an entity id"));
            continue;
        }
        graph.addRoleFact(rel, role, target);
    }

    if (hasErrors(diags)) return result;
    result.graph = std::move(graph);
    return result;
}

std::string serializeGraph(const KnowledgeGraph& graph) {
    json doc;
    doc["entities"] = json::array();
    for (const auto& id : graph.entityIds) {
        json types = json::array();
        for (const auto& t : graph.entityMembership.at(id)) types.push_back(t);
        doc["entities"].push_back({{"id", id}, {"types", types}});
    }
    doc["relationships"] = json::array();
    for (const auto& id : graph.relIds) {
        doc["relationships"].push_back({{"id", id}, {"type", graph.relMembership.at(id)}});
    }
    doc["attributes"] = json::array();
    for (const auto& fact : graph.attrFacts) {
        doc["attributes"].push_back(
            {{"owner", fact.owner}, {"name", fact.attribute}, {"value", valueToJson(fact.value)}});
    }
    doc["roles"] = json::array();
    for (const auto& fact : graph.roleFacts) {
        doc["roles"].push_back(
            {{"rel", fact.rel}, {"role", fact.role}, {"target", fact.target}});
    }
    return doc.dump(2) + "\n";
}

} // namespace kger
