#include "kger/emitters.hpp"

#include "emit_common.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace kger {

namespace {

using emit::Analysis;
using emit::WeakLink;

struct SqlColumn {
    std::string name;
    bool notNull = false;
};

struct SqlForeignKey {
    std::vector<std::string> columns;
    std::string table;
    std::vector<std::string> refColumns;
};

struct SqlTable {
    std::string name;
    std::string comment;
    std::vector<SqlColumn> columns;
    std::vector<SqlForeignKey> foreignKeys;
    std::vector<std::string> primaryKey;       // empty = no PK
    std::vector<std::vector<std::string>> uniques;

    bool hasColumn(const std::string& name) const {
        return std::any_of(columns.begin(), columns.end(),
                           [&](const SqlColumn& c) { return c.name == name; });
    }
};

// Column names colliding with the column type keyword are qualified: by the
// identifying role for absorbed weak entities (msg_text), by the owner name
// otherwise.
std::string columnName(const Schema& schema, const Analysis& analysis,
                       const std::string& owner, const std::string& attribute) {
    (void)schema;
    if (attribute != "text") return attribute;
    auto weak = analysis.weakOf.find(owner);
    if (weak != analysis.weakOf.end()) return weak->second.viaRole + "_" + attribute;
    return emit::lowercaseFirst(owner) + "_" + attribute;
}

class SqlEmitter {
public:
    SqlEmitter(const Schema& schema) : schema_(schema), analysis_(emit::analyze(schema)) {}

    EmitterOutput run() {
        emit::reportHierarchyUnexpressed(schema_, output_, "SQL");

        buildEntityTables();
        buildAttrTables();
        buildRelationshipTables();
        applyConstraints();

        std::ostringstream sql;
        bool first = true;
        for (const auto& table : tableOrder()) {
            if (!first) sql << "\n";
            first = false;
            if (tables_.at(table).columns.empty()) {
                sql << "-- " << table << ": no scalar columns in the relational encoding\n";
                continue;
            }
            renderTable(sql, tables_.at(table));
        }
        for (const auto& d : output_.unexpressed) {
            sql << "\n-- UNEXPRESSED: " << d.subject << ": " << d.message;
        }
        if (!output_.unexpressed.empty()) sql << "\n";
        output_.artifact = sql.str();
        return std::move(output_);
    }

private:
    // Identity key columns of an entity's table; empty when the entity has no
    // table-expressible identity.
    std::vector<std::string> identityColumns(const std::string& entity) const {
        std::vector<std::string> out;
        auto weak = analysis_.weakOf.find(entity);
        const IdentityConstraint* id = schema_.identityOf(entity);
        if (id == nullptr) return out;
        if (weak != analysis_.weakOf.end()) {
            const WeakLink& link = weak->second;
            for (const auto& p : id->patterns) {
                if (p.kind == Pattern::Kind::RoleNode) {
                    for (const auto& leaf : link.parentLeaves) {
                        out.push_back(link.parentRole + "_" + leaf);
                    }
                } else {
                    out.push_back(columnName(schema_, analysis_, entity, p.name));
                }
            }
            return out;
        }
        if (!emit::hasFlatAttrIdentity(schema_, entity)) return {};
        for (const auto& p : id->patterns) {
            out.push_back(columnName(schema_, analysis_, entity, p.name));
        }
        return out;
    }

    void buildEntityTables() {
        for (const auto& entity : schema_.entities) {
            SqlTable table;
            table.name = entity;
            auto weak = analysis_.weakOf.find(entity);
            std::vector<std::string> pk = identityColumns(entity);

            for (const auto& col : pk) table.columns.push_back({col, false});
            if (weak != analysis_.weakOf.end()) {
                const WeakLink& link = weak->second;
                table.comment = "Records the " + entity +
                                " entity together with its identifying relationship " +
                                link.relationship + ".";
                SqlForeignKey fk;
                for (const auto& leaf : link.parentLeaves) {
                    fk.columns.push_back(link.parentRole + "_" + leaf);
                }
                fk.table = link.parent;
                fk.refColumns = link.parentLeaves;
                table.foreignKeys.push_back(std::move(fk));
            }

            auto addAttrColumns = [&](const std::string& owner) {
                for (const auto& attr : emit::singleValuedAttrs(schema_, owner)) {
                    std::string col = columnName(schema_, analysis_, owner, attr);
                    if (table.hasColumn(col)) continue;
                    bool notNull = schema_.hasMandatoryAttr(owner, attr);
                    table.columns.push_back({col, notNull});
                }
            };
            addAttrColumns(entity);
            if (weak != analysis_.weakOf.end()) {
                addAttrColumns(weak->second.relationship); // absorbed attributes
            }

            table.primaryKey = pk;
            tables_[table.name] = std::move(table);
            entityTables_.push_back(entity);
        }
    }

    void buildAttrTables() {
        // One table per set-valued attribute, keyed by the owner's identity.
        for (const auto& [attr, owner] : schema_.ownerOfAttr) {
            if (emit::isSingleValued(schema_, owner, attr)) continue;
            std::string ownerTable = owner;
            auto absorbed = analysis_.absorbedRel.find(owner);
            if (absorbed != analysis_.absorbedRel.end()) ownerTable = absorbed->second;
            // Relationship owners get their values keyed the same way once
            // the relationship table exists; resolve the key columns lazily
            // in applyConstraints-time order by storing the request.
            attrTableRequests_.push_back({attr, owner, ownerTable});
        }
    }

    void buildRelationshipTables() {
        for (const auto& rel : schema_.relationships) {
            if (analysis_.absorbedRel.count(rel) > 0) continue;
            SqlTable table;
            table.name = emit::capitalize(rel);
            std::vector<std::string> missingRoles;

            for (const auto& role : emit::orderedRoles(schema_, rel)) {
                const std::string& filler = schema_.ownerOfRole.at(role).second;
                std::vector<std::string> fillerKey = identityColumns(filler);
                if (fillerKey.empty()) {
                    missingRoles.push_back(role);
                    continue;
                }
                SqlForeignKey fk;
                for (const auto& col : fillerKey) {
                    std::string local = role + "_" + col;
                    table.columns.push_back({local, false});
                    fk.columns.push_back(local);
                }
                fk.table = filler;
                fk.refColumns = fillerKey;
                roleColumns_[{rel, role}] = fk.columns;
                table.foreignKeys.push_back(std::move(fk));
            }
            for (const auto& attr : emit::singleValuedAttrs(schema_, rel)) {
                std::string col = columnName(schema_, analysis_, rel, attr);
                table.columns.push_back({col, schema_.hasMandatoryAttr(rel, attr)});
            }
            if (!missingRoles.empty()) {
                table.comment = "Roles without an identity-keyed participant are omitted:";
                for (const auto& r : missingRoles) table.comment += " " + r;
            }
            tables_[table.name] = std::move(table);
            relTables_.push_back(rel);
        }
    }

    // Maps one key/identity pattern of `subject` onto columns of `table`.
    std::optional<std::vector<std::string>> mapPattern(const std::string& subject,
                                                       const Pattern& p) const {
        bool entitySubject = schema_.isEntity(subject);
        auto weak = analysis_.weakOf.find(subject);
        switch (p.kind) {
            case Pattern::Kind::AttrLeaf: {
                auto owner = schema_.ownerOfAttr.find(p.name);
                if (owner == schema_.ownerOfAttr.end()) return std::nullopt;
                // Absorbed-relationship attributes live on the weak table.
                if (owner->second != subject &&
                    !(weak != analysis_.weakOf.end() &&
                      owner->second == weak->second.relationship)) {
                    return std::nullopt;
                }
                if (!emit::isSingleValued(schema_, owner->second, p.name)) {
                    return std::nullopt;
                }
                return std::vector<std::string>{
                    columnName(schema_, analysis_, owner->second, p.name)};
            }
            case Pattern::Kind::RoleLeaf: {
                if (entitySubject) return std::nullopt;
                auto it = roleColumns_.find({subject, p.name});
                if (it == roleColumns_.end()) return std::nullopt;
                return it->second;
            }
            case Pattern::Kind::RoleNode: {
                if (entitySubject) {
                    // Only the weak-entity navigation shape maps to columns.
                    if (weak == analysis_.weakOf.end()) return std::nullopt;
                    const WeakLink& link = weak->second;
                    const IdentityConstraint* id = schema_.identityOf(subject);
                    if (id == nullptr || link.navIndex >= id->patterns.size()) {
                        return std::nullopt;
                    }
                    if (!(p == id->patterns[link.navIndex])) return std::nullopt;
                    std::vector<std::string> out;
                    for (const auto& leaf : link.parentLeaves) {
                        out.push_back(link.parentRole + "_" + leaf);
                    }
                    return out;
                }
                if (!emit::navigatesFullIdentity(schema_, p)) return std::nullopt;
                auto it = roleColumns_.find({subject, p.name});
                if (it == roleColumns_.end()) return std::nullopt;
                return it->second;
            }
        }
        return std::nullopt;
    }

    // Maps a pattern of an absorbed relationship onto the weak table.
    std::optional<std::vector<std::string>> mapAbsorbedPattern(const WeakLink& link,
                                                               const Pattern& p) const {
        switch (p.kind) {
            case Pattern::Kind::AttrLeaf: {
                auto owner = schema_.ownerOfAttr.find(p.name);
                if (owner == schema_.ownerOfAttr.end() ||
                    owner->second != link.relationship ||
                    !emit::isSingleValued(schema_, link.relationship, p.name)) {
                    return std::nullopt;
                }
                return std::vector<std::string>{
                    columnName(schema_, analysis_, link.relationship, p.name)};
            }
            case Pattern::Kind::RoleLeaf:
                return std::nullopt;
            case Pattern::Kind::RoleNode: {
                if (p.name == link.parentRole) {
                    const IdentityConstraint* parentId = schema_.identityOf(link.parent);
                    if (parentId == nullptr || p.children != parentId->patterns) {
                        return std::nullopt;
                    }
                    std::vector<std::string> out;
                    for (const auto& leaf : link.parentLeaves) {
                        out.push_back(link.parentRole + "_" + leaf);
                    }
                    return out;
                }
                if (p.name == link.viaRole) {
                    // Navigation back into the weak entity's own columns.
                    std::vector<std::string> out;
                    for (const auto& child : p.children) {
                        if (child.kind != Pattern::Kind::AttrLeaf) return std::nullopt;
                        auto owner = schema_.ownerOfAttr.find(child.name);
                        if (owner == schema_.ownerOfAttr.end() ||
                            owner->second != link.entity ||
                            !emit::isSingleValued(schema_, link.entity, child.name)) {
                            return std::nullopt;
                        }
                        out.push_back(columnName(schema_, analysis_, link.entity, child.name));
                    }
                    return out;
                }
                return std::nullopt;
            }
        }
        return std::nullopt;
    }

    std::optional<std::vector<std::string>> mapPatternList(
        const std::string& subject, const std::vector<Pattern>& patterns) const {
        std::vector<std::string> out;
        auto absorbed = analysis_.absorbedRel.find(subject);
        for (const auto& p : patterns) {
            std::optional<std::vector<std::string>> cols =
                absorbed != analysis_.absorbedRel.end()
                    ? mapAbsorbedPattern(analysis_.weakOf.at(absorbed->second), p)
                    : mapPattern(subject, p);
            if (!cols.has_value()) return std::nullopt;
            out.insert(out.end(), cols->begin(), cols->end());
        }
        return out;
    }

    std::string tableOf(const std::string& subject) const {
        if (schema_.isEntity(subject)) return subject;
        auto absorbed = analysis_.absorbedRel.find(subject);
        if (absorbed != analysis_.absorbedRel.end()) return absorbed->second;
        return emit::capitalize(subject);
    }

    void applyConstraints() {
        // Relationship primary keys first: attribute tables of
        // relationship-owned attributes are keyed by them.
        for (const auto& rel : relTables_) {
            const IdentityConstraint* id = schema_.identityOf(rel);
            if (id == nullptr) continue; // flagged by the checker, not here
            auto cols = mapPatternList(rel, id->patterns);
            SqlTable& table = tables_.at(emit::capitalize(rel));
            if (cols.has_value()) {
                table.primaryKey = *cols;
                expressed(IdentityConstraint{rel, id->patterns});
            } else {
                output_.unexpressed.push_back(emit::unexpressed(
                    ConstraintStatement{IdentityConstraint{rel, id->patterns}},
                    "identity navigates beyond the relational encoding"));
            }
        }

        for (const auto& request : attrTableRequests_) {
            SqlTable table;
            table.name = emit::capitalize(request.attr) + "s";
            std::string valueColumn =
                columnName(schema_, analysis_, request.owner, request.attr);
            table.columns.push_back({valueColumn, false});
            table.comment = "Set-valued attribute " + request.attr + " of " + request.owner + ".";
            std::vector<std::string> ownerKey;
            if (schema_.isEntity(request.ownerTable)) {
                ownerKey = identityColumns(request.ownerTable);
            } else if (tables_.count(emit::capitalize(request.ownerTable)) > 0) {
                ownerKey = tables_.at(emit::capitalize(request.ownerTable)).primaryKey;
            }
            if (!ownerKey.empty()) {
                SqlForeignKey fk;
                for (const auto& col : ownerKey) {
                    table.columns.push_back({col, false});
                    fk.columns.push_back(col);
                }
                fk.table = tableOf(request.owner);
                fk.refColumns = ownerKey;
                table.foreignKeys.push_back(std::move(fk));
                table.primaryKey.push_back(valueColumn);
                table.primaryKey.insert(table.primaryKey.end(), ownerKey.begin(),
                                        ownerKey.end());
            }
            attrTableOf_[request.attr] = table.name;
            attrValueColumn_[request.attr] = valueColumn;
            attrTables_.push_back(table.name);
            tables_[table.name] = std::move(table);
        }

        for (const auto& c : schema_.constraints) {
            applyConstraint(c);
        }
    }

    void applyConstraint(const ConstraintStatement& c) {
        if (std::holds_alternative<IsaConstraint>(c) ||
            std::holds_alternative<DisjointConstraint>(c) ||
            std::holds_alternative<CoverConstraint>(c)) {
            return; // already reported by reportHierarchyUnexpressed
        }
        if (const auto* single = std::get_if<SingleAttr>(&c)) {
            // Single-valued attributes are scalar columns by construction.
            expressed(c);
            (void)single;
            return;
        }
        if (const auto* mandatory = std::get_if<MandatoryAttr>(&c)) {
            if (emit::isSingleValued(schema_, mandatory->owner, mandatory->attribute)) {
                expressed(c); // NOT NULL or primary-key membership
            } else {
                output_.unexpressed.push_back(emit::unexpressed(
                    c, "mandatory set-valued attributes need a row-existence check"));
            }
            return;
        }
        if (const auto* single = std::get_if<SingleRole>(&c)) {
            applySingleRole(c, *single);
            return;
        }
        if (const auto* mandatory = std::get_if<MandatoryRole>(&c)) {
            auto absorbed = analysis_.absorbedRel.find(mandatory->relationship);
            if (absorbed != analysis_.absorbedRel.end() &&
                analysis_.weakOf.at(absorbed->second).viaRole == mandatory->role) {
                expressed(c); // absorbed into the weak entity's row
            } else {
                output_.unexpressed.push_back(emit::unexpressed(
                    c, "mandatory participation needs an inclusion dependency"));
            }
            return;
        }
        if (const auto* key = std::get_if<KeyConstraint>(&c)) {
            applyKey(c, *key);
            return;
        }
        if (const auto* id = std::get_if<IdentityConstraint>(&c)) {
            applyIdentity(c, *id);
            return;
        }
    }

    void applySingleRole(const ConstraintStatement& c, const SingleRole& single) {
        auto absorbed = analysis_.absorbedRel.find(single.relationship);
        if (absorbed != analysis_.absorbedRel.end()) {
            const WeakLink& link = analysis_.weakOf.at(absorbed->second);
            if (single.role == link.viaRole) {
                expressed(c); // one row per weak instance
                return;
            }
            if (single.role == link.parentRole) {
                std::vector<std::string> cols;
                for (const auto& leaf : link.parentLeaves) {
                    cols.push_back(link.parentRole + "_" + leaf);
                }
                addUnique(tables_.at(link.entity), cols);
                expressed(c);
                return;
            }
        }
        auto it = roleColumns_.find({single.relationship, single.role});
        if (it != roleColumns_.end()) {
            addUnique(tables_.at(emit::capitalize(single.relationship)), it->second);
            expressed(c);
            return;
        }
        output_.unexpressed.push_back(
            emit::unexpressed(c, "participation bound outside the relational encoding"));
    }

    void applyKey(const ConstraintStatement& c, const KeyConstraint& key) {
        // A key on a lone set-valued attribute becomes UNIQUE on its table.
        if (key.patterns.size() == 1 &&
            key.patterns.front().kind == Pattern::Kind::AttrLeaf) {
            const std::string& attr = key.patterns.front().name;
            auto tableIt = attrTableOf_.find(attr);
            if (tableIt != attrTableOf_.end()) {
                addUnique(tables_.at(tableIt->second), {attrValueColumn_.at(attr)});
                expressed(c);
                return;
            }
        }
        auto cols = mapPatternList(key.subject, key.patterns);
        if (cols.has_value()) {
            SqlTable& table = tables_.at(tableOf(key.subject));
            if (table.primaryKey != *cols) addUnique(table, *cols);
            expressed(c);
            return;
        }
        output_.unexpressed.push_back(
            emit::unexpressed(c, "key navigates beyond the relational encoding"));
    }

    void applyIdentity(const ConstraintStatement& c, const IdentityConstraint& id) {
        if (schema_.isEntity(id.subject)) {
            const IdentityConstraint* first = schema_.identityOf(id.subject);
            if (first == nullptr || !(first->patterns == id.patterns)) {
                output_.unexpressed.push_back(emit::unexpressed(
                    c, "only the first identity of a subject becomes the primary key"));
                return;
            }
            std::vector<std::string> pk = identityColumns(id.subject);
            if (!pk.empty()) {
                expressed(c); // PRIMARY KEY of the entity table
                return;
            }
            output_.unexpressed.push_back(
                emit::unexpressed(c, "identity navigates beyond the relational encoding"));
            return;
        }
        auto absorbed = analysis_.absorbedRel.find(id.subject);
        if (absorbed != analysis_.absorbedRel.end()) {
            auto cols = mapPatternList(id.subject, id.patterns);
            const SqlTable& table = tables_.at(absorbed->second);
            if (cols.has_value()) {
                std::set<std::string> mapped(cols->begin(), cols->end());
                std::set<std::string> pk(table.primaryKey.begin(), table.primaryKey.end());
                if (mapped == pk) {
                    expressed(c); // coincides with the absorbing table's key
                    return;
                }
            }
            output_.unexpressed.push_back(emit::unexpressed(
                c, "identity differs from the absorbing table's primary key"));
            return;
        }
        // Non-absorbed relationships: the first identity became the primary
        // key with the table; extra ones are out of scope.
        const IdentityConstraint* first = schema_.identityOf(id.subject);
        if (first != nullptr && first->patterns == id.patterns) return;
        output_.unexpressed.push_back(emit::unexpressed(
            c, "only the first identity of a subject becomes the primary key"));
    }

    void expressed(const ConstraintStatement& c) {
        output_.expressed.push_back(render(c));
    }

    void addUnique(SqlTable& table, const std::vector<std::string>& cols) {
        if (std::find(table.uniques.begin(), table.uniques.end(), cols) ==
            table.uniques.end()) {
            table.uniques.push_back(cols);
        }
    }

    std::vector<std::string> tableOrder() const {
        std::vector<std::string> order;
        std::vector<std::string> strong, weak;
        for (const auto& e : entityTables_) {
            (analysis_.weakOf.count(e) > 0 ? weak : strong).push_back(e);
        }
        order.insert(order.end(), strong.begin(), strong.end());
        order.insert(order.end(), weak.begin(), weak.end());
        std::vector<std::string> attrs = attrTables_;
        std::sort(attrs.begin(), attrs.end());
        order.insert(order.end(), attrs.begin(), attrs.end());
        std::vector<std::string> rels;
        for (const auto& r : relTables_) rels.push_back(emit::capitalize(r));
        std::sort(rels.begin(), rels.end());
        order.insert(order.end(), rels.begin(), rels.end());
        return order;
    }

    void renderTable(std::ostringstream& out, const SqlTable& table) const {
        if (!table.comment.empty()) out << "-- " << table.comment << "\n";
        out << "CREATE TABLE " << table.name << "(\n";
        std::vector<std::string> lines;
        for (const auto& col : table.columns) {
            lines.push_back("    " + col.name + " text" + (col.notNull ? " NOT NULL" : ""));
        }
        auto joined = [](const std::vector<std::string>& cols) {
            std::string out;
            for (std::size_t i = 0; i < cols.size(); ++i) {
                if (i > 0) out += ", ";
                out += cols[i];
            }
            return out;
        };
        for (const auto& fk : table.foreignKeys) {
            lines.push_back("    FOREIGN KEY (" + joined(fk.columns) + ") REFERENCES " +
                            fk.table + "(" + joined(fk.refColumns) + ")");
        }
        if (!table.primaryKey.empty()) {
            lines.push_back("    PRIMARY KEY (" + joined(table.primaryKey) + ")");
        }
        for (const auto& unique : table.uniques) {
            lines.push_back("    UNIQUE (" + joined(unique) + ")");
        }
        for (std::size_t i = 0; i < lines.size(); ++i) {
            out << lines[i] << (i + 1 < lines.size() ? "," : "") << "\n";
        }
        out << ");\n";
    }

    struct AttrTableRequest {
        std::string attr;
        std::string owner;
        std::string ownerTable;
    };

    const Schema& schema_;
    Analysis analysis_;
    EmitterOutput output_;
    std::map<std::string, SqlTable> tables_;
    std::vector<std::string> entityTables_;
    std::vector<std::string> relTables_; // relationship names (not table names)
    std::vector<std::string> attrTables_;
    std::vector<AttrTableRequest> attrTableRequests_;
    std::map<std::pair<std::string, std::string>, std::vector<std::string>> roleColumns_;
    std::map<std::string, std::string> attrTableOf_;
    std::map<std::string, std::string> attrValueColumn_;
};

} // namespace

EmitterOutput emitSql(const Schema& schema) { return SqlEmitter(schema).run(); }

} // namespace kger
