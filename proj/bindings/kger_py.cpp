// Python bindings for the main toolkit operations. Schemas and graphs are
// opaque handles; reports and diagnostics cross the boundary as plain dicts
// via their structured JSON renderings.

#include "kger/core.hpp"
#include "kger/emitters.hpp"
#include "kger/pattern_engine.hpp"
#include "kger/text_format.hpp"
#include "kger/validator.hpp"
#include "kger/wf.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <functional>
#include <sstream>

namespace py = pybind11;

namespace {

kger::Schema parseSchemaOrThrow(const std::string& source) {
    kger::SchemaParseResult parsed = kger::parseSchema(source);
    if (parsed.ok()) return *parsed.schema;
    std::ostringstream message;
    for (const auto& e : parsed.parseErrors) message << e.message() << "\n";
    for (const auto& d : parsed.buildDiagnostics) {
        message << d.code << ": " << d.message << "\n";
    }
    throw py::value_error(message.str());
}

py::dict diagnosticToDict(const kger::Diagnostic& d) {
    py::dict out;
    out["severity"] = d.isError() ? "error" : "warning";
    out["code"] = d.code;
    out["subject"] = d.subject;
    out["message"] = d.message;
    out["witnesses"] = d.witnesses;
    return out;
}

py::list diagnosticsToList(const std::vector<kger::Diagnostic>& diagnostics) {
    py::list out;
    for (const auto& d : diagnostics) out.append(diagnosticToDict(d));
    return out;
}

py::dict reportToDict(const kger::ValidationReport& report) {
    py::dict out;
    out["conforms"] = report.conforms;
    out["semantics"] = report.semantics == kger::ValidationReport::Semantics::Core
                           ? "core"
                           : "implicit-disjointness";
    out["diagnostics"] = diagnosticsToList(report.diagnostics);
    py::dict stats;
    stats["statements"] = report.stats.statements;
    stats["entityInstances"] = report.stats.entityInstances;
    stats["relationshipInstances"] = report.stats.relationshipInstances;
    stats["attributeFacts"] = report.stats.attributeFacts;
    stats["roleFacts"] = report.stats.roleFacts;
    out["stats"] = stats;
    return out;
}

py::tuple emitterOutputToTuple(const kger::EmitterOutput& out) {
    return py::make_tuple(out.artifact, diagnosticsToList(out.unexpressed));
}

kger::Pattern parsePatternOrThrow(const std::string& text, const kger::Schema& schema) {
    kger::ParseError error;
    auto pattern = kger::parsePattern(text, error);
    if (!pattern.has_value()) throw py::value_error(error.message());
    // Bare leaves parse as attribute leaves; reclassify role names.
    std::function<kger::Pattern(const kger::Pattern&)> resolve =
        [&](const kger::Pattern& p) -> kger::Pattern {
        kger::Pattern out = p;
        if (p.kind == kger::Pattern::Kind::RoleNode) {
            for (auto& child : out.children) child = resolve(child);
        } else if (schema.roles.count(p.name) > 0) {
            out.kind = kger::Pattern::Kind::RoleLeaf;
        }
        return out;
    };
    return resolve(*pattern);
}

py::object tupleElement(const kger::Element& e) {
    if (const auto* id = std::get_if<kger::NodeId>(&e)) return py::cast(id->id);
    const auto& value = std::get<kger::Value>(e);
    switch (value.tag()) {
        case kger::Value::Tag::Boolean:
            return py::cast(value.lexical() == "true");
        case kger::Value::Tag::Integer:
            return py::cast(std::stoll(value.lexical()));
        case kger::Value::Tag::Decimal:
            return py::cast(std::stod(value.lexical()));
        case kger::Value::Tag::Text:
            return py::cast(value.lexical());
    }
    return py::none();
}

} // namespace

PYBIND11_MODULE(_kger, m) {
    m.doc() = "KG-ER conceptual schema toolkit";

    py::class_<kger::Schema>(m, "Schema")
        .def("serialize", &kger::serializeSchema)
        .def("check_well_formed",
             [](const kger::Schema& schema) {
                 return diagnosticsToList(kger::checkWellFormed(schema));
             })
        .def("__eq__",
             [](const kger::Schema& a, const kger::Schema& b) { return a == b; })
        .def("__repr__", [](const kger::Schema& schema) {
            return "<kger.Schema with " +
                   std::to_string(schema.shape.size() + schema.constraints.size()) +
                   " statements>";
        });

    py::class_<kger::KnowledgeGraph>(m, "KnowledgeGraph")
        .def("serialize", &kger::serializeGraph)
        .def("__repr__", [](const kger::KnowledgeGraph& graph) {
            return "<kger.KnowledgeGraph with " + std::to_string(graph.nodeCount()) +
                   " instances>";
        });

    m.def("parse_schema", &parseSchemaOrThrow, py::arg("source"),
          "Parse schema text; raises ValueError on parse or build errors.");
    m.def("serialize_schema", &kger::serializeSchema, py::arg("schema"));
    m.def("check_well_formed", [](const kger::Schema& schema) {
        return diagnosticsToList(kger::checkWellFormed(schema));
    });
    m.def(
        "load_graph",
        [](const std::string& source, const kger::Schema& schema) {
            kger::GraphLoadResult loaded = kger::loadGraph(source, schema);
            if (!loaded.ok()) {
                std::ostringstream message;
                for (const auto& d : loaded.diagnostics) {
                    message << d.code << ": " << d.message << "\n";
                }
                throw py::value_error(message.str());
            }
            return *loaded.graph;
        },
        py::arg("source"), py::arg("schema"));
    m.def(
        "validate_core",
        [](const kger::Schema& schema, const kger::KnowledgeGraph& graph) {
            return reportToDict(kger::validateCore(schema, graph));
        },
        py::arg("schema"), py::arg("graph"));
    m.def(
        "validate_implicit_disjointness",
        [](const kger::Schema& schema, const kger::KnowledgeGraph& graph) {
            return reportToDict(kger::validateImplicitDisjointness(schema, graph));
        },
        py::arg("schema"), py::arg("graph"));
    m.def(
        "eval_pattern",
        [](const kger::Schema& schema, const kger::KnowledgeGraph& graph,
           const std::string& subject, const std::string& pattern,
           const std::string& instance) {
            kger::Pattern p = parsePatternOrThrow(pattern, schema);
            py::list out;
            for (const auto& tuple : kger::evalPattern(schema, graph, subject, p, instance)) {
                py::tuple row(tuple.size());
                for (std::size_t i = 0; i < tuple.size(); ++i) {
                    row[i] = tupleElement(tuple[i]);
                }
                out.append(row);
            }
            return out;
        },
        py::arg("schema"), py::arg("graph"), py::arg("subject"), py::arg("pattern"),
        py::arg("instance"));
    m.def("emit_sql",
          [](const kger::Schema& s) { return emitterOutputToTuple(kger::emitSql(s)); });
    m.def("emit_shacl",
          [](const kger::Schema& s) { return emitterOutputToTuple(kger::emitShacl(s)); });
    m.def("emit_shex",
          [](const kger::Schema& s) { return emitterOutputToTuple(kger::emitShex(s)); });
    m.def("emit_pg_schema",
          [](const kger::Schema& s) { return emitterOutputToTuple(kger::emitPgSchema(s)); });
    m.def("emit_dot", &kger::emitDot, py::arg("schema"));
    m.def("verbalize", &kger::verbalize, py::arg("schema"));
}
