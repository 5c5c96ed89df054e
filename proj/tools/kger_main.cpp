// kger - parse, check, validate, and compile KG-ER schemas.
//
// Subcommands:
//   check      well-formedness of a schema file
//   validate   a graph against a schema (core or implicit-disjointness)
//   compile    a schema to sql | shacl | shex | pgschema | dot
//   verbalize  a schema as English sentences
//
// Exit codes: 0 success/conforms, 1 diagnostics or violations found,
// 2 usage/parse/IO errors. Artifacts and reports go to stdout, diagnostics
// to stderr.

#include "kger/core.hpp"
#include "kger/emitters.hpp"
#include "kger/text_format.hpp"
#include "kger/validator.hpp"
#include "kger/wf.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDiagnostics = 1;
constexpr int kExitUsage = 2;

std::optional<std::string> readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void printDiagnostics(const std::vector<kger::Diagnostic>& diagnostics) {
    for (const auto& d : diagnostics) {
        std::cerr << (d.isError() ? "error" : "warning") << " " << d.code << " ["
                  << d.subject << "]: " << d.message;
        if (!d.witnesses.empty()) {
            std::cerr << " (witnesses:";
            for (const auto& w : d.witnesses) std::cerr << " " << w;
            std::cerr << ")";
        }
        std::cerr << "\n";
    }
}

// Parses a schema file; on failure prints errors and returns nullopt with the
// proper exit code in `exitCode`.
std::optional<kger::Schema> loadSchemaFile(const std::string& path, int& exitCode) {
    auto source = readFile(path);
    if (!source.has_value()) {
        std::cerr << "cannot read " << path << "\n";
        exitCode = kExitUsage;
        return std::nullopt;
    }
    kger::SchemaParseResult parsed = kger::parseSchema(*source);
    if (!parsed.parseErrors.empty()) {
        for (const auto& e : parsed.parseErrors) {
            std::cerr << path << ":" << e.message() << "\n";
        }
        exitCode = kExitUsage;
        return std::nullopt;
    }
    if (!parsed.ok()) {
        printDiagnostics(parsed.buildDiagnostics);
        exitCode = kExitDiagnostics;
        return std::nullopt;
    }
    return parsed.schema;
}

int runCheck(const std::string& schemaPath) {
    int exitCode = kExitOk;
    auto schema = loadSchemaFile(schemaPath, exitCode);
    if (!schema.has_value()) return exitCode;
    auto diagnostics = kger::checkWellFormed(*schema);
    if (diagnostics.empty()) return kExitOk;
    printDiagnostics(diagnostics);
    return kExitDiagnostics;
}

int runValidate(const std::string& schemaPath, const std::string& graphPath,
                const std::string& semantics, bool closeIsa, bool explain,
                const std::string& format) {
    int exitCode = kExitOk;
    auto schema = loadSchemaFile(schemaPath, exitCode);
    if (!schema.has_value()) return exitCode;
    auto wf = kger::checkWellFormed(*schema);
    if (!wf.empty()) {
        printDiagnostics(wf);
        return kExitDiagnostics;
    }

    auto graphSource = readFile(graphPath);
    if (!graphSource.has_value()) {
        std::cerr << "cannot read " << graphPath << "\n";
        return kExitUsage;
    }
    kger::GraphLoadResult loaded = kger::loadGraph(*graphSource, *schema);
    if (!loaded.ok()) {
        bool syntaxOnly = std::all_of(
            loaded.diagnostics.begin(), loaded.diagnostics.end(),
            [](const kger::Diagnostic& d) { return d.code == "GRAPH-SYNTAX"; });
        printDiagnostics(loaded.diagnostics);
        return syntaxOnly ? kExitUsage : kExitDiagnostics;
    }
    kger::KnowledgeGraph graph = *loaded.graph;
    if (closeIsa) graph = kger::closeIsaMemberships(*schema, graph);

    kger::ValidationReport report = semantics == "implicit"
                                        ? kger::validateImplicitDisjointness(*schema, graph)
                                        : kger::validateCore(*schema, graph);

    if (format == "structured") {
        std::cout << report.renderStructured();
    } else {
        std::cout << report.renderText();
    }
    if (explain) {
        std::map<std::string, kger::Statement> bySubject;
        for (const auto& s : schema->shape) {
            bySubject.emplace(kger::render(s), kger::Statement{s});
        }
        for (const auto& c : schema->constraints) {
            bySubject.emplace(kger::render(c), kger::Statement{c});
        }
        for (const auto& d : report.diagnostics) {
            if (!d.isError()) continue;
            std::cout << "explain [" << d.subject << "]\n";
            auto it = bySubject.find(d.subject);
            if (it != bySubject.end()) {
                std::cout << "  clause: "
                          << kger::statementClause(*schema, it->second).render() << "\n";
            } else if (d.subject.rfind("ImplicitDisjoint(", 0) == 0) {
                std::string inner = d.subject.substr(17, d.subject.size() - 18);
                auto comma = inner.find(", ");
                std::cout << "  clause: "
                          << kger::disjointnessClause(inner.substr(0, comma),
                                                      inner.substr(comma + 2))
                                 .render()
                          << "\n";
            } else {
                std::cout << "  clause: (data-model condition)\n";
            }
            if (!d.witnesses.empty()) {
                std::cout << "  witness:";
                for (const auto& w : d.witnesses) std::cout << " " << w;
                std::cout << "\n";
            }
        }
    }
    return report.conforms ? kExitOk : kExitDiagnostics;
}

int runCompile(const std::string& schemaPath, const std::string& target,
               const std::string& outPath) {
    int exitCode = kExitOk;
    auto schema = loadSchemaFile(schemaPath, exitCode);
    if (!schema.has_value()) return exitCode;
    auto wf = kger::checkWellFormed(*schema);
    if (!wf.empty()) {
        printDiagnostics(wf);
        return kExitDiagnostics;
    }

    std::string artifact;
    if (target == "sql") {
        artifact = kger::emitSql(*schema).artifact;
    } else if (target == "shacl") {
        artifact = kger::emitShacl(*schema).artifact;
    } else if (target == "shex") {
        artifact = kger::emitShex(*schema).artifact;
    } else if (target == "pgschema") {
        artifact = kger::emitPgSchema(*schema).artifact;
    } else if (target == "dot") {
        artifact = kger::emitDot(*schema);
    } else {
        std::cerr << "unknown target " << target << "\n";
        return kExitUsage;
    }

    if (outPath.empty() || outPath == "-") {
        std::cout << artifact;
        return kExitOk;
    }
    std::ofstream out(outPath, std::ios::binary);
    if (!out) {
        std::cerr << "cannot write " << outPath << "\n";
        return kExitUsage;
    }
    out << artifact;
    return kExitOk;
}

int runVerbalize(const std::string& schemaPath) {
    int exitCode = kExitOk;
    auto schema = loadSchemaFile(schemaPath, exitCode);
    if (!schema.has_value()) return exitCode;
    // Verbalization is total, so schema fragments still produce text; any
    // well-formedness findings go to stderr and flip the exit code.
    auto wf = kger::checkWellFormed(*schema);
    printDiagnostics(wf);
    std::cout << kger::verbalize(*schema);
    return wf.empty() ? kExitOk : kExitDiagnostics;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"KG-ER schema toolkit"};
    app.require_subcommand(1);

    std::string schemaPath, graphPath, outPath;
    std::string semantics = "core";
    std::string format = "text";
    std::string target;
    bool closeIsa = false;
    bool explain = false;

    auto* check = app.add_subcommand("check", "check schema well-formedness");
    check->add_option("schema", schemaPath, "schema file (.kger)")->required();

    auto* validate = app.add_subcommand("validate", "validate a graph against a schema");
    validate->add_option("--schema", schemaPath, "schema file (.kger)")->required();
    validate->add_option("--graph", graphPath, "graph file (JSON)")->required();
    validate->add_option("--semantics", semantics, "core | implicit")
        ->check(CLI::IsMember({"core", "implicit"}));
    validate->add_flag("--close-isa", closeIsa,
                       "close entity memberships upward along Isa before checking");
    validate->add_flag("--explain", explain, "print the violated clause per diagnostic");
    validate->add_option("--format", format, "text | structured")
        ->check(CLI::IsMember({"text", "structured"}));

    auto* compile = app.add_subcommand("compile", "compile a schema to another formalism");
    compile->add_option("--schema", schemaPath, "schema file (.kger)")->required();
    compile->add_option("--target", target, "sql | shacl | shex | pgschema | dot")
        ->required()
        ->check(CLI::IsMember({"sql", "shacl", "shex", "pgschema", "dot"}));
    compile->add_option("--out", outPath, "output path (default stdout)");

    auto* verbalize = app.add_subcommand("verbalize", "verbalize a schema in English");
    verbalize->add_option("schema", schemaPath, "schema file (.kger)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (check->parsed()) return runCheck(schemaPath);
        if (validate->parsed()) {
            return runValidate(schemaPath, graphPath, semantics, closeIsa, explain, format);
        }
        if (compile->parsed()) return runCompile(schemaPath, target, outPath);
        if (verbalize->parsed()) return runVerbalize(schemaPath);
    } catch (const kger::Error& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
