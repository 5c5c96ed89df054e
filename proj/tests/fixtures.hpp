#pragma once

// Shared fixture loading for the test suites.

#include "kger/core.hpp"
#include "kger/text_format.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace kger::test {

inline std::string readFixture(const std::string& name) {
    std::string path = std::string(FIXTURE_DIR) + "/" + name;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("missing fixture: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline Schema loadFixtureSchema(const std::string& name) {
    SchemaParseResult parsed = parseSchema(readFixture(name));
    if (!parsed.ok()) throw std::runtime_error("fixture schema does not parse: " + name);
    return *parsed.schema;
}

inline Schema runningExample() { return loadFixtureSchema("running_example.kger"); }

inline KnowledgeGraph g0() {
    Schema schema = runningExample();
    GraphLoadResult loaded = loadGraph(readFixture("g0.json"), schema);
    if (!loaded.ok()) throw std::runtime_error("fixture graph g0 does not load");
    return *loaded.graph;
}

} // namespace kger::test
