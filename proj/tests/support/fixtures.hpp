#pragma once

// Shared test fixtures: the social-network schema and the small demo dataset
// checked in under data/demo.

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "pgqlite/bench.hpp"
#include "pgqlite/relstore.hpp"

namespace fixtures {

inline std::string source_dir() {
    const char* env = std::getenv("PGQLITE_SOURCE_DIR");
    return env ? env : ".";
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline pgqlite::Database social_db() { return pgqlite::bench::social_schema(); }

/// social_db() loaded with the data/demo CSVs: 5 persons, 5 accounts,
/// 5 Own + 6 Friend + 6 Transfer rows.
inline pgqlite::Database demo_db() {
    pgqlite::Database db = social_db();
    const std::string base = source_dir() + "/data/demo/";
    for (const char* name : {"person", "account", "own", "friend", "transfer"}) {
        std::ifstream in(base + name + std::string(".csv"));
        if (!in) throw std::runtime_error("cannot open demo csv: " + base + name + ".csv");
        db.load_csv(name, in, true);
    }
    return db;
}

inline std::string demo_ddl_text() {
    return slurp(source_dir() + "/ddl/social_graph.ddl");
}

} // namespace fixtures
