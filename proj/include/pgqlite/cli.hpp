#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace pgqlite {

/// Everything the subcommands configure. Flags are long-form only; the
/// `PGQLITE_DEPTH_LIMIT` environment variable supplies depth_limit when the
/// --depth-limit flag is absent.
struct CliConfig {
    std::string data_dir;
    std::string ddl_file;              // empty: use the bundled social-graph DDL
    std::size_t depth_limit = 2000;    // >= 1
    std::string backend = "auto";      // auto | relational | graph
    std::uint64_t seed = 1;            // bench
    std::vector<std::size_t> sizes = {50, 100, 150}; // bench, nonempty
    std::size_t repetitions = 5;       // bench
    std::string format = "table";      // table | csv | json
};

/// Runs one CLI invocation. `args` excludes the program name. Subcommands:
///   load       load the CSV directory and report foreign-key health
///   ddl        parse the graph DDL and summarize the materialized graph
///   query      run a query (--explain prints the plan and backend choice)
///   transpile  print the query's SQL translation
///   bench      generate datasets, run the suite, write reports
/// Exit codes: 0 ok, 1 usage, 2 data error, 3 query error, 4 backend
/// mismatch. Every failure prints a single line starting `error:<category>:`
/// to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace pgqlite
