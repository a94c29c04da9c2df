#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pgqlite/ddl.hpp"
#include "pgqlite/graph.hpp"
#include "pgqlite/plan.hpp"
#include "pgqlite/relstore.hpp"

namespace pgqlite::bench {

/// Shape of one synthetic social-network dataset. `n_transfers` is the
/// dataset "size"; the remaining cardinalities follow fixed ratios (one
/// person, one account, and one friendship per transfer; one owned account
/// per person) so graph density stays comparable across sizes.
struct DatasetSpec {
    std::size_t n_transfers = 50;
    std::uint64_t seed = 0;

    std::size_t n_persons() const { return n_transfers; }
    std::size_t n_accounts() const { return n_transfers; }
    std::size_t n_friends() const { return n_transfers; }
    std::size_t n_owns() const { return n_persons(); }
};

/// Fixed city pool the generator samples from.
const std::vector<std::string>& city_pool();

/// The empty social-network schema (Person, Account, Own, Friend, Transfer)
/// shared by the demo data, the generator, and the CLI loader.
Database social_schema();

/// The bundled CREATE PROPERTY GRAPH statement for the social schema,
/// byte-identical to ddl/social_graph.ddl, and its parsed form.
const std::string& social_graph_ddl();
const PropertyGraphDef& social_graph_def();

/// Deterministic synthetic dataset: equal specs give bit-identical tables
/// (and therefore bit-identical CSV serializations). Values are sampled
/// uniformly and independently from one seeded PRNG stream: cities over the
/// pool, friendship years over [2000, 2023], transfer amounts over the
/// integers [1, 10000], edge endpoints over the key ranges. Person i owns
/// account 100 + i; friendships and transfers never form self-loops; all
/// foreign keys resolve by construction. Throws InvalidSchemaError when
/// n_transfers < 2 (self-loop-free edges need two endpoints to choose from).
Database generate(const DatasetSpec& spec);

/// Writes the dataset as five CSVs (person.csv, account.csv, own.csv,
/// friend.csv, transfer.csv) plus a manifest.json recording the generation
/// parameters into `dir`, creating directories as needed. Throws IoError on
/// write failure.
void write_bundle(const Database& db, const DatasetSpec& spec, const std::string& dir);

/// One benchmark query: stable id plus full source text.
struct QuerySpec {
    std::string id;
    std::string text;
};

/// The six benchmark queries Q1..Q6, embedded byte-identical to
/// queries/q1.pgq .. queries/q6.pgq (Q1-Q3: bounded friend-triangle
/// patterns; Q4-Q6: unbounded transfer-cycle patterns).
const std::vector<QuerySpec>& corpus();

/// Latency measurement for one (query, backend, dataset) cell.
struct BenchResult {
    std::string query;  // corpus id, e.g. "Q1"
    Backend backend = Backend::Relational;
    std::size_t size = 0;   // n_transfers of the dataset
    double median_ms = 0.0; // median wall-clock time of the timed runs
    std::size_t rows = 0;
};

/// Wall-clock cost of realizing the graph for one dataset size:
/// materialization and the CSR slices of every (edge label, direction).
struct CreationTiming {
    std::size_t size = 0;
    double materialize_ms = 0.0;
    double csr_ms = 0.0;
};

/// "relational" / "graph".
const char* backend_label(Backend backend);

/// Times every query on both backends against one materialized graph.
/// Each query is parsed and lowered once; per backend one discarded warm-up
/// execution is followed by `repetitions` timed execute() calls (clamped to
/// at least one) and the median is reported. Timing wraps execute() only --
/// parsing and lowering stay outside the clock -- and runs are strictly
/// sequential. The two backends must agree on the row count per query;
/// a disagreement throws BackendMismatchError (a correctness failure, not a
/// performance datum). `size` labels the results; `depth_limit` caps the
/// relational backend's closure recursion.
std::vector<BenchResult> run_suite(const MaterializedGraph& g, const PropertyGraphDef& def,
                                   const std::vector<QuerySpec>& queries,
                                   std::size_t repetitions, std::size_t size,
                                   std::size_t depth_limit = 2000);

struct SuiteConfig {
    std::vector<std::size_t> sizes = {50, 100, 150};
    std::uint64_t seed = 1;
    std::size_t repetitions = 5;
    std::size_t depth_limit = 2000;
};

struct SuiteReport {
    SuiteConfig config;
    std::vector<BenchResult> results;     // size-major, corpus order, relational then graph
    std::vector<CreationTiming> creation; // one entry per size, in config order
};

/// Generates one dataset per configured size (all from the same seed), times
/// graph creation, and runs the corpus suite on both backends.
SuiteReport run_full(const SuiteConfig& config);

/// Rendered reports, all UTF-8. Layouts (stable, golden-tested):
///  - ratio_csv: header `size,<q1>,<q2>,...` with one column per distinct
///    query id in first-appearance order, one row per distinct size in
///    first-appearance order; each cell is the relational median divided by
///    the graph median (4 decimal places; medians are clamped to 1e-6 ms so
///    ratios stay finite and positive).
///  - creation_csv: `size,materialize_ms,csr_ms`, one row per size.
///  - results_csv: `query,backend,size,median_ms,rows`, one row per
///    BenchResult in suite order.
///  - markdown: one document with the same three tables.
struct Reports {
    std::string markdown;
    std::string ratio_csv;
    std::string creation_csv;
    std::string results_csv;
};

Reports emit_reports(const SuiteReport& report);

} // namespace pgqlite::bench
