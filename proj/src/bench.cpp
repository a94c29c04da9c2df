#include "pgqlite/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "pgqlite/error.hpp"
#include "pgqlite/exec.hpp"
#include "pgqlite/pgq_ast.hpp"
#include "pgqlite/planner.hpp"

namespace pgqlite::bench {

namespace {

/// Seeded uniform integer source. The modulo mapping is pinned here instead
/// of std::uniform_int_distribution, whose output is implementation-defined;
/// the slight modulo bias is irrelevant for benchmark data, bit-stability is
/// not.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(engine_() % span);
    }

private:
    std::mt19937_64 engine_;
};

constexpr std::int64_t kAccountBase = 100; // aid = kAccountBase + ordinal
constexpr std::int64_t kAmountMin = 1;
constexpr std::int64_t kAmountMax = 10000;
constexpr std::int64_t kSinceMin = 2000;
constexpr std::int64_t kSinceMax = 2023;

} // namespace

const std::vector<std::string>& city_pool() {
    static const std::vector<std::string> pool = {"Oslo", "Bergen", "Trondheim", "Stavanger",
                                                  "Tromso"};
    return pool;
}

Database social_schema() {
    Database db;
    db.create_table({"Person",
                     {{"pid", ValueKind::Int, false},
                      {"name", ValueKind::Text, false},
                      {"city", ValueKind::Text, false}},
                     {"pid"},
                     {}});
    db.create_table({"Account",
                     {{"aid", ValueKind::Int, false}, {"type", ValueKind::Text, false}},
                     {"aid"},
                     {}});
    db.create_table({"Own",
                     {{"pid", ValueKind::Int, false}, {"aid", ValueKind::Int, false}},
                     {},
                     {{{"pid"}, "Person", {"pid"}}, {{"aid"}, "Account", {"aid"}}}});
    db.create_table({"Friend",
                     {{"pid1", ValueKind::Int, false},
                      {"pid2", ValueKind::Int, false},
                      {"since", ValueKind::Int, false}},
                     {},
                     {{{"pid1"}, "Person", {"pid"}}, {{"pid2"}, "Person", {"pid"}}}});
    db.create_table({"Transfer",
                     {{"tid", ValueKind::Int, false},
                      {"a_from", ValueKind::Int, false},
                      {"a_to", ValueKind::Int, false},
                      {"amount", ValueKind::Float, false}},
                     {"tid"},
                     {{{"a_from"}, "Account", {"aid"}}, {{"a_to"}, "Account", {"aid"}}}});
    return db;
}

const std::string& social_graph_ddl() {
    static const std::string ddl = R"ddl(CREATE PROPERTY GRAPH social_graph
    VERTEX TABLES (
        Person
          PROPERTIES (pid, name, city)
          LABEL "Person",
        Account
          PROPERTIES (aid, type)
          LABEL "Account"
    )
    EDGE TABLES (
        Friend
          SOURCE KEY (pid1) REFERENCES Person (pid)
          DESTINATION KEY (pid2) REFERENCES Person (pid)
          PROPERTIES (since)
          LABEL "Friend",
        Own
          SOURCE KEY (pid) REFERENCES Person (pid)
          DESTINATION KEY (aid) REFERENCES Account (aid)
          LABEL "Owns",
        Transfer
          SOURCE KEY (a_from) REFERENCES Account (aid)
          DESTINATION KEY (a_to) REFERENCES Account (aid)
          PROPERTIES (amount)
          LABEL "Transfer"
    );
)ddl";
    return ddl;
}

const PropertyGraphDef& social_graph_def() {
    static const PropertyGraphDef def = parse_ddl(social_graph_ddl());
    return def;
}

Database generate(const DatasetSpec& spec) {
    if (spec.n_transfers < 2)
        throw InvalidSchemaError("dataset size must be at least 2 (self-loop-free edges need "
                                 "two endpoints to choose from)");

    Database db = social_schema();
    Rng rng(spec.seed);
    const auto persons = static_cast<std::int64_t>(spec.n_persons());
    const auto accounts = static_cast<std::int64_t>(spec.n_accounts());
    const auto cities = static_cast<std::int64_t>(city_pool().size());

    Table& person = db.table("Person");
    for (std::int64_t pid = 1; pid <= persons; ++pid) {
        const std::string& city = city_pool()[static_cast<std::size_t>(rng.uniform(0, cities - 1))];
        person.append_row({Value(pid), Value("p" + std::to_string(pid)), Value(city)},
                          static_cast<std::size_t>(pid));
    }

    Table& account = db.table("Account");
    for (std::int64_t i = 1; i <= accounts; ++i) {
        const char* type = rng.uniform(0, 1) == 0 ? "checking" : "savings";
        account.append_row({Value(kAccountBase + i), Value(type)}, static_cast<std::size_t>(i));
    }

    Table& own = db.table("Own");
    for (std::int64_t pid = 1; pid <= persons; ++pid)
        own.append_row({Value(pid), Value(kAccountBase + pid)}, static_cast<std::size_t>(pid));

    Table& friend_tbl = db.table("Friend");
    for (std::size_t i = 1; i <= spec.n_friends(); ++i) {
        std::int64_t pid1 = 0, pid2 = 0;
        do {
            pid1 = rng.uniform(1, persons);
            pid2 = rng.uniform(1, persons);
        } while (pid1 == pid2);
        friend_tbl.append_row({Value(pid1), Value(pid2), Value(rng.uniform(kSinceMin, kSinceMax))},
                              i);
    }

    Table& transfer = db.table("Transfer");
    for (std::size_t tid = 1; tid <= spec.n_transfers; ++tid) {
        std::int64_t from = 0, to = 0;
        do {
            from = kAccountBase + rng.uniform(1, accounts);
            to = kAccountBase + rng.uniform(1, accounts);
        } while (from == to);
        const auto amount = static_cast<double>(rng.uniform(kAmountMin, kAmountMax));
        transfer.append_row(
            {Value(static_cast<std::int64_t>(tid)), Value(from), Value(to), Value(amount)}, tid);
    }

    return db;
}

void write_bundle(const Database& db, const DatasetSpec& spec, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());

    static const std::vector<std::pair<std::string, std::string>> files = {
        {"Person", "person.csv"},
        {"Account", "account.csv"},
        {"Own", "own.csv"},
        {"Friend", "friend.csv"},
        {"Transfer", "transfer.csv"},
    };
    for (const auto& [table, file] : files) {
        const fs::path path = fs::path(dir) / file;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write " + path.string());
        db.write_csv(table, out);
        if (!out) throw IoError("write failed for " + path.string());
    }

    nlohmann::json manifest = {
        {"version", 1},
        {"seed", spec.seed},
        {"n_transfers", spec.n_transfers},
        {"n_persons", spec.n_persons()},
        {"n_accounts", spec.n_accounts()},
        {"n_friends", spec.n_friends()},
        {"n_owns", spec.n_owns()},
        {"city_pool", city_pool()},
        {"files", nlohmann::json::object()},
    };
    for (const auto& [table, file] : files) manifest["files"][table] = file;

    const fs::path manifest_path = fs::path(dir) / "manifest.json";
    std::ofstream out(manifest_path, std::ios::binary);
    if (!out) throw IoError("cannot write " + manifest_path.string());
    out << manifest.dump(2) << '\n';
}

const std::vector<QuerySpec>& corpus() {
    static const std::vector<QuerySpec> queries = {
        {"Q1", R"pgq(SELECT *
FROM GRAPH_TABLE (
  social_graph
  MATCH
    (x:"Person") -[f1:Friend]-> (y:"Person"),
    (y:"Person") -[f2:Friend]-> (z:"Person"),
    (z:"Person") -[f3:Friend]-> (x:"Person")
  RETURN (x.name, y.name, z.name); );
)pgq"},
        {"Q2", R"pgq(SELECT *
FROM GRAPH_TABLE (
  social_graph
  MATCH
    (x:"Person") -[f1:Friend]-> (y:"Person"),
    (y:"Person") -[f2:Friend]-> (z:"Person"),
    (z:"Person") -[f3:Friend]-> (x:"Person"),
    (x:"Person") -[:Owns]-> (ax:"Account"),
    (y:"Person") -[:Owns]-> (ay:"Account"),
    (z:"Person") -[:Owns]-> (az:"Account"),
    (ax:"Account") -[t1:Transfer]-> (ay:"Account"),
    (ay:"Account") -[t2:Transfer]-> (az:"Account"),
    (az:"Account") -[t3:Transfer]-> (ax:"Account")
  RETURN (x.name, y.name, z.name); );
)pgq"},
        {"Q3", R"pgq(SELECT *
FROM GRAPH_TABLE (
  social_graph
  MATCH
    (x:"Person") -[f1:Friend]-> (y:"Person"),
    (y:"Person") -[f2:Friend]-> (z:"Person"),
    (z:"Person") -[f3:Friend]-> (x:"Person"),
    (x:"Person") -[:Owns]-> (ax:"Account"),
    (y:"Person") -[:Owns]-> (ay:"Account"),
    (z:"Person") -[:Owns]-> (az:"Account"),
    (ax:"Account") -[t1:Transfer]-> (ay:"Account"),
    (ay:"Account") -[t2:Transfer]-> (az:"Account"),
    (az:"Account") -[t3:Transfer]-> (ax:"Account")
  WHERE
    x.city = y.city AND x.city != z.city
                    AND t1.amount > t2.amount
  RETURN (x.name, y.name, z.name); );
)pgq"},
        {"Q4", R"pgq(SELECT *
FROM GRAPH_TABLE (
  social_graph
  MATCH p = ANY SHORTEST
    (x:"Account") -[t1:Transfer]-> (z:"Account")
                  -[t2:Transfer]-> (y:"Account")
                  -[t3:Transfer]-> *(x:"Account")
  RETURN DISTINCT (x.aid); );
)pgq"},
        {"Q5", R"pgq(SELECT *
FROM GRAPH_TABLE (
  social_graph
  MATCH p = ANY SHORTEST
    (x:"Account") -[t1:Transfer]-> (z:"Account")
                  -[t2:Transfer]-> (y:"Account")
                  -[t3:Transfer]-> *(x:"Account"),
    (px:"Person") -[o1:Owns]-> (x:"Account"),
    (pz:"Person") -[o2:Owns]-> (z:"Account")
  WHERE px.city <> pz.city
  RETURN DISTINCT (x.aid); );
)pgq"},
        {"Q6", R"pgq(SELECT *
FROM GRAPH_TABLE (
  social_graph
  MATCH p = ANY SHORTEST
    (x:"Account") -[t1:Transfer]-> (z:"Account")
                  -[t2:Transfer]-> (y:"Account")
                  -[t3:Transfer]-> *(x:"Account"),
    (px:"Person") -[o1:Owns]-> (x:"Account"),
    (pz:"Person") -[o2:Owns]-> (z:"Account")
  WHERE px.city <> pz.city AND t1.amount > t2.amount
  RETURN DISTINCT (x.aid); );
)pgq"},
    };
    return queries;
}

const char* backend_label(Backend backend) {
    return backend == Backend::Relational ? "relational" : "graph";
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start, Clock::time_point stop) {
    return std::chrono::duration<double, std::milli>(stop - start).count();
}

double timed_execute(const LogicalPlan& plan, const MaterializedGraph& g, const ExecOptions& opts,
                     std::size_t& rows_out) {
    const auto start = Clock::now();
    const ResultTable result = execute(plan, g, opts);
    const auto stop = Clock::now();
    rows_out = result.rows.size();
    return elapsed_ms(start, stop);
}

double median_of(std::vector<double> samples) {
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    return n % 2 ? samples[n / 2] : (samples[n / 2 - 1] + samples[n / 2]) / 2.0;
}

std::string fmt4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

} // namespace

std::vector<BenchResult> run_suite(const MaterializedGraph& g, const PropertyGraphDef& def,
                                   const std::vector<QuerySpec>& queries,
                                   std::size_t repetitions, std::size_t size,
                                   std::size_t depth_limit) {
    if (repetitions == 0) repetitions = 1;

    std::vector<BenchResult> out;
    out.reserve(queries.size() * 2);
    for (const auto& q : queries) {
        const QueryAst ast = parse_query(q.text);
        const LogicalPlan plan = lower(ast, def);

        BenchResult per_backend[2];
        for (const Backend backend : {Backend::Relational, Backend::Graph}) {
            const ExecOptions opts{backend, depth_limit};
            std::size_t rows = 0;
            timed_execute(plan, g, opts, rows); // warm-up, discarded

            std::vector<double> samples;
            samples.reserve(repetitions);
            for (std::size_t r = 0; r < repetitions; ++r)
                samples.push_back(timed_execute(plan, g, opts, rows));

            per_backend[backend == Backend::Graph] = {q.id, backend, size, median_of(samples),
                                                      rows};
        }

        if (per_backend[0].rows != per_backend[1].rows)
            throw BackendMismatchError(q.id, per_backend[0].rows, per_backend[1].rows);
        out.push_back(per_backend[0]);
        out.push_back(per_backend[1]);
    }
    return out;
}

SuiteReport run_full(const SuiteConfig& config) {
    SuiteReport report;
    report.config = config;
    const PropertyGraphDef& def = social_graph_def();

    for (const std::size_t size : config.sizes) {
        const Database db = generate({size, config.seed});

        const auto t0 = Clock::now();
        const MaterializedGraph g = materialize(db, def);
        const auto t1 = Clock::now();
        for (const auto& edge : def.edge_tables) {
            g.csr(edge.label, Direction::Forward);
            g.csr(edge.label, Direction::Backward);
        }
        const auto t2 = Clock::now();
        report.creation.push_back({size, elapsed_ms(t0, t1), elapsed_ms(t1, t2)});

        auto results =
            run_suite(g, def, corpus(), config.repetitions, size, config.depth_limit);
        report.results.insert(report.results.end(), results.begin(), results.end());
    }
    return report;
}

namespace {

/// Distinct values in first-appearance order.
template <typename T, typename Get>
std::vector<T> appearance_order(const std::vector<BenchResult>& results, Get get) {
    std::vector<T> out;
    for (const auto& r : results)
        if (std::find(out.begin(), out.end(), get(r)) == out.end()) out.push_back(get(r));
    return out;
}

const BenchResult* find_result(const std::vector<BenchResult>& results, const std::string& query,
                               std::size_t size, Backend backend) {
    for (const auto& r : results)
        if (r.query == query && r.size == size && r.backend == backend) return &r;
    return nullptr;
}

double ratio_of(const BenchResult& rel, const BenchResult& graph) {
    constexpr double kFloorMs = 1e-6; // keeps ratios finite at timer resolution
    return std::max(rel.median_ms, kFloorMs) / std::max(graph.median_ms, kFloorMs);
}

std::string markdown_rule(std::size_t columns) {
    std::string rule = "|";
    for (std::size_t i = 0; i < columns; ++i) rule += "---:|";
    return rule + "\n";
}

} // namespace

Reports emit_reports(const SuiteReport& report) {
    const auto& results = report.results;
    const auto sizes =
        appearance_order<std::size_t>(results, [](const BenchResult& r) { return r.size; });
    const auto queries =
        appearance_order<std::string>(results, [](const BenchResult& r) { return r.query; });

    Reports out;

    // ratio grid: rows = sizes, columns = queries
    std::ostringstream ratio_csv;
    std::ostringstream ratio_md;
    ratio_csv << "size";
    ratio_md << "| size |";
    for (const auto& q : queries) {
        ratio_csv << ',' << q;
        ratio_md << ' ' << q << " |";
    }
    ratio_csv << '\n';
    ratio_md << '\n' << markdown_rule(queries.size() + 1);
    for (const std::size_t size : sizes) {
        ratio_csv << size;
        ratio_md << "| " << size << " |";
        for (const auto& q : queries) {
            const BenchResult* rel = find_result(results, q, size, Backend::Relational);
            const BenchResult* graph = find_result(results, q, size, Backend::Graph);
            const std::string cell = rel && graph ? fmt4(ratio_of(*rel, *graph)) : "";
            ratio_csv << ',' << cell;
            ratio_md << ' ' << cell << " |";
        }
        ratio_csv << '\n';
        ratio_md << '\n';
    }
    out.ratio_csv = ratio_csv.str();

    // creation latency: one row per size
    std::ostringstream creation_csv;
    std::ostringstream creation_md;
    creation_csv << "size,materialize_ms,csr_ms\n";
    creation_md << "| size | materialize (ms) | csr build (ms) |\n" << markdown_rule(3);
    for (const auto& c : report.creation) {
        creation_csv << c.size << ',' << fmt4(c.materialize_ms) << ',' << fmt4(c.csr_ms) << '\n';
        creation_md << "| " << c.size << " | " << fmt4(c.materialize_ms) << " | " << fmt4(c.csr_ms)
                    << " |\n";
    }
    out.creation_csv = creation_csv.str();

    // raw results: one row per BenchResult
    std::ostringstream results_csv;
    std::ostringstream results_md;
    results_csv << "query,backend,size,median_ms,rows\n";
    results_md << "| query | backend | size | median (ms) | rows |\n" << markdown_rule(5);
    for (const auto& r : results) {
        results_csv << r.query << ',' << backend_label(r.backend) << ',' << r.size << ','
                    << fmt4(r.median_ms) << ',' << r.rows << '\n';
        results_md << "| " << r.query << " | " << backend_label(r.backend) << " | " << r.size
                   << " | " << fmt4(r.median_ms) << " | " << r.rows << " |\n";
    }
    out.results_csv = results_csv.str();

    std::ostringstream md;
    md << "# pgqlite benchmark report\n\n"
       << "- seed: " << report.config.seed << "\n"
       << "- repetitions: " << report.config.repetitions
       << " timed runs per (query, backend) after one discarded warm-up; medians reported\n"
       << "- depth limit: " << report.config.depth_limit << "\n"
       << "- timer: std::chrono::steady_clock around execute() only; milliseconds\n\n"
       << "## Latency ratio (relational / graph)\n\n"
       << "Each cell divides the relational backend's median latency by the graph backend's;\n"
       << "a value greater than 1 means the graph backend answered faster.\n\n"
       << ratio_md.str() << '\n'
       << "## Graph creation latency\n\n"
       << creation_md.str() << '\n'
       << "## Raw results\n\n"
       << results_md.str();
    out.markdown = md.str();

    return out;
}

} // namespace pgqlite::bench
