#include "pgqlite/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pgqlite/bench.hpp"
#include "pgqlite/csv.hpp"
#include "pgqlite/ddl.hpp"
#include "pgqlite/error.hpp"
#include "pgqlite/exec.hpp"
#include "pgqlite/graph.hpp"
#include "pgqlite/pgq_ast.hpp"
#include "pgqlite/planner.hpp"
#include "pgqlite/relstore.hpp"

namespace pgqlite {

namespace {

namespace fs = std::filesystem;

class UsageError : public Error {
public:
    explicit UsageError(const std::string& message) : Error("usage", message) {}
};

int exit_code_for(const std::string& category) {
    if (category == "usage") return 1;
    if (category == "data" || category == "io") return 2;
    if (category == "mismatch") return 4;
    return 3; // syntax, query, unbound, unsupported, type
}

constexpr std::pair<const char*, const char*> kCsvFiles[] = {
    {"Person", "person.csv"}, {"Account", "account.csv"},   {"Own", "own.csv"},
    {"Friend", "friend.csv"}, {"Transfer", "transfer.csv"},
};

Database load_social(const std::string& dir) {
    Database db = bench::social_schema();
    for (const auto& [table, file] : kCsvFiles) {
        const fs::path path = fs::path(dir) / file;
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot open " + path.string());
        db.load_csv(table, in, true);
    }
    return db;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    if (!out) throw IoError("write failed for " + path.string());
}

PropertyGraphDef load_def(const CliConfig& config) {
    if (config.ddl_file.empty()) return bench::social_graph_def();
    return parse_ddl(slurp(config.ddl_file));
}

std::optional<Backend> forced_backend(const CliConfig& config) {
    if (config.backend == "relational") return Backend::Relational;
    if (config.backend == "graph") return Backend::Graph;
    return std::nullopt; // auto
}

std::string query_source(const std::string& text, const std::string& file) {
    if (!text.empty()) return text;
    if (!file.empty()) return slurp(file);
    throw UsageError("provide a query: positional text or --query-file");
}

// ---- result rendering -------------------------------------------------------

void render_table(const ResultTable& t, std::ostream& out) {
    std::vector<std::size_t> widths;
    widths.reserve(t.columns.size());
    for (const auto& name : t.columns) widths.push_back(name.size());
    std::vector<std::vector<std::string>> cells;
    cells.reserve(t.rows.size());
    for (const auto& row : t.rows) {
        std::vector<std::string> line;
        line.reserve(row.size());
        for (std::size_t c = 0; c < row.size(); ++c) {
            line.push_back(row[c].to_string());
            widths[c] = std::max(widths[c], line.back().size());
        }
        cells.push_back(std::move(line));
    }

    auto emit = [&](const std::vector<std::string>& line) {
        std::string rendered;
        for (std::size_t c = 0; c < line.size(); ++c) {
            if (c) rendered += " | ";
            rendered += line[c];
            if (c + 1 < line.size()) rendered.append(widths[c] - line[c].size(), ' ');
        }
        out << rendered << '\n';
    };

    emit(t.columns);
    std::string rule;
    for (std::size_t c = 0; c < widths.size(); ++c) {
        if (c) rule += "-+-";
        rule.append(widths[c], '-');
    }
    out << rule << '\n';
    for (const auto& line : cells) emit(line);
    out << '(' << t.rows.size() << (t.rows.size() == 1 ? " row)" : " rows)") << '\n';
}

void render_csv(const ResultTable& t, std::ostream& out) {
    std::vector<csv::Field> header;
    header.reserve(t.columns.size());
    for (const auto& name : t.columns) header.push_back({name, false});
    csv::write_record(out, header);
    for (const auto& row : t.rows) {
        std::vector<csv::Field> rec;
        rec.reserve(row.size());
        for (const auto& v : row) {
            const std::string text = v.is_null() ? "" : v.to_string();
            rec.push_back({text, v.kind() == ValueKind::Text && text.empty()});
        }
        csv::write_record(out, rec);
    }
}

nlohmann::json value_to_json(const Value& v) {
    switch (v.kind()) {
        case ValueKind::Null: return nullptr;
        case ValueKind::Bool: return v.as_bool();
        case ValueKind::Int: return v.as_int();
        case ValueKind::Float: return v.as_float();
        default: return v.as_text();
    }
}

void render_json(const ResultTable& t, std::ostream& out) {
    nlohmann::json doc;
    doc["version"] = 1;
    doc["columns"] = t.columns;
    auto rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        auto line = nlohmann::json::array();
        for (const auto& v : row) line.push_back(value_to_json(v));
        rows.push_back(std::move(line));
    }
    doc["rows"] = std::move(rows);
    out << doc.dump(2) << '\n';
}

void render(const ResultTable& t, const std::string& format, std::ostream& out) {
    if (format == "csv")
        render_csv(t, out);
    else if (format == "json")
        render_json(t, out);
    else
        render_table(t, out);
}

// ---- subcommands ------------------------------------------------------------

int cmd_load(const CliConfig& config, std::ostream& out, std::ostream& err) {
    const Database db = load_social(config.data_dir);
    const auto violations = db.validate_foreign_keys();
    out << db.table_names().size() << " tables loaded, " << violations.size()
        << " FK violations\n";
    for (const auto& v : violations)
        out << "  " << v.table << " row " << v.row << ": missing " << v.missing_key << '\n';
    if (violations.empty()) return 0;
    err << "error:data: " << violations.size() << " foreign-key violations\n";
    return 2;
}

int cmd_ddl(const CliConfig& config, std::ostream& out) {
    const Database db = load_social(config.data_dir);
    const PropertyGraphDef def = load_def(config);
    const MaterializedGraph g = materialize(db, def);
    out << "graph " << g.name() << ": |N|=" << g.node_count() << ", |E|=" << g.edge_count()
        << '\n';
    for (const auto& label : g.labels()) {
        if (g.has_node_label(label))
            out << "  vertex " << label << ": " << g.node_range(label).count << '\n';
        else
            out << "  edge " << label << ": " << g.edge_range(label).count << '\n';
    }
    return 0;
}

int cmd_query(const CliConfig& config, const std::string& text_arg, const std::string& file_arg,
              bool explain, std::ostream& out) {
    const std::string text = query_source(text_arg, file_arg);
    const Database db = load_social(config.data_dir);
    const PropertyGraphDef def = load_def(config);
    const MaterializedGraph g = materialize(db, def);

    const QueryAst ast = parse_query(text);
    const LogicalPlan plan = lower(ast, def);
    const BackendChoice choice = choose_backend(plan, collect_stats(g), forced_backend(config));

    if (explain) {
        out << print_plan(plan);
        out << "backend: " << bench::backend_label(choice.backend) << " -- " << choice.reason
            << '\n';
        return 0;
    }

    const ResultTable result = execute(plan, g, {choice.backend, config.depth_limit});
    render(result, config.format, out);
    return 0;
}

int cmd_transpile(const CliConfig& config, const std::string& text_arg,
                  const std::string& file_arg, std::ostream& out) {
    const std::string text = query_source(text_arg, file_arg);
    const PropertyGraphDef def = load_def(config);
    out << transpile_to_sql(parse_query(text), def, {config.depth_limit});
    return 0;
}

int cmd_bench(const CliConfig& config, const std::string& out_dir, const std::string& dump_dir,
              std::ostream& out) {
    if (config.sizes.empty()) throw UsageError("bench: --sizes must name at least one size");
    for (const std::size_t size : config.sizes)
        if (size < 2)
            throw UsageError("bench: sizes must be at least 2 (got " + std::to_string(size) +
                             ")");

    if (!dump_dir.empty()) {
        for (const std::size_t size : config.sizes) {
            const bench::DatasetSpec spec{size, config.seed};
            const fs::path dir = fs::path(dump_dir) / ("size_" + std::to_string(size));
            bench::write_bundle(bench::generate(spec), spec, dir.string());
            out << "dataset bundle written to " << dir.string() << '\n';
        }
    }

    const bench::SuiteConfig suite{config.sizes, config.seed, config.repetitions,
                                   config.depth_limit};
    const bench::SuiteReport report = bench::run_full(suite);
    const bench::Reports reports = bench::emit_reports(report);

    write_file(fs::path(out_dir) / "report.md", reports.markdown);
    write_file(fs::path(out_dir) / "ratios.csv", reports.ratio_csv);
    write_file(fs::path(out_dir) / "creation.csv", reports.creation_csv);
    write_file(fs::path(out_dir) / "results.csv", reports.results_csv);

    out << reports.markdown;
    out << "reports written to " << out_dir
        << " (report.md, ratios.csv, creation.csv, results.csv)\n";
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"pgqlite: graph pattern queries over in-memory relational tables"};
    app.name("pgqlite");
    app.require_subcommand(1);

    CliConfig config;
    std::string query_text;
    std::string query_file;
    std::string out_dir = "bench_out";
    std::string dump_dir;
    bool explain = false;

    const auto add_data = [&](CLI::App* cmd) {
        cmd->add_option("--data", config.data_dir, "Directory holding the five schema CSVs")
            ->required();
    };
    const auto add_ddl = [&](CLI::App* cmd) {
        cmd->add_option("--ddl", config.ddl_file,
                        "CREATE PROPERTY GRAPH file (default: the bundled social graph)");
    };
    const auto add_depth = [&](CLI::App* cmd) {
        cmd->add_option("--depth-limit", config.depth_limit,
                        "Recursion cap for relational closures (>= 1)")
            ->check(CLI::PositiveNumber)
            ->envname("PGQLITE_DEPTH_LIMIT");
    };
    const auto add_query_source = [&](CLI::App* cmd) {
        CLI::Option* text = cmd->add_option("text", query_text, "Query text");
        CLI::Option* file =
            cmd->add_option("--query-file", query_file, "Read the query from a file");
        text->excludes(file);
    };

    CLI::App* load = app.add_subcommand("load", "Load a CSV directory and check foreign keys");
    add_data(load);

    CLI::App* ddl =
        app.add_subcommand("ddl", "Parse graph DDL and summarize the materialized graph");
    add_data(ddl);
    add_ddl(ddl);

    CLI::App* query = app.add_subcommand("query", "Run a graph query");
    add_data(query);
    add_ddl(query);
    add_depth(query);
    add_query_source(query);
    query->add_option("--backend", config.backend, "Execution backend")
        ->check(CLI::IsMember({"auto", "relational", "graph"}));
    query->add_option("--format", config.format, "Result rendering")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    query->add_flag("--explain", explain,
                    "Print the logical plan and backend choice instead of executing");

    CLI::App* transpile = app.add_subcommand("transpile", "Translate a graph query to SQL");
    add_ddl(transpile);
    add_depth(transpile);
    add_query_source(transpile);

    CLI::App* bench_cmd =
        app.add_subcommand("bench", "Generate datasets, run the suite, write reports");
    bench_cmd->add_option("--seed", config.seed, "Dataset generator seed");
    bench_cmd->add_option("--sizes", config.sizes, "Dataset sizes (transfer counts)")
        ->delimiter(',');
    bench_cmd->add_option("--repetitions", config.repetitions, "Timed runs per (query, backend)")
        ->check(CLI::PositiveNumber);
    add_depth(bench_cmd);
    bench_cmd->add_option("--out", out_dir, "Report directory");
    bench_cmd->add_option("--dump-data", dump_dir, "Also write each dataset bundle below here");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err); // --help and friends
    } catch (const CLI::ParseError& e) {
        err << "error:usage: " << e.what() << '\n';
        return 1;
    }

    try {
        if (load->parsed()) return cmd_load(config, out, err);
        if (ddl->parsed()) return cmd_ddl(config, out);
        if (query->parsed()) return cmd_query(config, query_text, query_file, explain, out);
        if (transpile->parsed()) return cmd_transpile(config, query_text, query_file, out);
        return cmd_bench(config, out_dir, dump_dir, out);
    } catch (const Error& e) {
        err << "error:" << e.category() << ": " << e.what() << '\n';
        return exit_code_for(e.category());
    }
}

} // namespace pgqlite
