#include <doctest.h>

#include <string>
#include <vector>

#include "pgqlite/ddl.hpp"
#include "pgqlite/error.hpp"
#include "pgqlite/graph.hpp"
#include "pgqlite/pgq_ast.hpp"
#include "pgqlite/planner.hpp"
#include "support/fixtures.hpp"

using namespace pgqlite;

namespace {

const PropertyGraphDef& social_def() {
    static PropertyGraphDef def = parse_ddl(fixtures::demo_ddl_text());
    return def;
}

QueryAst corpus(const std::string& stem) {
    return parse_query(fixtures::slurp(fixtures::source_dir() + "/queries/" + stem + ".pgq"));
}

QueryAst q(const std::string& body) {
    return parse_query("SELECT * FROM GRAPH_TABLE ( social_graph " + body + " );");
}

std::string plan_text(const QueryAst& ast) { return print_plan(lower(ast, social_def())); }

std::size_t count(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1))
        ++n;
    return n;
}

} // namespace

TEST_CASE("lowering: bounded triangle becomes edge scans and natural joins") {
    const std::string text = plan_text(corpus("q1"));
    CHECK(text ==
          "Project x.name, y.name, z.name\n"
          "  HashJoin z=z, x=x\n"
          "    HashJoin y=y\n"
          "      ScanEdges Friend (x)-[f1]->(y)\n"
          "      ScanEdges Friend (y)-[f2]->(z)\n"
          "    ScanEdges Friend (z)-[f3]->(x)\n");
    CHECK_FALSE(plan_has_closure(lower(corpus("q1"), social_def()).root));
}

TEST_CASE("lowering: unbounded cycle probe ends in a traversal closure") {
    const LogicalPlan plan = lower(corpus("q4"), social_def());
    CHECK(print_plan(plan) ==
          "Distinct\n"
          "  Project x.aid\n"
          "    TraverseClosure Transfer y ~>* x (any_shortest, min_hops=1)\n"
          "      HashJoin z=z\n"
          "        ScanEdges Transfer (x)-[t1]->(z)\n"
          "        ScanEdges Transfer (z)-[t2]->(y)\n");
    CHECK(plan_has_closure(plan.root));
    CHECK(plan.vars.at("x") == VarKind::Node);
    CHECK(plan.vars.at("t3") == VarKind::Edge);
}

TEST_CASE("lowering: q5 pushes the WHERE filter below the closure") {
    const std::string text = plan_text(corpus("q5"));
    CHECK(text ==
          "Distinct\n"
          "  Project x.aid\n"
          "    TraverseClosure Transfer y ~>* x (any_shortest, min_hops=1)\n"
          "      Filter px.city <> pz.city\n"
          "        HashJoin z=z\n"
          "          HashJoin x=x\n"
          "            HashJoin z=z\n"
          "              ScanEdges Transfer (x)-[t1]->(z)\n"
          "              ScanEdges Transfer (z)-[t2]->(y)\n"
          "            ScanEdges Owns (px)-[o1]->(x)\n"
          "          ScanEdges Owns (pz)-[o2]->(z)\n");
}

TEST_CASE("lowering: q6 batches both ready conjuncts into one pre-closure filter") {
    const std::string text = plan_text(corpus("q6"));
    CHECK(count(text, "Filter") == 1);
    const auto closure = text.find("TraverseClosure");
    const auto filter = text.find("Filter px.city <> pz.city AND t1.amount > t2.amount");
    REQUIRE(closure != std::string::npos);
    REQUIRE(filter != std::string::npos);
    CHECK(closure < filter); // the filter sits below (is printed after) the closure
}

TEST_CASE("lowering: plans contain a closure exactly for unbounded queries") {
    for (const char* stem : {"q1", "q2", "q3", "q4", "q5", "q6", "q1_common_friend"}) {
        const QueryAst ast = corpus(stem);
        const bool unbounded = classify(ast) == Boundedness::Unbounded;
        CHECK_MESSAGE(plan_has_closure(lower(ast, social_def()).root) == unbounded, stem);
    }
}

TEST_CASE("lowering: isolated labeled node turns into a node scan") {
    CHECK(plan_text(q("MATCH (x:\"Person\") RETURN (x.name)")) ==
          "Project x.name\n"
          "  ScanNodes Person (x)\n");
    // bare RETURN resolves to the node's key property
    CHECK(plan_text(q("MATCH (x:\"Person\") RETURN")) ==
          "Project x.pid\n"
          "  ScanNodes Person (x)\n");
}

TEST_CASE("lowering: unbound star source gets a lazy node scan") {
    CHECK(plan_text(q("MATCH (a:\"Account\") -[t:Transfer]-> *(b:\"Account\") "
                      "RETURN (a.aid, b.aid)")) ==
          "Project a.aid, b.aid\n"
          "  TraverseClosure Transfer a ~>* b (reach, min_hops=1)\n"
          "    ScanNodes Account (a)\n");
}

TEST_CASE("lowering: two stars are fine outside ANY SHORTEST") {
    const std::string text =
        plan_text(q("MATCH (a:\"Account\") -[:Transfer]-> *(b:\"Account\"), "
                    "(b:\"Account\") -[:Transfer]-> *(c:\"Account\") RETURN (a.aid, c.aid)"));
    CHECK(count(text, "TraverseClosure Transfer") == 2);
    CHECK(count(text, "(reach, min_hops=1)") == 2);
}

TEST_CASE("lowering: label filters appear only for claims the scan cannot prove") {
    // x is structurally a Person on both edges; the Account claim needs a filter
    const std::string text =
        plan_text(q("MATCH (x:\"Person\") -[f:Friend]-> (y:\"Person\"), "
                    "(x:\"Account\") -[o:Owns]-> (a:\"Account\") RETURN (y.pid)"));
    CHECK(count(text, "LabelFilter") == 1);
    CHECK(text.find("LabelFilter x:Account") != std::string::npos);

    // fully static claims produce no filters
    CHECK(count(plan_text(corpus("q1")), "LabelFilter") == 0);
}

TEST_CASE("lowering: undirected edge scan keeps both endpoint columns") {
    CHECK(plan_text(q("MATCH (a:\"Person\") -[g:Friend]- (b:\"Person\") RETURN (a.pid, b.pid)")) ==
          "Project a.pid, b.pid\n"
          "  ScanEdges Friend (a)-[g]-(b)\n");
}

TEST_CASE("lowering: self-loop pattern binds a single endpoint column") {
    CHECK(plan_text(q("MATCH (x:\"Person\") -[f:Friend]-> (x:\"Person\") RETURN (x.pid)")) ==
          "Project x.pid\n"
          "  ScanEdges Friend (x)-[f]->(x)\n");
}

TEST_CASE("lowering: error cases") {
    CHECK_THROWS_AS(lower(q("MATCH (x:\"Ghost\") RETURN (x.pid)"), social_def()),
                    UnknownLabelError);
    CHECK_THROWS_AS(lower(q("MATCH (x:\"Person\") -[f]-> (y:\"Person\") RETURN (x.pid)"),
                          social_def()),
                    UnsupportedPatternError);
    CHECK_THROWS_AS(lower(q("MATCH (a:\"Account\") -[t:Transfer]- *(b:\"Account\") "
                            "RETURN (a.aid)"),
                          social_def()),
                    UnsupportedPatternError);
    CHECK_THROWS_AS(
        lower(q("MATCH p = ANY SHORTEST (a:\"Account\") -[:Transfer]-> *(b:\"Account\") "
                "-[:Transfer]-> *(c:\"Account\") RETURN (a.aid)"),
              social_def()),
        UnsupportedPatternError);
    // bare RETURN over an unlabeled variable: no key columns to expand
    CHECK_THROWS_AS(lower(q("MATCH (x) RETURN"), social_def()), UnsupportedPatternError);
}

TEST_CASE("backend choice: closures route to the graph backend") {
    Database db = fixtures::demo_db();
    MaterializedGraph g = materialize(db, social_def());
    const GraphStats stats = collect_stats(g);
    CHECK(stats.node_count == 10);
    CHECK(stats.edges_per_label.at("Friend") == 6);
    CHECK(stats.edges_per_label.at("Owns") == 5);
    CHECK(stats.edges_per_label.at("Transfer") == 6);

    const BackendChoice join_choice = choose_backend(lower(corpus("q1"), social_def()), stats);
    CHECK(join_choice.backend == Backend::Relational);
    CHECK(join_choice.reason == "pure join plan: relational backend (|N|=10, |E|=17)");

    const BackendChoice closure_choice = choose_backend(lower(corpus("q4"), social_def()), stats);
    CHECK(closure_choice.backend == Backend::Graph);
    CHECK(closure_choice.reason ==
          "closure operator present: graph traversal backend (|N|=10, |E|=17)");

    const BackendChoice forced =
        choose_backend(lower(corpus("q4"), social_def()), stats, Backend::Relational);
    CHECK(forced.backend == Backend::Relational);
    CHECK(forced.reason == "user override");
}

TEST_CASE("transpile: bounded triangle becomes a plain three-way self-join") {
    CHECK(transpile_to_sql(corpus("q1"), social_def()) ==
          "SELECT x.name AS \"x.name\", y.name AS \"y.name\", z.name AS \"z.name\"\n"
          "FROM Friend AS f1\n"
          "JOIN Friend AS f2 ON f2.pid1 = f1.pid2\n"
          "JOIN Friend AS f3 ON f3.pid1 = f2.pid2 AND f3.pid2 = f1.pid1\n"
          "JOIN Person AS x ON x.pid = f1.pid1\n"
          "JOIN Person AS y ON y.pid = f1.pid2\n"
          "JOIN Person AS z ON z.pid = f2.pid2;\n");
}

TEST_CASE("transpile: unbounded cycle probe emits a depth-limited recursive CTE") {
    const std::string sql = transpile_to_sql(corpus("q4"), social_def());
    CHECK(sql ==
          "WITH RECURSIVE paths (a_start, a_current, depth) AS (\n"
          "  SELECT a_from, a_to, 1 FROM Transfer\n"
          "  UNION\n"
          "  SELECT p.a_start, t.a_to, p.depth + 1\n"
          "  FROM paths p JOIN Transfer t ON p.a_current = t.a_from\n"
          "  -- Limit recursion depth\n"
          "  WHERE p.depth < 2000 )\n"
          "SELECT DISTINCT t1.a_from AS \"x.aid\"\n"
          "FROM Transfer AS t1\n"
          "JOIN Transfer AS t2 ON t2.a_from = t1.a_to\n"
          "JOIN paths AS p ON p.a_start = t2.a_to AND p.a_current = t1.a_from;\n");
    CHECK(count(sql, "UNION ALL") == 0); // walk dedup, not bag union

    const std::string sql64 = transpile_to_sql(corpus("q4"), social_def(), TranspileOptions{64});
    CHECK(sql64.find("WHERE p.depth < 64") != std::string::npos);
}

TEST_CASE("transpile: q5 joins owners and keeps the city filter in WHERE") {
    const std::string sql = transpile_to_sql(corpus("q5"), social_def());
    CHECK(sql.find("JOIN Own AS o1 ON o1.aid = t1.a_from") != std::string::npos);
    CHECK(sql.find("JOIN Own AS o2 ON o2.aid = t1.a_to") != std::string::npos);
    CHECK(sql.find("JOIN Person AS px ON px.pid = o1.pid") != std::string::npos);
    CHECK(sql.find("JOIN Person AS pz ON pz.pid = o2.pid") != std::string::npos);
    CHECK(sql.find("WHERE px.city <> pz.city;") != std::string::npos);

    const std::string sql6 = transpile_to_sql(corpus("q6"), social_def());
    CHECK(sql6.find("WHERE px.city <> pz.city AND t1.amount > t2.amount;") != std::string::npos);
}

TEST_CASE("transpile: undirected edges read from a symmetrized pairs CTE") {
    const std::string sql = transpile_to_sql(corpus("q1_common_friend"), social_def());
    CHECK(sql ==
          "WITH Friend_pairs AS (\n"
          "  SELECT pid1, pid2, since FROM Friend\n"
          "  UNION ALL\n"
          "  SELECT pid2 AS pid1, pid1 AS pid2, since FROM Friend WHERE pid1 <> pid2 )\n"
          "SELECT DISTINCT f.pid1 AS \"x.pid\", f.pid2 AS \"y.pid\"\n"
          "FROM Friend AS f\n"
          "JOIN Friend_pairs AS f1 ON f1.pid1 = f.pid1\n"
          "JOIN Friend_pairs AS f2 ON f2.pid1 = f.pid2 AND f2.pid2 = f1.pid2;\n");
    CHECK(sql.find("RECURSIVE") == std::string::npos);
}

TEST_CASE("transpile: RECURSIVE appears exactly for unbounded queries") {
    for (const char* stem : {"q1", "q2", "q3", "q4", "q5", "q6", "q1_common_friend"}) {
        const QueryAst ast = corpus(stem);
        const bool unbounded = classify(ast) == Boundedness::Unbounded;
        const std::string sql = transpile_to_sql(ast, social_def());
        CHECK_MESSAGE((sql.find("WITH RECURSIVE") != std::string::npos) == unbounded, stem);
    }
}

TEST_CASE("transpile: unsatisfiable label claims become a constant-false guard") {
    // Transfer endpoints are Accounts, but x claims Person
    const std::string sql = transpile_to_sql(
        q("MATCH (x:\"Person\") -[t:Transfer]-> (y:\"Account\") RETURN (y.aid)"), social_def());
    CHECK(sql.find("1 = 0") != std::string::npos);

    // one variable bound to two different vertex tables
    const std::string sql2 = transpile_to_sql(
        q("MATCH (x:\"Person\") -[f:Friend]-> (y:\"Person\"), "
          "(y:\"Person\") -[t:Transfer]-> (z:\"Account\") RETURN (z.aid)"),
        social_def());
    CHECK(sql2.find("1 = 0") != std::string::npos);
}

TEST_CASE("transpile: property names are checked against the declared lists") {
    CHECK_THROWS_AS(transpile_to_sql(q("MATCH (x:\"Person\") RETURN (x.salary)"), social_def()),
                    UnknownColumnError);
    CHECK_THROWS_AS(
        transpile_to_sql(q("MATCH (x:\"Person\") -[f:Friend]-> (y:\"Person\") "
                           "WHERE f.weight > 1 RETURN (x.pid)"),
                         social_def()),
        UnknownColumnError);
}

TEST_CASE("transpile: repeated edge variable reuses one alias") {
    const std::string sql =
        transpile_to_sql(q("MATCH (x:\"Person\") -[f:Friend]-> (y:\"Person\"), "
                           "(x:\"Person\") -[f:Friend]-> (y:\"Person\") RETURN (x.pid)"),
                         social_def());
    CHECK(count(sql, "Friend AS") == 1);
}

TEST_CASE("transpile: isolated labeled node scans its vertex table directly") {
    CHECK(transpile_to_sql(q("MATCH (x:\"Person\") RETURN (x.name)"), social_def()) ==
          "SELECT x.name AS \"x.name\"\nFROM Person AS x;\n");
    CHECK(transpile_to_sql(q("MATCH (x:\"Person\") RETURN"), social_def()) ==
          "SELECT x.pid AS \"x.pid\"\nFROM Person AS x;\n");
    CHECK_THROWS_AS(transpile_to_sql(q("MATCH (x) RETURN"), social_def()),
                    UnsupportedPatternError);
}

TEST_CASE("transpile: unbound star endpoints bind through the paths CTE") {
    const std::string sql =
        transpile_to_sql(q("MATCH (a:\"Account\") -[t:Transfer]-> *(b:\"Account\") "
                           "RETURN (a.aid, b.aid)"),
                         social_def());
    CHECK(sql.find("SELECT p.a_start AS \"a.aid\", p.a_current AS \"b.aid\"\n"
                   "FROM paths AS p;") != std::string::npos);
}

TEST_CASE("transpile: self-loop and OR predicates keep their grouping") {
    const std::string sql =
        transpile_to_sql(q("MATCH (x:\"Person\") -[f:Friend]-> (x:\"Person\") "
                           "WHERE x.name = 'Ann' OR x.name = 'Bob' RETURN (x.pid)"),
                         social_def());
    CHECK(sql ==
          "SELECT f.pid1 AS \"x.pid\"\n"
          "FROM Friend AS f\n"
          "JOIN Person AS x ON x.pid = f.pid1\n"
          "WHERE (x.name = 'Ann' OR x.name = 'Bob') AND f.pid2 = f.pid1;\n");
}
