#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "pgqlite/ddl.hpp"
#include "pgqlite/error.hpp"
#include "pgqlite/graph.hpp"
#include "support/fixtures.hpp"

using namespace pgqlite;

namespace {

// Tiny single-label graph: vertex table N(id) with ids 0..n-1, edge table
// E(src, tgt) with the given arcs, label T.
struct TinyGraph {
    Database db;
    PropertyGraphDef def;
    MaterializedGraph graph;
};

TinyGraph tiny_graph(std::size_t n, const std::vector<std::pair<int, int>>& arcs) {
    TinyGraph t;
    t.db.create_table({"N", {{"id", ValueKind::Int, false}}, {"id"}, {}});
    t.db.create_table({"E",
                       {{"src", ValueKind::Int, false}, {"tgt", ValueKind::Int, false}},
                       {},
                       {{{"src"}, "N", {"id"}}, {{"tgt"}, "N", {"id"}}}});
    for (std::size_t i = 0; i < n; ++i)
        t.db.table("N").append_row({Value(static_cast<std::int64_t>(i))}, i + 1);
    for (std::size_t i = 0; i < arcs.size(); ++i)
        t.db.table("E").append_row({Value(static_cast<std::int64_t>(arcs[i].first)),
                                    Value(static_cast<std::int64_t>(arcs[i].second))},
                                   i + 1);
    t.def = parse_ddl("CREATE PROPERTY GRAPH tiny "
                      "VERTEX TABLES (N LABEL Node) "
                      "EDGE TABLES (E SOURCE KEY (src) REFERENCES N (id) "
                      "DESTINATION KEY (tgt) REFERENCES N (id) LABEL T);");
    t.graph = materialize(t.db, t.def);
    return t;
}

} // namespace

TEST_CASE("parse_ddl reads the full social graph definition") {
    PropertyGraphDef def = parse_ddl(fixtures::demo_ddl_text());
    CHECK(def.name == "social_graph");
    REQUIRE(def.vertex_tables.size() == 2);
    REQUIRE(def.edge_tables.size() == 3);

    const auto& person = def.vertex_tables[0];
    CHECK(person.table == "Person");
    CHECK(person.label == "Person");
    CHECK(person.label_quoted);
    CHECK(person.properties == std::vector<std::string>{"pid", "name", "city"});
    CHECK(person.properties_listed);

    const auto& owns = def.edge_tables[1];
    CHECK(owns.table == "Own");
    CHECK(owns.label == "Owns");
    CHECK(!owns.properties_listed); // no PROPERTIES clause: all columns
    CHECK(owns.source.key_columns == std::vector<std::string>{"pid"});
    CHECK(owns.source.ref_table == "Person");
    CHECK(owns.destination.ref_table == "Account");

    const auto& transfer = def.edge_tables[2];
    CHECK(transfer.source.key_columns == std::vector<std::string>{"a_from"});
    CHECK(transfer.destination.key_columns == std::vector<std::string>{"a_to"});
    CHECK(transfer.destination.ref_columns == std::vector<std::string>{"aid"});
}

TEST_CASE("parse_ddl accepts vertices-only graphs and optional clauses") {
    PropertyGraphDef def =
        parse_ddl("CREATE PROPERTY GRAPH g VERTEX TABLES (Person KEY (pid))");
    CHECK(def.edge_tables.empty());
    REQUIRE(def.vertex_tables.size() == 1);
    CHECK(def.vertex_tables[0].key_columns == std::vector<std::string>{"pid"});
    CHECK(def.vertex_tables[0].label == "Person"); // defaults to the table name
    CHECK(!def.vertex_tables[0].label_quoted);
}

TEST_CASE("parse_ddl rejects malformed input") {
    CHECK_THROWS_AS(parse_ddl("CREATE PROPERTY GRAPH g VERTEX TABLES ("), SyntaxError);
    CHECK_THROWS_AS(parse_ddl("CREATE GRAPH g"), SyntaxError);
    CHECK_THROWS_AS(parse_ddl("CREATE PROPERTY GRAPH g VERTEX TABLES (T) extra"), SyntaxError);
    CHECK_THROWS_AS(
        parse_ddl("CREATE PROPERTY GRAPH g VERTEX TABLES (A) EDGE TABLES "
                  "(E SOURCE KEY (s) REFERENCES A (id))"), // missing DESTINATION
        SyntaxError);
}

TEST_CASE("print_ddl round-trips the definition") {
    PropertyGraphDef def = parse_ddl(fixtures::demo_ddl_text());
    CHECK(parse_ddl(print_ddl(def)) == def);

    PropertyGraphDef small =
        parse_ddl("CREATE PROPERTY GRAPH g VERTEX TABLES (T KEY (a) PROPERTIES (a, b))");
    CHECK(parse_ddl(print_ddl(small)) == small);
}

TEST_CASE("materialize builds the demo graph with dense ids") {
    Database db = fixtures::demo_db();
    PropertyGraphDef def = parse_ddl(fixtures::demo_ddl_text());
    MaterializedGraph g = materialize(db, def);

    CHECK(g.node_count() == 10); // 5 persons + 5 accounts
    CHECK(g.edge_count() == 17); // 6 friend + 5 owns + 6 transfer

    // declaration order then row order
    CHECK(g.node_range("Person").first == 0);
    CHECK(g.node_range("Person").count == 5);
    CHECK(g.node_range("Account").first == 5);
    CHECK(g.edge_range("Friend").count == 6);
    CHECK(g.edge_range("Owns").count == 5);
    CHECK(g.edge_range("Transfer").first == 11);

    // Friend row (1,2) connects person nodes 0 and 1
    const EdgeRecord& f0 = g.edges()[g.edge_range("Friend").first];
    CHECK(f0.src == 0);
    CHECK(f0.tgt == 1);
    // Transfer row (101,102) connects account nodes 5 and 6
    const EdgeRecord& t0 = g.edges()[g.edge_range("Transfer").first];
    CHECK(t0.src == 5);
    CHECK(t0.tgt == 6);

    CHECK(g.node_label(0) == "Person");
    CHECK(g.node_label(5) == "Account");
    CHECK(g.node_prop(0, "name").as_text() == "Alice");
    CHECK(g.node_prop(6, "aid").as_int() == 102);
    CHECK(g.edge_prop(static_cast<EdgeId>(g.edge_range("Transfer").first), "amount").as_float() ==
          doctest::Approx(500.0));

    // label lookup is case-insensitive
    CHECK(g.has_node_label("person"));
    CHECK(g.has_edge_label("OWNS"));
    CHECK(!g.has_edge_label("Person"));
}

TEST_CASE("materialize on empty tables yields the empty graph") {
    Database db = fixtures::social_db();
    MaterializedGraph g = materialize(db, parse_ddl(fixtures::demo_ddl_text()));
    CHECK(g.node_count() == 0);
    CHECK(g.edge_count() == 0);
    CHECK(g.csr("Transfer", Direction::Forward).edge_targets.empty());
}

TEST_CASE("materialize rejects dangling edge keys") {
    Database db = fixtures::social_db();
    std::istringstream accounts("101,checking\n");
    db.load_csv("Account", accounts, false);
    std::istringstream transfers("1,101,999,10.0\n");
    db.load_csv("Transfer", transfers, false);
    CHECK_THROWS_AS(materialize(db, parse_ddl(fixtures::demo_ddl_text())), DanglingEdgeKeyError);
}

TEST_CASE("materialize validates the definition against the catalog") {
    Database db = fixtures::demo_db();
    CHECK_THROWS_AS(materialize(db, parse_ddl("CREATE PROPERTY GRAPH g VERTEX TABLES (Nope)")),
                    UnknownTableError);
    CHECK_THROWS_AS(
        materialize(db, parse_ddl("CREATE PROPERTY GRAPH g VERTEX TABLES "
                                  "(Person PROPERTIES (zodiac))")),
        UnknownColumnError);
    CHECK_THROWS_AS(
        materialize(db, parse_ddl("CREATE PROPERTY GRAPH g VERTEX TABLES "
                                  "(Person LABEL L, Account LABEL L)")),
        InvalidSchemaError);
    CHECK_THROWS_AS(
        materialize(db, parse_ddl("CREATE PROPERTY GRAPH g VERTEX TABLES (Person) "
                                  "EDGE TABLES (Transfer SOURCE KEY (a_from) REFERENCES "
                                  "Account (aid) DESTINATION KEY (a_to) REFERENCES "
                                  "Account (aid))")),
        InvalidSchemaError); // Account not declared as a vertex table
}

TEST_CASE("properties are limited to the declared clause") {
    Database db = fixtures::demo_db();
    MaterializedGraph g = materialize(db, parse_ddl(fixtures::demo_ddl_text()));
    CHECK(g.node_has_prop(0, "city"));
    CHECK(!g.node_has_prop(5, "name")); // accounts declare (aid, type) only
    CHECK_THROWS_AS(g.node_prop(5, "name"), UnknownColumnError);
    // Own has no PROPERTIES clause, so every column is exposed
    const auto owns_first = static_cast<EdgeId>(g.edge_range("Owns").first);
    CHECK(g.edge_prop(owns_first, "aid").as_int() == 101);
}

TEST_CASE("build_csr groups and sorts edges by source") {
    TinyGraph t = tiny_graph(3, {{0, 1}, {0, 2}, {2, 0}});
    Csr csr = build_csr(t.graph, "T", Direction::Forward);
    CHECK(csr.vertex_offsets == std::vector<std::uint32_t>{0, 2, 2, 3});
    REQUIRE(csr.edge_targets.size() == 3);
    CHECK(csr.edge_targets[0] == std::make_pair(NodeId{1}, EdgeId{0}));
    CHECK(csr.edge_targets[1] == std::make_pair(NodeId{2}, EdgeId{1}));
    CHECK(csr.edge_targets[2] == std::make_pair(NodeId{0}, EdgeId{2}));
    // node 1 has an empty bucket
    CHECK(csr.vertex_offsets[1] == csr.vertex_offsets[2]);
}

TEST_CASE("build_csr sorts buckets by target then edge id") {
    TinyGraph t = tiny_graph(3, {{0, 2}, {0, 1}, {0, 1}});
    Csr csr = build_csr(t.graph, "T", Direction::Forward);
    CHECK(csr.edge_targets[0] == std::make_pair(NodeId{1}, EdgeId{1}));
    CHECK(csr.edge_targets[1] == std::make_pair(NodeId{1}, EdgeId{2}));
    CHECK(csr.edge_targets[2] == std::make_pair(NodeId{2}, EdgeId{0}));
}

TEST_CASE("backward csr is the transpose") {
    TinyGraph t = tiny_graph(2, {{0, 1}});
    Csr back = build_csr(t.graph, "T", Direction::Backward);
    REQUIRE(back.neighbors(1).size() == 1);
    CHECK(back.neighbors(1)[0].first == 0);
    CHECK(back.neighbors(0).empty());
}

TEST_CASE("csr slices are cached and canonical") {
    TinyGraph t = tiny_graph(3, {{0, 1}, {1, 2}});
    const Csr& a = t.graph.csr("T", Direction::Forward);
    const Csr& b = t.graph.csr("t", Direction::Forward); // case-insensitive label
    CHECK(&a == &b);
    const Csr& c = t.graph.csr("T", Direction::Backward);
    CHECK(&a != &c);
}

TEST_CASE("unknown labels are rejected") {
    TinyGraph t = tiny_graph(2, {{0, 1}});
    CHECK_THROWS_AS(build_csr(t.graph, "Nope", Direction::Forward), UnknownLabelError);
    CHECK_THROWS_AS(build_csr(t.graph, "Node", Direction::Forward), UnknownLabelError);
    CHECK_THROWS_AS(t.graph.node_range("T"), UnknownLabelError);
}

TEST_CASE("materialize and build_csr are deterministic") {
    Database db = fixtures::demo_db();
    PropertyGraphDef def = parse_ddl(fixtures::demo_ddl_text());
    MaterializedGraph g1 = materialize(db, def);
    MaterializedGraph g2 = materialize(db, def);
    REQUIRE(g1.edge_count() == g2.edge_count());
    for (std::size_t e = 0; e < g1.edge_count(); ++e) {
        CHECK(g1.edges()[e].src == g2.edges()[e].src);
        CHECK(g1.edges()[e].tgt == g2.edges()[e].tgt);
    }
    Csr c1 = build_csr(g1, "Transfer", Direction::Forward);
    Csr c2 = build_csr(g2, "Transfer", Direction::Forward);
    CHECK(c1.vertex_offsets == c2.vertex_offsets);
    CHECK(c1.edge_targets == c2.edge_targets);
}

TEST_CASE("csr invariants hold on random graphs") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t n = 1 + rng() % 20;
        std::vector<std::pair<int, int>> arcs;
        const std::size_t m = rng() % 60;
        for (std::size_t i = 0; i < m; ++i)
            arcs.emplace_back(static_cast<int>(rng() % n), static_cast<int>(rng() % n));
        TinyGraph t = tiny_graph(n, arcs);

        for (Direction dir : {Direction::Forward, Direction::Backward}) {
            Csr csr = build_csr(t.graph, "T", dir);
            REQUIRE(csr.vertex_offsets.size() == n + 1);
            CHECK(csr.vertex_offsets.front() == 0);
            CHECK(csr.vertex_offsets.back() == arcs.size());
            std::set<EdgeId> seen;
            for (std::size_t v = 0; v < n; ++v) {
                CHECK(csr.vertex_offsets[v] <= csr.vertex_offsets[v + 1]);
                auto bucket = csr.neighbors(static_cast<NodeId>(v));
                for (std::size_t i = 0; i < bucket.size(); ++i) {
                    if (i) CHECK(bucket[i - 1] <= bucket[i]); // sorted
                    const auto [to, eid] = bucket[i];
                    seen.insert(eid);
                    const EdgeRecord& rec = t.graph.edges()[eid];
                    const NodeId from = dir == Direction::Forward ? rec.src : rec.tgt;
                    const NodeId expect_to = dir == Direction::Forward ? rec.tgt : rec.src;
                    CHECK(from == v);
                    CHECK(expect_to == to);
                }
            }
            CHECK(seen.size() == arcs.size()); // every edge exactly once
        }
    }
}
