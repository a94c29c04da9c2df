#include <doctest.h>

#include <sstream>

#include "pgqlite/csv.hpp"
#include "pgqlite/error.hpp"
#include "pgqlite/relstore.hpp"
#include "support/fixtures.hpp"

using namespace pgqlite;

TEST_CASE("value comparisons promote int/float and reject cross-kind") {
    CHECK(Value(std::int64_t{2}).compare(Value(2.0)) == 0);
    CHECK(Value(std::int64_t{2}).compare(Value(std::int64_t{3})) == -1);
    CHECK(Value(3.5).compare(Value(std::int64_t{3})) == 1);
    CHECK_THROWS_AS((void)Value("abc").compare(Value(std::int64_t{1})), TypeError);
    CHECK_THROWS_AS((void)Value(true).compare(Value(std::int64_t{1})), TypeError);
}

TEST_CASE("null compares as unknown, never a match") {
    CHECK(!Value::null().compare(Value(std::int64_t{1})).has_value());
    CHECK(!Value(std::int64_t{1}).equals(Value::null()).has_value());
    CHECK(!Value::null().equals(Value::null()).has_value());
}

TEST_CASE("identity distinguishes kinds that compare equal") {
    CHECK(Value(std::int64_t{2}).equals(Value(2.0)) == true);
    CHECK(!Value(std::int64_t{2}).identical(Value(2.0)));
    CHECK(Value("x").identical(Value("x")));
}

TEST_CASE("parse_value enforces column kinds") {
    CHECK(parse_value("42", ValueKind::Int).as_int() == 42);
    CHECK(parse_value("4.25", ValueKind::Float).as_float() == doctest::Approx(4.25));
    CHECK(parse_value("true", ValueKind::Bool).as_bool());
    CHECK_THROWS_AS(parse_value("abc", ValueKind::Int), TypeError);
    CHECK_THROWS_AS(parse_value("12x", ValueKind::Int), TypeError);
}

TEST_CASE("csv reader handles quoting, escapes, and embedded newlines") {
    std::istringstream in("a,\"b,c\",\"say \"\"hi\"\"\"\r\n\"multi\nline\",,x\n");
    auto rec1 = csv::read_record(in);
    REQUIRE(rec1);
    REQUIRE(rec1->size() == 3);
    CHECK((*rec1)[0].text == "a");
    CHECK((*rec1)[1].text == "b,c");
    CHECK((*rec1)[2].text == "say \"hi\"");
    auto rec2 = csv::read_record(in);
    REQUIRE(rec2);
    REQUIRE(rec2->size() == 3);
    CHECK((*rec2)[0].text == "multi\nline");
    CHECK((*rec2)[1].text.empty());
    CHECK(!(*rec2)[1].quoted);
    CHECK(!csv::read_record(in));
}

TEST_CASE("csv writer round-trips tricky fields") {
    std::ostringstream out;
    csv::write_record(out, {{"plain", false}, {"a,b", false}, {"q\"q", false}, {"", true}});
    std::istringstream in(out.str());
    auto rec = csv::read_record(in);
    REQUIRE(rec);
    CHECK((*rec)[0].text == "plain");
    CHECK((*rec)[1].text == "a,b");
    CHECK((*rec)[2].text == "q\"q");
    CHECK((*rec)[3].quoted);
    CHECK((*rec)[3].text.empty());
}

TEST_CASE("create_table registers empty tables and rejects duplicates") {
    Database db;
    db.create_table({"Person",
                     {{"pid", ValueKind::Int, false},
                      {"name", ValueKind::Text, false},
                      {"city", ValueKind::Text, false}},
                     {"pid"},
                     {}});
    CHECK(db.table("Person").row_count() == 0);
    CHECK(db.has_table("person")); // lookup is case-insensitive
    CHECK(db.table("PERSON").schema().name == "Person");
    CHECK_THROWS_AS(db.create_table({"person", {{"pid", ValueKind::Int, false}}, {}, {}}),
                    DuplicateTableError);
}

TEST_CASE("transfer schema carries two foreign keys into account") {
    Database db = fixtures::social_db();
    const auto& fks = db.table("Transfer").schema().foreign_keys;
    REQUIRE(fks.size() == 2);
    CHECK(fks[0].columns == std::vector<std::string>{"a_from"});
    CHECK(fks[0].target_table == "Account");
    CHECK(fks[1].columns == std::vector<std::string>{"a_to"});
}

TEST_CASE("schema validation rejects bad references") {
    Database db;
    // PK column that does not exist
    CHECK_THROWS_AS(db.create_table({"T", {{"a", ValueKind::Int, false}}, {"b"}, {}}),
                    InvalidSchemaError);
    // duplicate column names (case-insensitive)
    CHECK_THROWS_AS(
        db.create_table({"T", {{"a", ValueKind::Int, false}, {"A", ValueKind::Int, false}}, {}, {}}),
        InvalidSchemaError);
    // FK against a missing table
    CHECK_THROWS_AS(db.create_table({"T",
                                     {{"a", ValueKind::Int, false}},
                                     {},
                                     {{{"a"}, "Nowhere", {"id"}}}}),
                    InvalidSchemaError);
    // FK must reference the target's primary key
    db.create_table({"U", {{"id", ValueKind::Int, false}, {"x", ValueKind::Int, false}}, {"id"}, {}});
    CHECK_THROWS_AS(db.create_table({"T",
                                     {{"a", ValueKind::Int, false}},
                                     {},
                                     {{{"a"}, "U", {"x"}}}}),
                    InvalidSchemaError);
}

TEST_CASE("load_csv appends parsed rows") {
    Database db = fixtures::social_db();
    std::istringstream in("pid,name,city\n1,Alice,Oslo\n2,Bob,Bergen\n3,Carol,Oslo\n");
    db.load_csv("Person", in, true);
    const Table& t = db.table("Person");
    CHECK(t.row_count() == 3);
    CHECK(t.at(1, 1).as_text() == "Bob");
    CHECK(t.at(2, 0).as_int() == 3);
}

TEST_CASE("load_csv reports parse, arity, and key errors with row numbers") {
    SUBCASE("non-numeric text into an int column") {
        Database db = fixtures::social_db();
        std::istringstream in("1,Alice,Oslo\nabc,Bob,Bergen\n");
        try {
            db.load_csv("Person", in, false);
            FAIL("expected CsvParseError");
        } catch (const CsvParseError& e) {
            CHECK(e.row == 2);
            CHECK(e.column == 1);
        }
    }
    SUBCASE("duplicate primary key") {
        Database db = fixtures::social_db();
        std::istringstream in("1,Alice,Oslo\n1,Bob,Bergen\n");
        CHECK_THROWS_AS(db.load_csv("Person", in, false), DuplicatePrimaryKeyError);
    }
    SUBCASE("wrong field count") {
        Database db = fixtures::social_db();
        std::istringstream in("1,Alice\n");
        CHECK_THROWS_AS(db.load_csv("Person", in, false), ArityMismatchError);
    }
    SUBCASE("null into non-nullable column") {
        Database db = fixtures::social_db();
        std::istringstream in("1,,Oslo\n");
        CHECK_THROWS_AS(db.load_csv("Person", in, false), NullInNonNullableError);
    }
    SUBCASE("header must match schema") {
        Database db = fixtures::social_db();
        std::istringstream in("pid,fullname,city\n");
        CHECK_THROWS_AS(db.load_csv("Person", in, true), CsvParseError);
    }
}

TEST_CASE("nullable columns accept empty fields as null") {
    Database db;
    db.create_table({"T",
                     {{"id", ValueKind::Int, false}, {"note", ValueKind::Text, true}},
                     {"id"},
                     {}});
    std::istringstream in("1,\n2,\"\"\n");
    db.load_csv("T", in, false);
    CHECK(db.table("T").at(0, 1).is_null());
    CHECK(db.table("T").at(1, 1).as_text().empty()); // quoted empty is a string
}

TEST_CASE("validate_foreign_keys flags dangling keys only") {
    Database db = fixtures::social_db();
    CHECK(db.validate_foreign_keys().empty()); // empty db is vacuously consistent

    std::istringstream accounts("101,checking\n102,savings\n");
    db.load_csv("Account", accounts, false);
    std::istringstream transfers("1,101,102,10.0\n2,101,9,20.0\n");
    db.load_csv("Transfer", transfers, false);

    auto violations = db.validate_foreign_keys();
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].table == "Transfer");
    CHECK(violations[0].row == 1);
    CHECK(violations[0].fk_index == 1); // the a_to FK
    CHECK(violations[0].missing_key == "(9)");
}

TEST_CASE("demo dataset loads clean and round-trips through csv") {
    Database db = fixtures::demo_db();
    CHECK(db.table("Person").row_count() == 5);
    CHECK(db.table("Account").row_count() == 5);
    CHECK(db.table("Own").row_count() == 5);
    CHECK(db.table("Friend").row_count() == 6);
    CHECK(db.table("Transfer").row_count() == 6);
    CHECK(db.validate_foreign_keys().empty());

    for (const auto& name : db.table_names()) {
        std::ostringstream out;
        db.write_csv(name, out);

        Database copy = fixtures::social_db();
        std::istringstream in(out.str());
        copy.load_csv(name, in, true);

        const Table& a = db.table(name);
        const Table& b = copy.table(name);
        REQUIRE(b.row_count() == a.row_count());
        for (std::size_t r = 0; r < a.row_count(); ++r)
            for (std::size_t c = 0; c < a.schema().columns.size(); ++c)
                CHECK(a.at(r, c).identical(b.at(r, c)));
    }
}

TEST_CASE("table_names preserves creation order") {
    Database db = fixtures::social_db();
    CHECK(db.table_names() ==
          std::vector<std::string>{"Person", "Account", "Own", "Friend", "Transfer"});
}
