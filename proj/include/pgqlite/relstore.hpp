#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pgqlite/value.hpp"

namespace pgqlite {

struct ColumnSchema {
    std::string name;
    ValueKind kind = ValueKind::Text;
    bool nullable = false;
};

struct ForeignKey {
    std::vector<std::string> columns;        // local columns
    std::string target_table;                // must have a primary key
    std::vector<std::string> target_columns; // must equal the target's PK
};

struct TableSchema {
    std::string name;
    std::vector<ColumnSchema> columns;
    std::vector<std::string> primary_key; // possibly empty
    std::vector<ForeignKey> foreign_keys;

    std::optional<std::size_t> column_index(const std::string& name) const;
};

/// Composite key value, hashed for PK/FK lookup. Key matching is exact-kind.
struct KeyTuple {
    std::vector<Value> parts;

    bool operator==(const KeyTuple& other) const {
        if (parts.size() != other.parts.size()) return false;
        for (std::size_t i = 0; i < parts.size(); ++i)
            if (!parts[i].identical(other.parts[i])) return false;
        return true;
    }

    std::string to_string() const;
};

struct KeyTupleHash {
    std::size_t operator()(const KeyTuple& k) const {
        std::size_t h = 0x811c9dc5;
        for (const auto& v : k.parts) h = h * 1099511628211ULL ^ v.hash();
        return h;
    }
};

/// Columnar table: one value vector per column, all of length row_count().
class Table {
public:
    explicit Table(TableSchema schema);

    const TableSchema& schema() const { return schema_; }
    std::size_t row_count() const { return row_count_; }

    const std::vector<Value>& column(std::size_t idx) const { return columns_[idx]; }
    const std::vector<Value>& column(const std::string& name) const;

    const Value& at(std::size_t row, std::size_t col) const { return columns_[col][row]; }

    /// Appends a parsed row, enforcing nullability and PK uniqueness.
    /// `source_row` is the 1-based data row used in error messages.
    void append_row(std::vector<Value> row, std::size_t source_row);

    KeyTuple key_for_row(std::size_t row, const std::vector<std::size_t>& cols) const;

    /// Row index holding the given primary-key tuple, if any.
    std::optional<std::size_t> find_pk(const KeyTuple& key) const;

    const std::vector<std::size_t>& pk_column_indices() const { return pk_cols_; }

private:
    TableSchema schema_;
    std::vector<std::vector<Value>> columns_;
    std::size_t row_count_ = 0;
    std::vector<std::size_t> pk_cols_;
    std::unordered_map<KeyTuple, std::size_t, KeyTupleHash> pk_index_;
};

struct FkViolation {
    std::string table;
    std::size_t row;
    std::size_t fk_index;
    std::string missing_key;
};

/// Name -> Table catalog. Lookup is case-insensitive, storage case-preserving.
/// Immutable once the load phase is done; mutation is single-threaded.
class Database {
public:
    /// Registers an empty table. Throws DuplicateTableError / InvalidSchemaError.
    void create_table(TableSchema schema);

    bool has_table(const std::string& name) const;
    Table& table(const std::string& name);
    const Table& table(const std::string& name) const;

    std::vector<std::string> table_names() const; // in creation order

    /// Appends CSV rows to `table`. When `header` is true the first record
    /// must carry the schema's column names (case-insensitive).
    void load_csv(const std::string& table, std::istream& source, bool header);

    /// Serializes a table back to CSV (with header) in the load dialect.
    void write_csv(const std::string& table, std::ostream& out) const;

    /// Every (table, row, fk) whose referenced key is absent. Empty = consistent.
    std::vector<FkViolation> validate_foreign_keys() const;

private:
    void check_schema(const TableSchema& schema) const;

    std::vector<std::string> order_;
    std::map<std::string, Table> tables_; // keyed by lowercase name
};

std::string to_lower(const std::string& s);

} // namespace pgqlite
