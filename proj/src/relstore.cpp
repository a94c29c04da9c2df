#include "pgqlite/relstore.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>

#include "pgqlite/csv.hpp"
#include "pgqlite/error.hpp"

namespace pgqlite {

std::string to_lower(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
}

std::optional<std::size_t> TableSchema::column_index(const std::string& name) const {
    const std::string needle = to_lower(name);
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (to_lower(columns[i].name) == needle) return i;
    return std::nullopt;
}

std::string KeyTuple::to_string() const {
    std::string out = "(";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ", ";
        out += parts[i].to_string();
    }
    return out + ")";
}

Table::Table(TableSchema schema) : schema_(std::move(schema)) {
    columns_.resize(schema_.columns.size());
    for (const auto& pk : schema_.primary_key) {
        auto idx = schema_.column_index(pk);
        if (!idx) throw InvalidSchemaError("primary key column not found: " + pk);
        pk_cols_.push_back(*idx);
    }
}

const std::vector<Value>& Table::column(const std::string& name) const {
    auto idx = schema_.column_index(name);
    if (!idx) throw UnknownColumnError(schema_.name + "." + name);
    return columns_[*idx];
}

void Table::append_row(std::vector<Value> row, std::size_t source_row) {
    if (row.size() != columns_.size())
        throw ArityMismatchError(source_row, columns_.size(), row.size());
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (row[i].is_null() && !schema_.columns[i].nullable)
            throw NullInNonNullableError(source_row, schema_.columns[i].name);
    }
    if (!pk_cols_.empty()) {
        KeyTuple key;
        for (auto c : pk_cols_) {
            if (row[c].is_null())
                throw NullInNonNullableError(source_row, schema_.columns[c].name);
            key.parts.push_back(row[c]);
        }
        auto [it, inserted] = pk_index_.emplace(key, row_count_);
        if (!inserted) throw DuplicatePrimaryKeyError(source_row, key.to_string());
    }
    for (std::size_t i = 0; i < row.size(); ++i) columns_[i].push_back(std::move(row[i]));
    ++row_count_;
}

KeyTuple Table::key_for_row(std::size_t row, const std::vector<std::size_t>& cols) const {
    KeyTuple key;
    key.parts.reserve(cols.size());
    for (auto c : cols) key.parts.push_back(columns_[c][row]);
    return key;
}

std::optional<std::size_t> Table::find_pk(const KeyTuple& key) const {
    auto it = pk_index_.find(key);
    if (it == pk_index_.end()) return std::nullopt;
    return it->second;
}

void Database::check_schema(const TableSchema& schema) const {
    std::vector<std::string> seen;
    for (const auto& col : schema.columns) {
        const std::string lower = to_lower(col.name);
        if (std::find(seen.begin(), seen.end(), lower) != seen.end())
            throw InvalidSchemaError("duplicate column " + col.name + " in " + schema.name);
        seen.push_back(lower);
    }
    for (const auto& pk : schema.primary_key)
        if (!schema.column_index(pk))
            throw InvalidSchemaError("primary key column " + pk + " not in " + schema.name);
    for (const auto& fk : schema.foreign_keys) {
        for (const auto& col : fk.columns)
            if (!schema.column_index(col))
                throw InvalidSchemaError("foreign key column " + col + " not in " + schema.name);
        if (!has_table(fk.target_table))
            throw InvalidSchemaError("foreign key target table not found: " + fk.target_table);
        const Table& target = table(fk.target_table);
        const auto& pk = target.schema().primary_key;
        if (pk.size() != fk.target_columns.size())
            throw InvalidSchemaError("foreign key arity mismatch against " + fk.target_table);
        for (std::size_t i = 0; i < pk.size(); ++i)
            if (to_lower(pk[i]) != to_lower(fk.target_columns[i]))
                throw InvalidSchemaError("foreign key must reference the primary key of " +
                                         fk.target_table);
    }
}

void Database::create_table(TableSchema schema) {
    const std::string key = to_lower(schema.name);
    if (tables_.count(key)) throw DuplicateTableError(schema.name);
    check_schema(schema);
    order_.push_back(schema.name);
    tables_.emplace(key, Table(std::move(schema)));
}

bool Database::has_table(const std::string& name) const {
    return tables_.count(to_lower(name)) > 0;
}

Table& Database::table(const std::string& name) {
    auto it = tables_.find(to_lower(name));
    if (it == tables_.end()) throw UnknownTableError(name);
    return it->second;
}

const Table& Database::table(const std::string& name) const {
    auto it = tables_.find(to_lower(name));
    if (it == tables_.end()) throw UnknownTableError(name);
    return it->second;
}

std::vector<std::string> Database::table_names() const { return order_; }

void Database::load_csv(const std::string& name, std::istream& source, bool header) {
    Table& tbl = table(name);
    const auto& schema = tbl.schema();
    std::size_t row_no = 0;

    if (header) {
        auto rec = csv::read_record(source);
        if (!rec) throw CsvParseError(0, 0, "missing header record");
        if (rec->size() != schema.columns.size())
            throw ArityMismatchError(0, schema.columns.size(), rec->size());
        for (std::size_t i = 0; i < rec->size(); ++i) {
            if (to_lower((*rec)[i].text) != to_lower(schema.columns[i].name))
                throw CsvParseError(0, i + 1,
                                    "header field '" + (*rec)[i].text + "' does not match column '" +
                                        schema.columns[i].name + "'");
        }
    }

    while (auto rec = csv::read_record(source)) {
        ++row_no;
        if (rec->size() == 1 && !(*rec)[0].quoted && (*rec)[0].text.empty()) continue; // blank line
        if (rec->size() != schema.columns.size())
            throw ArityMismatchError(row_no, schema.columns.size(), rec->size());
        std::vector<Value> row;
        row.reserve(rec->size());
        for (std::size_t i = 0; i < rec->size(); ++i) {
            const auto& field = (*rec)[i];
            const auto& col = schema.columns[i];
            if (field.text.empty() && !field.quoted) {
                if (!col.nullable) throw NullInNonNullableError(row_no, col.name);
                row.push_back(Value::null());
                continue;
            }
            try {
                row.push_back(parse_value(field.text, col.kind));
            } catch (const TypeError& e) {
                throw CsvParseError(row_no, i + 1, e.what());
            }
        }
        tbl.append_row(std::move(row), row_no);
    }
}

void Database::write_csv(const std::string& name, std::ostream& out) const {
    const Table& tbl = table(name);
    const auto& schema = tbl.schema();

    std::vector<csv::Field> header;
    for (const auto& col : schema.columns) header.push_back({col.name, false});
    csv::write_record(out, header);

    for (std::size_t r = 0; r < tbl.row_count(); ++r) {
        std::vector<csv::Field> rec;
        rec.reserve(schema.columns.size());
        for (std::size_t c = 0; c < schema.columns.size(); ++c) {
            const Value& v = tbl.at(r, c);
            if (v.is_null()) {
                rec.push_back({"", false});
            } else {
                const std::string text = v.to_string();
                // quote empty text so it round-trips distinct from Null
                rec.push_back({text, v.kind() == ValueKind::Text && text.empty()});
            }
        }
        csv::write_record(out, rec);
    }
}

std::vector<FkViolation> Database::validate_foreign_keys() const {
    std::vector<FkViolation> out;
    for (const auto& name : order_) {
        const Table& tbl = table(name);
        const auto& fks = tbl.schema().foreign_keys;
        for (std::size_t fk_idx = 0; fk_idx < fks.size(); ++fk_idx) {
            const auto& fk = fks[fk_idx];
            const Table& target = table(fk.target_table);
            std::vector<std::size_t> local_cols;
            for (const auto& col : fk.columns)
                local_cols.push_back(*tbl.schema().column_index(col));
            for (std::size_t r = 0; r < tbl.row_count(); ++r) {
                KeyTuple key = tbl.key_for_row(r, local_cols);
                bool has_null = false;
                for (const auto& part : key.parts) has_null |= part.is_null();
                if (has_null) continue; // null FK is absent, not dangling
                if (!target.find_pk(key))
                    out.push_back({tbl.schema().name, r, fk_idx, key.to_string()});
            }
        }
    }
    return out;
}

} // namespace pgqlite
