#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pgqlite {

/// Base class for all engine errors. `category()` is the stable
/// machine-readable tag the CLI prints as `error:<category>: ...`.
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& message)
        : std::runtime_error(message), category_(std::move(category)) {}

    const std::string& category() const { return category_; }

private:
    std::string category_;
};

// ---- storage / data errors ------------------------------------------------

class DuplicateTableError : public Error {
public:
    explicit DuplicateTableError(const std::string& table)
        : Error("data", "duplicate table: " + table) {}
};

class InvalidSchemaError : public Error {
public:
    explicit InvalidSchemaError(const std::string& message)
        : Error("data", "invalid schema: " + message) {}
};

class UnknownTableError : public Error {
public:
    explicit UnknownTableError(const std::string& table)
        : Error("data", "unknown table: " + table) {}
};

class UnknownColumnError : public Error {
public:
    explicit UnknownColumnError(const std::string& column)
        : Error("data", "unknown column: " + column) {}
};

class CsvParseError : public Error {
public:
    CsvParseError(std::size_t row, std::size_t column, const std::string& message)
        : Error("data", "csv parse error at row " + std::to_string(row) + ", column " +
                            std::to_string(column) + ": " + message),
          row(row), column(column) {}

    std::size_t row;
    std::size_t column;
};

class ArityMismatchError : public Error {
public:
    ArityMismatchError(std::size_t row, std::size_t expected, std::size_t got)
        : Error("data", "arity mismatch at row " + std::to_string(row) + ": expected " +
                            std::to_string(expected) + " fields, got " + std::to_string(got)),
          row(row) {}

    std::size_t row;
};

class NullInNonNullableError : public Error {
public:
    NullInNonNullableError(std::size_t row, const std::string& column)
        : Error("data", "null value at row " + std::to_string(row) +
                            " in non-nullable column " + column) {}
};

class DuplicatePrimaryKeyError : public Error {
public:
    DuplicatePrimaryKeyError(std::size_t row, const std::string& key)
        : Error("data", "duplicate primary key at row " + std::to_string(row) + ": " + key) {}
};

class DanglingEdgeKeyError : public Error {
public:
    DanglingEdgeKeyError(const std::string& table, std::size_t row, const std::string& key)
        : Error("data", "dangling edge key in " + table + " row " + std::to_string(row) +
                            ": " + key) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& message) : Error("io", message) {}
};

// ---- query errors ----------------------------------------------------------

class LexError : public Error {
public:
    LexError(std::size_t pos, const std::string& message)
        : Error("syntax", "lex error at offset " + std::to_string(pos) + ": " + message),
          position(pos) {}

    std::size_t position;
};

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t line, std::size_t column, const std::string& message)
        : Error("syntax", "syntax error at " + std::to_string(line) + ":" +
                              std::to_string(column) + ": " + message),
          line(line), column(column) {}

    std::size_t line;
    std::size_t column;
};

class UnboundVariableError : public Error {
public:
    explicit UnboundVariableError(const std::string& name)
        : Error("unbound", "unbound variable: " + name), name(name) {}

    std::string name;
};

class UnknownLabelError : public Error {
public:
    explicit UnknownLabelError(const std::string& label)
        : Error("query", "unknown label: " + label) {}
};

class UnsupportedPatternError : public Error {
public:
    explicit UnsupportedPatternError(const std::string& construct)
        : Error("unsupported", "unsupported pattern: " + construct) {}
};

class TypeError : public Error {
public:
    explicit TypeError(const std::string& message) : Error("type", message) {}
};

class NodeOutOfRangeError : public Error {
public:
    NodeOutOfRangeError(std::size_t node, std::size_t count)
        : Error("query", "node id " + std::to_string(node) + " out of range (|N|=" +
                             std::to_string(count) + ")") {}
};

/// Semantic errors raised while executing SQL text (ambiguous columns,
/// UNION arity mismatches, runaway recursion, ...).
class SqlError : public Error {
public:
    explicit SqlError(const std::string& message) : Error("query", message) {}
};

// ---- benchmark errors --------------------------------------------------------

class BackendMismatchError : public Error {
public:
    BackendMismatchError(const std::string& query, std::size_t relational_rows,
                         std::size_t graph_rows)
        : Error("mismatch", "backend row-count mismatch on " + query + ": relational=" +
                                std::to_string(relational_rows) + " graph=" +
                                std::to_string(graph_rows)) {}
};

} // namespace pgqlite
