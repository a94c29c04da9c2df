#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "pgqlite/error.hpp"

namespace pgqlite {

enum class ValueKind { Null, Bool, Int, Float, Text };

/// A single cell. Comparisons across kinds are type errors except Int/Float,
/// which compare numerically. Null never matches anything (unknown).
class Value {
public:
    Value() : data_(std::monostate{}) {}
    explicit Value(bool b) : data_(b) {}
    explicit Value(std::int64_t i) : data_(i) {}
    explicit Value(double d) : data_(d) {}
    explicit Value(std::string s) : data_(std::move(s)) {}
    explicit Value(const char* s) : data_(std::string(s)) {}

    static Value null() { return Value(); }

    ValueKind kind() const {
        switch (data_.index()) {
            case 0: return ValueKind::Null;
            case 1: return ValueKind::Bool;
            case 2: return ValueKind::Int;
            case 3: return ValueKind::Float;
            default: return ValueKind::Text;
        }
    }

    bool is_null() const { return kind() == ValueKind::Null; }

    bool as_bool() const { return std::get<bool>(data_); }
    std::int64_t as_int() const { return std::get<std::int64_t>(data_); }
    double as_float() const { return std::get<double>(data_); }
    const std::string& as_text() const { return std::get<std::string>(data_); }

    /// Numeric view, promoting Int to double. Throws for non-numeric kinds.
    double as_numeric() const {
        if (kind() == ValueKind::Int) return static_cast<double>(as_int());
        if (kind() == ValueKind::Float) return as_float();
        throw TypeError("value is not numeric");
    }

    /// Three-valued comparison: nullopt when either side is Null (unknown).
    /// Throws TypeError on incomparable kinds.
    std::optional<int> compare(const Value& other) const;

    /// SQL-style equality: false (not unknown-propagating) is folded into
    /// "no match" by callers; Null vs anything is unknown -> nullopt.
    std::optional<bool> equals(const Value& other) const {
        auto c = compare(other);
        if (!c) return std::nullopt;
        return *c == 0;
    }

    /// Exact same kind and payload. Used for deduplication and multiset
    /// comparison, where Int 2 and Float 2.0 are distinct values.
    bool identical(const Value& other) const { return data_ == other.data_; }

    /// Total order over all values (Null < Bool < numeric < Text), used only
    /// for deterministic sorting, never for query comparisons.
    bool ordered_before(const Value& other) const;

    std::string to_string() const;

    std::size_t hash() const;

private:
    std::variant<std::monostate, bool, std::int64_t, double, std::string> data_;
};

const char* value_kind_name(ValueKind kind);

/// Parses `text` into a value of the requested kind. Used by CSV ingestion.
Value parse_value(const std::string& text, ValueKind kind);

struct ValueHash {
    std::size_t operator()(const Value& v) const { return v.hash(); }
};

struct ValueIdentical {
    bool operator()(const Value& a, const Value& b) const { return a.identical(b); }
};

} // namespace pgqlite
