#include "pgqlite/value.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace pgqlite {

namespace {

bool is_numeric_kind(ValueKind k) { return k == ValueKind::Int || k == ValueKind::Float; }

int cmp_double(double a, double b) { return a < b ? -1 : (a > b ? 1 : 0); }

} // namespace

std::optional<int> Value::compare(const Value& other) const {
    const ValueKind a = kind();
    const ValueKind b = other.kind();
    if (a == ValueKind::Null || b == ValueKind::Null) return std::nullopt;

    if (is_numeric_kind(a) && is_numeric_kind(b)) {
        if (a == ValueKind::Int && b == ValueKind::Int) {
            const auto x = as_int();
            const auto y = other.as_int();
            return x < y ? -1 : (x > y ? 1 : 0);
        }
        return cmp_double(as_numeric(), other.as_numeric());
    }
    if (a != b) {
        throw TypeError(std::string("cannot compare ") + value_kind_name(a) + " with " +
                        value_kind_name(b));
    }
    switch (a) {
        case ValueKind::Bool:
            return static_cast<int>(as_bool()) - static_cast<int>(other.as_bool());
        case ValueKind::Text:
            return as_text().compare(other.as_text()) < 0
                       ? -1
                       : (as_text() == other.as_text() ? 0 : 1);
        default:
            throw TypeError("unreachable comparison");
    }
}

bool Value::ordered_before(const Value& other) const {
    auto rank = [](ValueKind k) {
        switch (k) {
            case ValueKind::Null: return 0;
            case ValueKind::Bool: return 1;
            case ValueKind::Int: return 2;
            case ValueKind::Float: return 3;
            default: return 4;
        }
    };
    const ValueKind a = kind();
    const ValueKind b = other.kind();
    if (is_numeric_kind(a) && is_numeric_kind(b)) {
        const double x = as_numeric();
        const double y = other.as_numeric();
        if (x != y) return x < y;
        return rank(a) < rank(b); // Int sorts before Float on numeric ties
    }
    if (a != b) return rank(a) < rank(b);
    switch (a) {
        case ValueKind::Null: return false;
        case ValueKind::Bool: return as_bool() < other.as_bool();
        case ValueKind::Text: return as_text() < other.as_text();
        default: return false;
    }
}

std::string Value::to_string() const {
    switch (kind()) {
        case ValueKind::Null: return "";
        case ValueKind::Bool: return as_bool() ? "true" : "false";
        case ValueKind::Int: return std::to_string(as_int());
        case ValueKind::Float: {
            std::ostringstream out;
            out.precision(15);
            out << as_float();
            return out.str();
        }
        default: return as_text();
    }
}

std::size_t Value::hash() const {
    switch (kind()) {
        case ValueKind::Null: return 0x9e3779b97f4a7c15ULL;
        case ValueKind::Bool: return std::hash<bool>{}(as_bool()) ^ 0x1;
        case ValueKind::Int: return std::hash<std::int64_t>{}(as_int()) ^ 0x2;
        case ValueKind::Float: return std::hash<double>{}(as_float()) ^ 0x3;
        default: return std::hash<std::string>{}(as_text()) ^ 0x4;
    }
}

const char* value_kind_name(ValueKind kind) {
    switch (kind) {
        case ValueKind::Null: return "null";
        case ValueKind::Bool: return "bool";
        case ValueKind::Int: return "int";
        case ValueKind::Float: return "float";
        default: return "text";
    }
}

Value parse_value(const std::string& text, ValueKind kind) {
    switch (kind) {
        case ValueKind::Null:
            return Value::null();
        case ValueKind::Bool: {
            std::string lower;
            lower.reserve(text.size());
            for (char c : text) lower.push_back(static_cast<char>(std::tolower(c)));
            if (lower == "true" || lower == "1") return Value(true);
            if (lower == "false" || lower == "0") return Value(false);
            throw TypeError("not a bool: " + text);
        }
        case ValueKind::Int: {
            errno = 0;
            char* end = nullptr;
            const long long v = std::strtoll(text.c_str(), &end, 10);
            if (errno != 0 || end == text.c_str() || *end != '\0')
                throw TypeError("not an integer: " + text);
            return Value(static_cast<std::int64_t>(v));
        }
        case ValueKind::Float: {
            errno = 0;
            char* end = nullptr;
            const double v = std::strtod(text.c_str(), &end);
            if (errno != 0 || end == text.c_str() || *end != '\0')
                throw TypeError("not a float: " + text);
            return Value(v);
        }
        default:
            return Value(text);
    }
}

} // namespace pgqlite
