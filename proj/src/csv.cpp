#include "pgqlite/csv.hpp"

#include <istream>
#include <ostream>

namespace pgqlite::csv {

std::optional<Record> read_record(std::istream& in) {
    Record record;
    Field field;
    bool in_quotes = false;
    bool saw_any = false;

    int ci;
    while ((ci = in.get()) != std::char_traits<char>::eof()) {
        const char c = static_cast<char>(ci);
        saw_any = true;
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get();
                    field.text.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                field.text.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                field.quoted = true;
                break;
            case ',':
                record.push_back(std::move(field));
                field = Field{};
                break;
            case '\r':
                if (in.peek() == '\n') in.get();
                record.push_back(std::move(field));
                return record;
            case '\n':
                record.push_back(std::move(field));
                return record;
            default:
                field.text.push_back(c);
        }
    }
    if (!saw_any) return std::nullopt;
    record.push_back(std::move(field));
    return record;
}

void write_record(std::ostream& out, const std::vector<Field>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        const Field& f = fields[i];
        const bool needs_quotes = f.quoted ||
                                  f.text.find_first_of(",\"\r\n") != std::string::npos;
        if (!needs_quotes) {
            out << f.text;
            continue;
        }
        out << '"';
        for (char c : f.text) {
            if (c == '"') out << '"';
            out << c;
        }
        out << '"';
    }
    out << '\n';
}

} // namespace pgqlite::csv
