#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pgqlite::csv {

/// One raw CSV field. `quoted` distinguishes an unquoted empty field (Null on
/// ingestion) from a quoted empty string "".
struct Field {
    std::string text;
    bool quoted = false;
};

using Record = std::vector<Field>;

/// Reads the next record, handling quoted fields with doubled-quote escapes
/// and embedded newlines. Returns nullopt at end of stream.
std::optional<Record> read_record(std::istream& in);

/// Writes one record; fields are quoted when they contain commas, quotes,
/// newlines, or when the field is a quoted-empty marker.
void write_record(std::ostream& out, const std::vector<Field>& fields);

} // namespace pgqlite::csv
