#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace macanon {

// Minimal RFC-4180-style reader: comma separated, double-quote quoting with
// "" escapes, quoted fields may span lines, accepts both \n and \r\n.
// Reads one record at a time so arbitrarily long inputs stream in constant
// memory.
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    // std::nullopt at end of input. Throws ParseError on an unterminated
    // quoted field.
    std::optional<std::vector<std::string>> next();

    std::size_t records_read() const { return records_; }

private:
    std::istream& in_;
    std::size_t records_ = 0;
};

// Quotes a field only when it contains a comma, quote or newline.
std::string csv_escape(std::string_view field);

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace macanon
