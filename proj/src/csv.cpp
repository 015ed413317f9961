#include "macanon/csv.hpp"

#include <istream>
#include <ostream>

#include "macanon/errors.hpp"

namespace macanon {

std::optional<std::vector<std::string>> CsvReader::next() {
    int c = in_.get();
    if (c == std::istream::traits_type::eof()) return std::nullopt;

    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;

    while (true) {
        if (c == std::istream::traits_type::eof()) {
            if (quoted)
                throw ParseError("unterminated quoted field in record " +
                                 std::to_string(records_ + 1));
            break;
        }
        const char ch = static_cast<char>(c);
        if (quoted) {
            if (ch == '"') {
                if (in_.peek() == '"') {
                    in_.get();
                    field.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(ch);
            }
        } else if (ch == '"' && field.empty()) {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (ch == '\n') {
            break;
        } else if (ch == '\r' && in_.peek() == '\n') {
            in_.get();
            break;
        } else {
            field.push_back(ch);
        }
        c = in_.get();
    }
    fields.push_back(std::move(field));
    ++records_;
    return fields;
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.put(',');
        out << csv_escape(fields[i]);
    }
    out.put('\n');
}

}  // namespace macanon
