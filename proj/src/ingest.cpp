#include "ctxmine/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>

namespace ctxmine {

namespace {

bool iequals_unknown(const std::string& s) {
    if (s.size() != 7) return false;
    static const char* kWord = "unknown";
    for (std::size_t i = 0; i < 7; ++i)
        if (std::tolower(static_cast<unsigned char>(s[i])) != kWord[i])
            return false;
    return true;
}

// Days since 1970-01-01 for a proleptic Gregorian civil date.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

bool parse_fixed_uint(std::string_view s, std::size_t pos, std::size_t len,
                      int& out) {
    if (pos + len > s.size()) return false;
    int v = 0;
    for (std::size_t i = 0; i < len; ++i) {
        char c = s[pos + i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}

}  // namespace

Cell Cell::from_field(std::string field) {
    if (field.empty() || iequals_unknown(field)) return Cell{std::string(), true};
    return Cell{std::move(field), false};
}

bool read_csv_record(std::istream& in, std::vector<std::string>& fields,
                     std::size_t& line_no) {
    fields.clear();
    int c = in.peek();
    if (c == EOF) return false;
    ++line_no;
    std::string field;
    bool in_quotes = false;
    bool record_done = false;
    while (!record_done) {
        c = in.get();
        if (in_quotes) {
            if (c == EOF)
                throw IngestError(IngestError::Code::BadCsv,
                                  "unterminated quoted field", line_no);
            if (c == '"') {
                if (in.peek() == '"') {
                    field.push_back('"');
                    in.get();
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line_no;
                field.push_back(static_cast<char>(c));
            }
        } else {
            switch (c) {
                case EOF:
                case '\n':
                    record_done = true;
                    break;
                case '\r':
                    if (in.peek() == '\n') in.get();
                    record_done = true;
                    break;
                case ',':
                    fields.push_back(std::move(field));
                    field.clear();
                    break;
                case '"':
                    in_quotes = true;
                    break;
                default:
                    field.push_back(static_cast<char>(c));
            }
        }
    }
    fields.push_back(std::move(field));
    return true;
}

std::int64_t normalize_timestamp(std::string_view cell, std::size_t line) {
    if (cell.empty())
        throw IngestError(IngestError::Code::BadTimestamp, "empty timestamp",
                          line);
    // Plain non-negative integer: epoch seconds pass through.
    if (cell.find_first_not_of("0123456789") == std::string_view::npos) {
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (ec != std::errc() || p != cell.data() + cell.size())
            throw IngestError(IngestError::Code::BadTimestamp,
                              "bad epoch timestamp '" + std::string(cell) + "'",
                              line);
        return v;
    }
    // ISO-8601: YYYY-MM-DDTHH:MM:SS followed by Z or +HH:MM / -HH:MM.
    auto fail = [&]() -> IngestError {
        return IngestError(IngestError::Code::BadTimestamp,
                           "bad timestamp '" + std::string(cell) + "'", line);
    };
    int year, mon, day, hh, mm, ss;
    if (cell.size() < 20) throw fail();
    if (!parse_fixed_uint(cell, 0, 4, year) || cell[4] != '-' ||
        !parse_fixed_uint(cell, 5, 2, mon) || cell[7] != '-' ||
        !parse_fixed_uint(cell, 8, 2, day) ||
        (cell[10] != 'T' && cell[10] != 't') ||
        !parse_fixed_uint(cell, 11, 2, hh) || cell[13] != ':' ||
        !parse_fixed_uint(cell, 14, 2, mm) || cell[16] != ':' ||
        !parse_fixed_uint(cell, 17, 2, ss))
        throw fail();
    if (mon < 1 || mon > 12 || day < 1 || day > 31 || hh > 23 || mm > 59 ||
        ss > 60)
        throw fail();
    std::size_t pos = 19;
    std::int64_t offset = 0;
    if (cell[pos] == 'Z' || cell[pos] == 'z') {
        if (pos + 1 != cell.size()) throw fail();
    } else if (cell[pos] == '+' || cell[pos] == '-') {
        int oh, om;
        if (pos + 6 != cell.size() || !parse_fixed_uint(cell, pos + 1, 2, oh) ||
            cell[pos + 3] != ':' || !parse_fixed_uint(cell, pos + 4, 2, om))
            throw fail();
        offset = static_cast<std::int64_t>(oh) * 3600 + om * 60;
        if (cell[pos] == '-') offset = -offset;
    } else {
        throw fail();
    }
    std::int64_t days = days_from_civil(year, mon, day);
    return days * 86400 + hh * 3600 + mm * 60 + ss - offset;
}

SourceTable parse_table(const SourceDescriptor& descriptor, std::istream& in) {
    SourceTable table;
    table.descriptor = descriptor;

    std::vector<std::string> fields;
    std::size_t line_no = 0;
    if (!read_csv_record(in, fields, line_no))
        throw IngestError(IngestError::Code::HeaderMismatch,
                          "source '" + descriptor.name + "': empty file, header expected",
                          0);
    if (fields != descriptor.columns)
        throw IngestError(IngestError::Code::HeaderMismatch,
                          "source '" + descriptor.name +
                              "': header does not match declared columns",
                          line_no);

    const bool keyed = descriptor.key_column.has_value();
    const std::size_t key_col =
        keyed ? descriptor.column_index(*descriptor.key_column) : 0;
    const std::size_t ts_col = descriptor.role == SourceRole::Core
                                   ? descriptor.column_index("timestamp")
                                   : std::string::npos;

    while (read_csv_record(in, fields, line_no)) {
        if (fields.size() != descriptor.columns.size())
            throw IngestError(IngestError::Code::RaggedRow,
                              "source '" + descriptor.name + "': line " +
                                  std::to_string(line_no) + " has " +
                                  std::to_string(fields.size()) + " fields, expected " +
                                  std::to_string(descriptor.columns.size()),
                              line_no);
        Row row;
        row.cells.reserve(fields.size());
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i == ts_col) {
                // Normalize timestamps to epoch seconds at load time.
                std::int64_t secs = normalize_timestamp(fields[i], line_no);
                row.cells.push_back(Cell{std::to_string(secs), false});
            } else {
                row.cells.push_back(Cell::from_field(std::move(fields[i])));
            }
        }
        if (keyed) {
            const Cell& key = row.cells[key_col];
            auto [it, inserted] =
                table.key_index.emplace(key.value, table.rows.size());
            if (!inserted)
                throw IngestError(IngestError::Code::DuplicateKey,
                                  "source '" + descriptor.name +
                                      "': duplicate key '" + key.value + "'",
                                  line_no);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

SourceTable load_table(const SourceDescriptor& descriptor) {
    std::ifstream in(descriptor.path, std::ios::binary);
    if (!in)
        throw IngestError(IngestError::Code::IoError,
                          "cannot open '" + descriptor.path + "' for source '" +
                              descriptor.name + "'");
    return parse_table(descriptor, in);
}

}  // namespace ctxmine
