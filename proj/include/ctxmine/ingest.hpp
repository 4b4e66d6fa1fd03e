#ifndef CTXMINE_INGEST_HPP
#define CTXMINE_INGEST_HPP

#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ctxmine/schema.hpp"

namespace ctxmine {

// One CSV cell. Empty or "unknown" (case-insensitive) fields are stored
// as the Unknown sentinel; no other value maps to it.
struct Cell {
    std::string value;
    bool unknown = false;

    static Cell from_field(std::string field);
};

struct Row {
    std::vector<Cell> cells;
};

struct SourceTable {
    SourceDescriptor descriptor;
    std::vector<Row> rows;                               // in file order
    std::unordered_map<std::string, std::size_t> key_index;  // keyed sources only
};

class IngestError : public std::runtime_error {
public:
    enum class Code {
        IoError,
        HeaderMismatch,
        DuplicateKey,
        RaggedRow,
        BadTimestamp,
        BadCsv,
    };

    IngestError(Code code, const std::string& message, std::size_t line = 0)
        : std::runtime_error(message), code_(code), line_(line) {}

    Code code() const { return code_; }
    std::size_t line() const { return line_; }

private:
    Code code_;
    std::size_t line_;
};

// Loads descriptor.path as CSV per the file contract.
SourceTable load_table(const SourceDescriptor& descriptor);

// Same, from an already-open stream (load_table delegates here).
SourceTable parse_table(const SourceDescriptor& descriptor, std::istream& in);

// Accepts epoch seconds or ISO-8601 with explicit offset / trailing Z.
std::int64_t normalize_timestamp(std::string_view cell, std::size_t line = 0);

// RFC-4180 style record reader: comma separated, double-quote quoting with
// doubled-quote escaping. Returns false at end of input.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields,
                     std::size_t& line_no);

}  // namespace ctxmine

#endif
