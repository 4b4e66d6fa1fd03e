#ifndef CTXMINE_SCHEMA_HPP
#define CTXMINE_SCHEMA_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctxmine {

enum class SourceRole { Core, Refining, Generalizing };
enum class LinkKind { SourceToSource, ElementToSource };

const char* to_string(SourceRole role);
const char* to_string(LinkKind kind);

struct SourceDescriptor {
    std::string name;
    SourceRole role;
    std::string path;
    std::optional<std::string> key_column;  // absent for the core source
    std::vector<std::string> columns;

    bool has_column(const std::string& col) const;
    // Position of a column within `columns`, or npos.
    std::size_t column_index(const std::string& col) const;
};

struct LinkDescriptor {
    std::string from_source;
    std::string to_source;
    std::string via_column;  // column in from_source holding keys of to_source
    LinkKind kind;
};

// Validated star/tree of sources rooted at the single core source.
struct SchemaModel {
    std::vector<SourceDescriptor> sources;
    std::vector<LinkDescriptor> links;

    const SourceDescriptor* find_source(const std::string& name) const;
    const SourceDescriptor& core() const;
};

class SchemaError : public std::runtime_error {
public:
    enum class Code {
        ParseError,
        ZeroOrMultipleCoreSources,
        DuplicateSourceName,
        MissingCoreColumns,
        MissingKeyColumn,
        DanglingLink,
        InvalidLinkKind,
        CyclicLinkGraph,
        UnreachableSource,
    };

    SchemaError(Code code, std::string offender, const std::string& message);

    Code code() const { return code_; }
    // Name of the source or link the manifest got wrong.
    const std::string& offender() const { return offender_; }
    const char* code_name() const;

private:
    Code code_;
    std::string offender_;
};

// Parses and validates a JSON manifest; throws SchemaError on any violation.
SchemaModel validate_schema(const std::string& manifest_text);

// Canonical manifest serialization; validate_schema(serialize_schema(m)) == m.
std::string serialize_schema(const SchemaModel& model);

bool operator==(const SourceDescriptor& a, const SourceDescriptor& b);
bool operator==(const LinkDescriptor& a, const LinkDescriptor& b);
bool operator==(const SchemaModel& a, const SchemaModel& b);

}  // namespace ctxmine

#endif
