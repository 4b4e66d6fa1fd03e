#ifndef CTXMINE_CONTEXTDB_HPP
#define CTXMINE_CONTEXTDB_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "ctxmine/ingest.hpp"
#include "ctxmine/schema.hpp"

namespace ctxmine {

using ValueSet = std::set<std::string>;

struct Event {
    std::string resource;
    std::int64_t timestamp;
    std::string action;
    std::size_t ordinal;  // input row order, tie-breaker for equal timestamps
};

// Namespaced attribute assignments (e.g. "student.age" -> {"14-years"}).
// Unknown values are never stored; value sets are never empty.
struct ContextVector {
    std::map<std::string, ValueSet> assignments;

    void add(const std::string& key, const std::string& value);
};

struct ContextualizedSequence {
    std::string student;
    std::vector<Event> events;  // sorted by (timestamp, ordinal)
    ContextVector context;
};

// Attribute key -> value; nullopt means Unknown.
struct ResourceAttributes {
    std::map<std::string, std::optional<std::string>> attrs;
};

struct SequenceDatabase {
    std::vector<ContextualizedSequence> sequences;  // sorted by student id
    std::unordered_map<std::string, ResourceAttributes> resource_attrs;
    // Observed value domains, split by source role. Context keys come from
    // refining sources, resource keys from the generalizing source.
    std::map<std::string, ValueSet> context_domains;
    std::map<std::string, ValueSet> resource_domains;
    std::size_t broken_link_warnings = 0;

    const ResourceAttributes& attributes_of(const std::string& resource) const;
};

// Groups core-table rows into per-student event sequences sorted by
// (timestamp, ordinal); students come out sorted by id.
std::vector<ContextualizedSequence> build_sequences(const SourceTable& activity);

// Follows source_to_source links transitively from the core and fills each
// student's ContextVector. Unresolvable link keys are counted as warnings.
void attach_context(std::vector<ContextualizedSequence>& sequences,
                    const SchemaModel& schema,
                    const std::map<std::string, SourceTable>& tables,
                    SequenceDatabase& db);

// Resolves every event's resource id against the generalizing source;
// resources without a description row get all-Unknown attributes.
void resolve_resource_attributes(SequenceDatabase& db, const SchemaModel& schema,
                                 const std::map<std::string, SourceTable>& tables);

// Full pipeline: build_sequences + attach_context + resolve_resource_attributes.
SequenceDatabase build_database(const SchemaModel& schema,
                                const std::map<std::string, SourceTable>& tables);

// Loads every declared source file and builds the database.
SequenceDatabase load_database(const SchemaModel& schema);

}  // namespace ctxmine

#endif
