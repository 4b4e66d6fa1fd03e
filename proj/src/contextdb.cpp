#include "ctxmine/contextdb.hpp"

#include <algorithm>
#include <stdexcept>

namespace ctxmine {

namespace {

const ResourceAttributes kNoAttributes{};

// Non-key columns that are not foreign keys of an outgoing link are the
// context-bearing attributes of a refining source.
std::vector<std::size_t> attribute_columns(const SourceDescriptor& src,
                                           const SchemaModel& schema) {
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < src.columns.size(); ++i) {
        const std::string& col = src.columns[i];
        if (src.key_column && col == *src.key_column) continue;
        bool is_link_column = false;
        for (const auto& l : schema.links)
            if (l.from_source == src.name && l.via_column == col)
                is_link_column = true;
        if (!is_link_column) cols.push_back(i);
    }
    return cols;
}

}  // namespace

void ContextVector::add(const std::string& key, const std::string& value) {
    assignments[key].insert(value);
}

const ResourceAttributes& SequenceDatabase::attributes_of(
    const std::string& resource) const {
    auto it = resource_attrs.find(resource);
    if (it == resource_attrs.end()) return kNoAttributes;
    return it->second;
}

std::vector<ContextualizedSequence> build_sequences(const SourceTable& activity) {
    const auto& desc = activity.descriptor;
    const std::size_t c_student = desc.column_index("student_id");
    const std::size_t c_resource = desc.column_index("resource_id");
    const std::size_t c_ts = desc.column_index("timestamp");
    const std::size_t c_action = desc.column_index("action");

    std::map<std::string, std::vector<Event>> grouped;
    for (std::size_t i = 0; i < activity.rows.size(); ++i) {
        const Row& row = activity.rows[i];
        Event e;
        e.resource = row.cells[c_resource].value;
        e.timestamp = std::stoll(row.cells[c_ts].value);
        e.action = row.cells[c_action].value;
        e.ordinal = i;
        grouped[row.cells[c_student].value].push_back(std::move(e));
    }

    std::vector<ContextualizedSequence> out;
    out.reserve(grouped.size());
    for (auto& [student, events] : grouped) {
        std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
            if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
            return a.ordinal < b.ordinal;
        });
        ContextualizedSequence seq;
        seq.student = student;
        seq.events = std::move(events);
        out.push_back(std::move(seq));
    }
    return out;
}

void attach_context(std::vector<ContextualizedSequence>& sequences,
                    const SchemaModel& schema,
                    const std::map<std::string, SourceTable>& tables,
                    SequenceDatabase& db) {
    // Depth-first walk along source_to_source links from a resolved row.
    struct Resolver {
        const SchemaModel& schema;
        const std::map<std::string, SourceTable>& tables;
        SequenceDatabase& db;

        void visit(const SourceDescriptor& src, const Row& row,
                   ContextVector& ctx) {
            for (std::size_t i : attribute_columns(src, schema)) {
                const Cell& cell = row.cells[i];
                if (cell.unknown) continue;
                ctx.add(src.name + "." + src.columns[i], cell.value);
            }
            for (const auto& l : schema.links) {
                if (l.from_source != src.name ||
                    l.kind != LinkKind::SourceToSource)
                    continue;
                const std::size_t via = src.column_index(l.via_column);
                const Cell& key = row.cells[via];
                if (key.unknown) continue;
                follow(l, key.value, ctx);
            }
        }

        void follow(const LinkDescriptor& link, const std::string& key,
                    ContextVector& ctx) {
            const SourceTable& target = tables.at(link.to_source);
            auto it = target.key_index.find(key);
            if (it == target.key_index.end()) {
                ++db.broken_link_warnings;
                return;
            }
            visit(*schema.find_source(link.to_source), target.rows[it->second],
                  ctx);
        }
    } resolver{schema, tables, db};

    const SourceDescriptor& core = schema.core();
    for (auto& seq : sequences) {
        for (const auto& l : schema.links) {
            if (l.from_source != core.name || l.kind != LinkKind::SourceToSource)
                continue;
            // The core's student link key is the student id itself; other
            // via columns would take their values from the student's rows,
            // which the fixed core column set rules out.
            resolver.follow(l, seq.student, seq.context);
        }
        for (const auto& [key, values] : seq.context.assignments)
            db.context_domains[key].insert(values.begin(), values.end());
    }
}

void resolve_resource_attributes(SequenceDatabase& db, const SchemaModel& schema,
                                 const std::map<std::string, SourceTable>& tables) {
    const SourceDescriptor& core = schema.core();
    for (const auto& l : schema.links) {
        if (l.from_source != core.name || l.kind != LinkKind::ElementToSource)
            continue;
        if (l.via_column != "resource_id") continue;
        const SourceDescriptor& src = *schema.find_source(l.to_source);
        const SourceTable& table = tables.at(src.name);
        const std::size_t key_col = src.column_index(*src.key_column);

        auto row_attrs = [&](const Row& row, ResourceAttributes& out) {
            for (std::size_t i = 0; i < src.columns.size(); ++i) {
                if (i == key_col) continue;
                const std::string key = src.name + "." + src.columns[i];
                const Cell& cell = row.cells[i];
                if (cell.unknown) {
                    out.attrs[key] = std::nullopt;
                } else {
                    out.attrs[key] = cell.value;
                    db.resource_domains[key].insert(cell.value);
                }
            }
        };

        // Unreferenced description rows are retained; they are harmless.
        for (const auto& row : table.rows)
            row_attrs(row, db.resource_attrs[row.cells[key_col].value]);

        // Events referencing an undescribed resource degrade to all-Unknown.
        for (const auto& seq : db.sequences) {
            for (const auto& e : seq.events) {
                if (db.resource_attrs.count(e.resource)) continue;
                ResourceAttributes& attrs = db.resource_attrs[e.resource];
                for (std::size_t i = 0; i < src.columns.size(); ++i)
                    if (i != key_col)
                        attrs.attrs[src.name + "." + src.columns[i]] = std::nullopt;
            }
        }
    }
}

SequenceDatabase build_database(const SchemaModel& schema,
                                const std::map<std::string, SourceTable>& tables) {
    SequenceDatabase db;
    db.sequences = build_sequences(tables.at(schema.core().name));
    attach_context(db.sequences, schema, tables, db);
    resolve_resource_attributes(db, schema, tables);
    return db;
}

SequenceDatabase load_database(const SchemaModel& schema) {
    std::map<std::string, SourceTable> tables;
    for (const auto& src : schema.sources) tables.emplace(src.name, load_table(src));
    return build_database(schema, tables);
}

}  // namespace ctxmine
