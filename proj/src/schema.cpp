#include "ctxmine/schema.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

namespace ctxmine {

namespace {

const std::vector<std::string> kCoreColumns = {"student_id", "resource_id",
                                               "timestamp", "action"};

SourceRole parse_role(const std::string& text, const std::string& source) {
    if (text == "core") return SourceRole::Core;
    if (text == "refining") return SourceRole::Refining;
    if (text == "generalizing") return SourceRole::Generalizing;
    throw SchemaError(SchemaError::Code::ParseError, source,
                      "unknown role '" + text + "' for source '" + source + "'");
}

LinkKind parse_kind(const std::string& text, const std::string& link) {
    if (text == "source_to_source") return LinkKind::SourceToSource;
    if (text == "element_to_source") return LinkKind::ElementToSource;
    throw SchemaError(SchemaError::Code::ParseError, link,
                      "unknown link kind '" + text + "'");
}

std::string link_name(const LinkDescriptor& l) {
    return l.from_source + "->" + l.to_source;
}

}  // namespace

const char* to_string(SourceRole role) {
    switch (role) {
        case SourceRole::Core: return "core";
        case SourceRole::Refining: return "refining";
        case SourceRole::Generalizing: return "generalizing";
    }
    return "?";
}

const char* to_string(LinkKind kind) {
    return kind == LinkKind::SourceToSource ? "source_to_source"
                                            : "element_to_source";
}

bool SourceDescriptor::has_column(const std::string& col) const {
    return column_index(col) != std::string::npos;
}

std::size_t SourceDescriptor::column_index(const std::string& col) const {
    auto it = std::find(columns.begin(), columns.end(), col);
    if (it == columns.end()) return std::string::npos;
    return static_cast<std::size_t>(it - columns.begin());
}

const SourceDescriptor* SchemaModel::find_source(const std::string& name) const {
    for (const auto& s : sources)
        if (s.name == name) return &s;
    return nullptr;
}

const SourceDescriptor& SchemaModel::core() const {
    for (const auto& s : sources)
        if (s.role == SourceRole::Core) return s;
    throw std::logic_error("SchemaModel without core source");
}

SchemaError::SchemaError(Code code, std::string offender,
                         const std::string& message)
    : std::runtime_error(message), code_(code), offender_(std::move(offender)) {}

const char* SchemaError::code_name() const {
    switch (code_) {
        case Code::ParseError: return "ParseError";
        case Code::ZeroOrMultipleCoreSources: return "ZeroOrMultipleCoreSources";
        case Code::DuplicateSourceName: return "DuplicateSourceName";
        case Code::MissingCoreColumns: return "MissingCoreColumns";
        case Code::MissingKeyColumn: return "MissingKeyColumn";
        case Code::DanglingLink: return "DanglingLink";
        case Code::InvalidLinkKind: return "InvalidLinkKind";
        case Code::CyclicLinkGraph: return "CyclicLinkGraph";
        case Code::UnreachableSource: return "UnreachableSource";
    }
    return "?";
}

SchemaModel validate_schema(const std::string& manifest_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(manifest_text);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(SchemaError::Code::ParseError, "<manifest>",
                          std::string("manifest is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("sources") || !doc["sources"].is_array())
        throw SchemaError(SchemaError::Code::ParseError, "<manifest>",
                          "manifest must be an object with a 'sources' array");

    SchemaModel model;
    for (const auto& js : doc["sources"]) {
        SourceDescriptor s;
        try {
            s.name = js.at("name").get<std::string>();
            s.role = parse_role(js.at("role").get<std::string>(), s.name);
            s.path = js.at("path").get<std::string>();
            if (js.contains("key_column"))
                s.key_column = js["key_column"].get<std::string>();
            s.columns = js.at("columns").get<std::vector<std::string>>();
        } catch (const nlohmann::json::exception& e) {
            throw SchemaError(SchemaError::Code::ParseError,
                              s.name.empty() ? "<source>" : s.name,
                              std::string("malformed source entry: ") + e.what());
        }
        model.sources.push_back(std::move(s));
    }
    if (doc.contains("links")) {
        if (!doc["links"].is_array())
            throw SchemaError(SchemaError::Code::ParseError, "<manifest>",
                              "'links' must be an array");
        for (const auto& jl : doc["links"]) {
            LinkDescriptor l;
            try {
                l.from_source = jl.at("from").get<std::string>();
                l.to_source = jl.at("to").get<std::string>();
                l.via_column = jl.at("via").get<std::string>();
                l.kind = parse_kind(jl.at("kind").get<std::string>(),
                                    l.from_source + "->" + l.to_source);
            } catch (const nlohmann::json::exception& e) {
                throw SchemaError(SchemaError::Code::ParseError, "<link>",
                                  std::string("malformed link entry: ") + e.what());
            }
            model.links.push_back(std::move(l));
        }
    }

    // Source-level invariants.
    std::set<std::string> names;
    std::size_t core_count = 0;
    for (const auto& s : model.sources) {
        if (!names.insert(s.name).second)
            throw SchemaError(SchemaError::Code::DuplicateSourceName, s.name,
                              "duplicate source name '" + s.name + "'");
        if (s.role == SourceRole::Core) {
            ++core_count;
            if (s.columns != kCoreColumns)
                throw SchemaError(
                    SchemaError::Code::MissingCoreColumns, s.name,
                    "core source '" + s.name +
                        "' must have columns student_id,resource_id,timestamp,action");
        } else {
            if (!s.key_column || !s.has_column(*s.key_column))
                throw SchemaError(SchemaError::Code::MissingKeyColumn, s.name,
                                  "source '" + s.name +
                                      "' needs a key_column among its columns");
        }
    }
    if (core_count != 1)
        throw SchemaError(SchemaError::Code::ZeroOrMultipleCoreSources, "<manifest>",
                          "manifest declares " + std::to_string(core_count) +
                              " core sources, expected exactly 1");

    // Link-level invariants.
    for (const auto& l : model.links) {
        const SourceDescriptor* from = model.find_source(l.from_source);
        const SourceDescriptor* to = model.find_source(l.to_source);
        if (!from || !to)
            throw SchemaError(SchemaError::Code::DanglingLink, link_name(l),
                              "link " + link_name(l) +
                                  " references an undeclared source");
        if (!from->has_column(l.via_column))
            throw SchemaError(SchemaError::Code::DanglingLink, link_name(l),
                              "link " + link_name(l) + " via_column '" +
                                  l.via_column + "' not in '" + from->name + "'");
        if (l.kind == LinkKind::ElementToSource) {
            if (to->role != SourceRole::Generalizing)
                throw SchemaError(SchemaError::Code::InvalidLinkKind, link_name(l),
                                  "element_to_source link " + link_name(l) +
                                      " must target a generalizing source");
            if (from->role != SourceRole::Core)
                throw SchemaError(SchemaError::Code::InvalidLinkKind, link_name(l),
                                  "element_to_source link " + link_name(l) +
                                      " must start at the core source");
        }
        if (l.kind == LinkKind::SourceToSource && to->role != SourceRole::Refining)
            throw SchemaError(SchemaError::Code::InvalidLinkKind, link_name(l),
                              "source_to_source link " + link_name(l) +
                                  " must target a refining source");
        if (from->role == SourceRole::Generalizing)
            throw SchemaError(SchemaError::Code::InvalidLinkKind, link_name(l),
                              "generalizing source '" + from->name +
                                  "' cannot link onward");
    }

    // Graph shape: acyclic, every non-core source reached from the core.
    std::map<std::string, std::vector<const LinkDescriptor*>> out;
    for (const auto& l : model.links) out[l.from_source].push_back(&l);

    std::set<std::string> visiting, done;
    // Iterative DFS with cycle detection.
    struct Frame {
        std::string node;
        std::size_t next = 0;
    };
    for (const auto& s : model.sources) {
        if (done.count(s.name)) continue;
        std::vector<Frame> stack{{s.name}};
        visiting.insert(s.name);
        while (!stack.empty()) {
            Frame& f = stack.back();
            auto& edges = out[f.node];
            if (f.next < edges.size()) {
                const LinkDescriptor* l = edges[f.next++];
                if (visiting.count(l->to_source))
                    throw SchemaError(SchemaError::Code::CyclicLinkGraph,
                                      link_name(*l),
                                      "link " + link_name(*l) + " closes a cycle");
                if (!done.count(l->to_source)) {
                    visiting.insert(l->to_source);
                    stack.push_back({l->to_source});
                }
            } else {
                visiting.erase(f.node);
                done.insert(f.node);
                stack.pop_back();
            }
        }
    }

    // Reachability from core, tracking the link kinds along the path.
    std::set<std::string> reached{model.core().name};
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& l : model.links) {
            if (reached.count(l.from_source) && !reached.count(l.to_source)) {
                reached.insert(l.to_source);
                grew = true;
            }
        }
    }
    for (const auto& s : model.sources) {
        if (!reached.count(s.name))
            throw SchemaError(SchemaError::Code::UnreachableSource, s.name,
                              "source '" + s.name +
                                  "' has no link path from the core source");
    }
    // Refining sources must be reached through source_to_source links only;
    // the kind checks above pin each edge's kind by target role, so any
    // path ending at a refining source is all source_to_source already.
    return model;
}

std::string serialize_schema(const SchemaModel& model) {
    nlohmann::ordered_json doc;
    doc["sources"] = nlohmann::ordered_json::array();
    for (const auto& s : model.sources) {
        nlohmann::ordered_json js;
        js["name"] = s.name;
        js["role"] = to_string(s.role);
        js["path"] = s.path;
        if (s.key_column) js["key_column"] = *s.key_column;
        js["columns"] = s.columns;
        doc["sources"].push_back(std::move(js));
    }
    doc["links"] = nlohmann::ordered_json::array();
    for (const auto& l : model.links) {
        nlohmann::ordered_json jl;
        jl["from"] = l.from_source;
        jl["to"] = l.to_source;
        jl["via"] = l.via_column;
        jl["kind"] = to_string(l.kind);
        doc["links"].push_back(std::move(jl));
    }
    return doc.dump(2) + "\n";
}

bool operator==(const SourceDescriptor& a, const SourceDescriptor& b) {
    return a.name == b.name && a.role == b.role && a.path == b.path &&
           a.key_column == b.key_column && a.columns == b.columns;
}

bool operator==(const LinkDescriptor& a, const LinkDescriptor& b) {
    return a.from_source == b.from_source && a.to_source == b.to_source &&
           a.via_column == b.via_column && a.kind == b.kind;
}

bool operator==(const SchemaModel& a, const SchemaModel& b) {
    return a.sources == b.sources && a.links == b.links;
}

}  // namespace ctxmine
