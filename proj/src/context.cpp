#include "ctxmine/context.hpp"

#include <algorithm>

namespace ctxmine {

bool Context::specializes(const Context& other) const {
    for (const auto& [key, value] : other.predicates) {
        auto it = predicates.find(key);
        if (it == predicates.end() || it->second != value) return false;
    }
    return true;
}

bool Context::satisfied_by(const ContextVector& vec) const {
    for (const auto& [key, value] : predicates) {
        auto it = vec.assignments.find(key);
        if (it == vec.assignments.end() || !it->second.count(value)) return false;
    }
    return true;
}

std::string Context::canonical() const {
    if (predicates.empty()) return "{}";
    std::string out;
    for (const auto& [key, value] : predicates) {
        if (!out.empty()) out.push_back(' ');
        out += key;
        out.push_back('=');
        out += value;
    }
    return out;
}

ContextCover context_cover(const Context& c, const SequenceDatabase& db) {
    for (const auto& [key, value] : c.predicates)
        if (!db.context_domains.count(key)) throw UnknownAttributeKey(key);
    ContextCover cover;
    cover.context = c;
    for (std::uint32_t i = 0; i < db.sequences.size(); ++i)
        if (c.satisfied_by(db.sequences[i].context)) cover.students.push_back(i);
    return cover;
}

std::vector<ContextCover> enumerate_contexts(const SequenceDatabase& db,
                                             std::size_t minsup_ctx,
                                             std::size_t max_context_size) {
    std::vector<ContextCover> result;
    if (db.sequences.size() < minsup_ctx) return result;

    ContextCover global;
    for (std::uint32_t i = 0; i < db.sequences.size(); ++i)
        global.students.push_back(i);
    result.push_back(global);

    // Ordered predicate universe; extension only by predicates ranked after
    // the last one in the context keeps enumeration canonical and duplicate
    // free. At most one predicate per key.
    std::vector<std::pair<std::string, std::string>> universe;
    for (const auto& [key, values] : db.context_domains)
        for (const auto& v : values) universe.emplace_back(key, v);

    std::vector<std::pair<ContextCover, std::size_t>> frontier;
    frontier.emplace_back(global, 0);

    for (std::size_t level = 1; level <= max_context_size; ++level) {
        std::vector<std::pair<ContextCover, std::size_t>> next;
        for (const auto& [cover, start] : frontier) {
            for (std::size_t u = start; u < universe.size(); ++u) {
                const auto& [key, value] = universe[u];
                if (cover.context.predicates.count(key)) continue;
                ContextCover ext;
                ext.context = cover.context;
                ext.context.predicates.emplace(key, value);
                for (std::uint32_t s : cover.students) {
                    const auto& assigns = db.sequences[s].context.assignments;
                    auto it = assigns.find(key);
                    if (it != assigns.end() && it->second.count(value))
                        ext.students.push_back(s);
                }
                if (ext.students.size() < minsup_ctx) continue;
                result.push_back(ext);
                next.emplace_back(std::move(ext), u + 1);
            }
        }
        frontier = std::move(next);
        if (frontier.empty()) break;
    }

    std::sort(result.begin(), result.end(),
              [](const ContextCover& a, const ContextCover& b) {
                  return a.context < b.context;
              });
    return result;
}

}  // namespace ctxmine
