#ifndef CTXMINE_CONTEXT_HPP
#define CTXMINE_CONTEXT_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ctxmine/contextdb.hpp"

namespace ctxmine {

// Conjunction of attribute=value predicates, at most one per key.
// The empty conjunction is the global context.
struct Context {
    std::map<std::string, std::string> predicates;

    bool is_global() const { return predicates.empty(); }
    std::size_t size() const { return predicates.size(); }

    // True iff `other` is a sub-mapping of this context.
    bool specializes(const Context& other) const;
    bool satisfied_by(const ContextVector& vec) const;

    // "key=value key=value" sorted by key; "{}" for the global context.
    std::string canonical() const;

    auto operator<=>(const Context&) const = default;
};

struct ContextCover {
    Context context;
    std::vector<std::uint32_t> students;  // sorted indices into db.sequences
};

class UnknownAttributeKey : public std::runtime_error {
public:
    explicit UnknownAttributeKey(const std::string& key)
        : std::runtime_error("unknown context attribute key '" + key + "'") {}
};

// Exact satisfaction set, by full scan.
ContextCover context_cover(const Context& c, const SequenceDatabase& db);

// Levelwise enumeration of every context with at most max_context_size
// predicates and cover size >= minsup_ctx; anti-monotone pruning, output
// sorted canonically.
std::vector<ContextCover> enumerate_contexts(const SequenceDatabase& db,
                                             std::size_t minsup_ctx,
                                             std::size_t max_context_size);

}  // namespace ctxmine

#endif
