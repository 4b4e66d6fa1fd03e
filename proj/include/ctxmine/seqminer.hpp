#ifndef CTXMINE_SEQMINER_HPP
#define CTXMINE_SEQMINER_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ctxmine/pattern.hpp"

namespace ctxmine {

bool item_matches_event(const Item& item, const Event& event,
                        const SequenceDatabase& db, const MiningParams& params);

// True iff `items` occurs in the sequence at strictly increasing event
// indices (consecutive indices when gap_mode is contiguous).
bool sequence_supports(const ContextualizedSequence& seq,
                       std::span<const Item> items, const SequenceDatabase& db,
                       const MiningParams& params);

// Distinct supporting students within the cover, by full scan.
std::size_t count_support(const ContextCover& cover, std::span<const Item> items,
                          const SequenceDatabase& db, const MiningParams& params);

// Pseudo-projection: per supporting student, the positions where the next
// item may match. Gapped mode keeps a single earliest position (any index
// at or after it is allowed); contiguous mode keeps every exact position.
struct ProjectionEntry {
    std::uint32_t seq;
    std::vector<std::uint32_t> positions;
};

struct Projection {
    std::vector<ProjectionEntry> entries;

    std::size_t student_count() const { return entries.size(); }
};

// Projection of the empty prefix over a context cover.
Projection initial_projection(const ContextCover& cover,
                              const SequenceDatabase& db,
                              const MiningParams& params);

// Extends the projection by one item; students with no match drop out.
Projection project(const Projection& proj, const Item& item,
                   const SequenceDatabase& db, const MiningParams& params);

// Every concrete item occurring at a valid extension point in >= threshold
// students, with exact per-student counts; sorted by item.
std::vector<std::pair<Item, std::size_t>> frequent_concrete_extensions(
    const Projection& proj, std::size_t threshold, const SequenceDatabase& db,
    const MiningParams& params);

// Generalized (attribute=value) extensions at >= threshold. In always mode
// a generalization is dropped when a single frequent concrete extension
// bearing that attribute value has the same count.
std::vector<std::pair<Item, std::size_t>> frequent_generalized_extensions(
    const Projection& proj, std::size_t threshold, const SequenceDatabase& db,
    const MiningParams& params,
    const std::vector<std::pair<Item, std::size_t>>& frequent_concrete);

// Prefix-projection mining within one frequent context.
std::vector<Pattern> mine_context(const ContextCover& cover,
                                  const SequenceDatabase& db,
                                  const MiningParams& params);

// Full run: frequent contexts, optional most-general dedup, per-context
// mining (parallel across params.workers), canonically sorted output.
std::vector<Pattern> mine(const SequenceDatabase& db, const MiningParams& params);

// Frequent contexts after the dedup policy; exposed for the driver and tests.
std::vector<ContextCover> frequent_contexts(const SequenceDatabase& db,
                                            const MiningParams& params);

}  // namespace ctxmine

#endif
