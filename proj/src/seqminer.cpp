#include "ctxmine/seqminer.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <thread>

namespace ctxmine {

bool item_matches_event(const Item& item, const Event& event,
                        const SequenceDatabase& db, const MiningParams& params) {
    if (item.is_concrete()) {
        if (event.resource != item.resource) return false;
        if (params.action_mode && item.action && event.action != *item.action)
            return false;
        return true;
    }
    const ResourceAttributes& attrs = db.attributes_of(event.resource);
    auto it = attrs.attrs.find(item.attribute);
    return it != attrs.attrs.end() && it->second.has_value() &&
           *it->second == item.value;
}

bool sequence_supports(const ContextualizedSequence& seq,
                       std::span<const Item> items, const SequenceDatabase& db,
                       const MiningParams& params) {
    if (items.empty()) return true;
    const auto& events = seq.events;
    if (params.gap == GapMode::Gapped) {
        // Greedy earliest match is complete for plain subsequences.
        std::size_t next = 0;
        for (std::size_t e = 0; e < events.size() && next < items.size(); ++e)
            if (item_matches_event(items[next], events[e], db, params)) ++next;
        return next == items.size();
    }
    // Contiguous: a run of |items| consecutive events.
    if (events.size() < items.size()) return false;
    for (std::size_t start = 0; start + items.size() <= events.size(); ++start) {
        bool ok = true;
        for (std::size_t j = 0; j < items.size() && ok; ++j)
            ok = item_matches_event(items[j], events[start + j], db, params);
        if (ok) return true;
    }
    return false;
}

std::size_t count_support(const ContextCover& cover, std::span<const Item> items,
                          const SequenceDatabase& db, const MiningParams& params) {
    std::size_t n = 0;
    for (std::uint32_t s : cover.students)
        if (sequence_supports(db.sequences[s], items, db, params)) ++n;
    return n;
}

Projection initial_projection(const ContextCover& cover,
                              const SequenceDatabase& db,
                              const MiningParams& params) {
    Projection proj;
    proj.entries.reserve(cover.students.size());
    for (std::uint32_t s : cover.students) {
        const auto& events = db.sequences[s].events;
        if (events.empty()) continue;
        ProjectionEntry entry;
        entry.seq = s;
        if (params.gap == GapMode::Gapped) {
            entry.positions = {0};
        } else {
            entry.positions.resize(events.size());
            for (std::uint32_t i = 0; i < events.size(); ++i)
                entry.positions[i] = i;
        }
        proj.entries.push_back(std::move(entry));
    }
    return proj;
}

Projection project(const Projection& proj, const Item& item,
                   const SequenceDatabase& db, const MiningParams& params) {
    Projection out;
    for (const auto& entry : proj.entries) {
        const auto& events = db.sequences[entry.seq].events;
        ProjectionEntry next;
        next.seq = entry.seq;
        if (params.gap == GapMode::Gapped) {
            for (std::uint32_t i = entry.positions[0]; i < events.size(); ++i) {
                if (item_matches_event(item, events[i], db, params)) {
                    next.positions = {i + 1};
                    break;
                }
            }
        } else {
            for (std::uint32_t p : entry.positions)
                if (p < events.size() &&
                    item_matches_event(item, events[p], db, params))
                    next.positions.push_back(p + 1);
        }
        if (!next.positions.empty()) out.entries.push_back(std::move(next));
    }
    return out;
}

namespace {

// Events reachable as the next pattern element from one projection entry.
template <typename Fn>
void for_each_extension_event(const ProjectionEntry& entry,
                              const SequenceDatabase& db,
                              const MiningParams& params, Fn&& fn) {
    const auto& events = db.sequences[entry.seq].events;
    if (params.gap == GapMode::Gapped) {
        for (std::uint32_t i = entry.positions[0]; i < events.size(); ++i)
            fn(events[i]);
    } else {
        for (std::uint32_t p : entry.positions)
            if (p < events.size()) fn(events[p]);
    }
}

}  // namespace

std::vector<std::pair<Item, std::size_t>> frequent_concrete_extensions(
    const Projection& proj, std::size_t threshold, const SequenceDatabase& db,
    const MiningParams& params) {
    std::map<Item, std::size_t> counts;
    std::vector<Item> seen;  // per-student dedup
    for (const auto& entry : proj.entries) {
        seen.clear();
        for_each_extension_event(entry, db, params, [&](const Event& e) {
            Item item = Item::concrete(
                e.resource, params.action_mode
                                ? std::optional<std::string>(e.action)
                                : std::nullopt);
            seen.push_back(std::move(item));
        });
        std::sort(seen.begin(), seen.end());
        seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
        for (const auto& item : seen) ++counts[item];
    }
    std::vector<std::pair<Item, std::size_t>> out;
    for (const auto& [item, count] : counts)
        if (count >= threshold) out.emplace_back(item, count);
    return out;
}

std::vector<std::pair<Item, std::size_t>> frequent_generalized_extensions(
    const Projection& proj, std::size_t threshold, const SequenceDatabase& db,
    const MiningParams& params,
    const std::vector<std::pair<Item, std::size_t>>& frequent_concrete) {
    std::map<Item, std::size_t> counts;
    std::vector<Item> seen;
    for (const auto& entry : proj.entries) {
        seen.clear();
        for_each_extension_event(entry, db, params, [&](const Event& e) {
            const ResourceAttributes& attrs = db.attributes_of(e.resource);
            for (const auto& [key, value] : attrs.attrs)
                if (value) seen.push_back(Item::generalized(key, *value));
        });
        std::sort(seen.begin(), seen.end());
        seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
        for (const auto& item : seen) ++counts[item];
    }
    std::vector<std::pair<Item, std::size_t>> out;
    for (const auto& [item, count] : counts) {
        if (count < threshold) continue;
        if (params.generalization == GeneralizationMode::Always) {
            // A generalization that covers no more students than one of its
            // frequent concrete carriers adds nothing.
            bool dominated = false;
            for (const auto& [conc, conc_count] : frequent_concrete) {
                if (conc_count != count) continue;
                const ResourceAttributes& attrs = db.attributes_of(conc.resource);
                auto it = attrs.attrs.find(item.attribute);
                if (it != attrs.attrs.end() && it->second &&
                    *it->second == item.value) {
                    dominated = true;
                    break;
                }
            }
            if (dominated) continue;
        }
        out.emplace_back(item, count);
    }
    return out;
}

namespace {

struct ContextMiner {
    const ContextCover& cover;
    const SequenceDatabase& db;
    const MiningParams& params;
    std::size_t threshold;
    std::vector<Pattern>& out;
    std::vector<Item> prefix;

    void emit(std::size_t count) {
        out.push_back(Pattern{cover.context, prefix, cover.students.size(), count});
    }

    void grow(const Projection& proj) {
        if (prefix.size() >= params.max_pattern_len) return;
        auto concrete =
            frequent_concrete_extensions(proj, threshold, db, params);
        for (const auto& [item, count] : concrete) {
            prefix.push_back(item);
            emit(count);
            grow(project(proj, item, db, params));
            prefix.pop_back();
        }
        bool try_generalized = false;
        switch (params.generalization) {
            case GeneralizationMode::Off: break;
            case GeneralizationMode::Always: try_generalized = true; break;
            case GeneralizationMode::Fallback:
                try_generalized = concrete.empty();
                break;
        }
        if (!try_generalized) return;
        auto generalized =
            frequent_generalized_extensions(proj, threshold, db, params, concrete);
        for (const auto& [item, count] : generalized) {
            prefix.push_back(item);
            emit(count);
            // Generalized items are terminal unless extension is enabled.
            if (params.allow_extend_generalized)
                grow(project(proj, item, db, params));
            prefix.pop_back();
        }
    }
};

}  // namespace

std::vector<Pattern> mine_context(const ContextCover& cover,
                                  const SequenceDatabase& db,
                                  const MiningParams& params) {
    std::vector<Pattern> out;
    ContextMiner miner{cover, db, params, params.threshold(cover.students.size()),
                       out, {}};
    miner.grow(initial_projection(cover, db, params));
    return out;
}

std::vector<ContextCover> frequent_contexts(const SequenceDatabase& db,
                                            const MiningParams& params) {
    auto contexts =
        enumerate_contexts(db, params.minsup_ctx, params.max_context_size);
    if (params.dedup != ContextDedup::MostGeneral) return contexts;
    std::vector<ContextCover> kept;
    for (const auto& c : contexts) {
        bool redundant = false;
        for (const auto& g : contexts) {
            if (g.context.size() >= c.context.size()) continue;
            if (c.context.specializes(g.context) && c.students == g.students) {
                redundant = true;
                break;
            }
        }
        if (!redundant) kept.push_back(c);
    }
    return kept;
}

std::vector<Pattern> mine(const SequenceDatabase& db, const MiningParams& params) {
    auto contexts = frequent_contexts(db, params);
    std::vector<std::vector<Pattern>> results(contexts.size());

    const std::size_t workers =
        std::max<std::size_t>(1, std::min(params.workers, contexts.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < contexts.size(); ++i)
            results[i] = mine_context(contexts[i], db, params);
    } else {
        std::atomic<std::size_t> cursor{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = cursor.fetch_add(1);
                    if (i >= contexts.size()) return;
                    results[i] = mine_context(contexts[i], db, params);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    std::vector<Pattern> merged;
    for (auto& part : results)
        merged.insert(merged.end(), std::make_move_iterator(part.begin()),
                      std::make_move_iterator(part.end()));
    std::sort(merged.begin(), merged.end(), pattern_order);
    return merged;
}

}  // namespace ctxmine
