#include "ctxmine/oracle.hpp"

#include <algorithm>
#include <set>

namespace ctxmine {
namespace oracle {

namespace {

bool event_matches(const Item& item, const Event& event,
                   const SequenceDatabase& db, const MiningParams& params) {
    if (item.is_concrete()) {
        if (event.resource != item.resource) return false;
        if (params.action_mode && item.action && event.action != *item.action)
            return false;
        return true;
    }
    const ResourceAttributes& attrs = db.attributes_of(event.resource);
    auto it = attrs.attrs.find(item.attribute);
    return it != attrs.attrs.end() && it->second && *it->second == item.value;
}

bool match_gapped(const ContextualizedSequence& seq,
                  const std::vector<Item>& items, std::size_t item_idx,
                  std::size_t from, const SequenceDatabase& db,
                  const MiningParams& params) {
    if (item_idx == items.size()) return true;
    for (std::size_t e = from; e < seq.events.size(); ++e) {
        if (event_matches(items[item_idx], seq.events[e], db, params) &&
            match_gapped(seq, items, item_idx + 1, e + 1, db, params))
            return true;
    }
    return false;
}

bool satisfies(const ContextualizedSequence& seq, const Context& ctx) {
    for (const auto& [key, value] : ctx.predicates) {
        auto it = seq.context.assignments.find(key);
        if (it == seq.context.assignments.end()) return false;
        if (std::find(it->second.begin(), it->second.end(), value) ==
            it->second.end())
            return false;
    }
    return true;
}

struct OracleRun {
    const SequenceDatabase& db;
    const MiningParams& params;
    std::vector<Item> concrete_alphabet;
    std::vector<Item> generalized_alphabet;
    std::vector<Pattern> out;

    std::size_t count(const std::vector<std::uint32_t>& cover,
                      const std::vector<Item>& items) const {
        std::size_t n = 0;
        for (std::uint32_t s : cover)
            if (supports(db.sequences[s], items, db, params)) ++n;
        return n;
    }

    void expand(const Context& ctx, const std::vector<std::uint32_t>& cover,
                std::size_t threshold, std::vector<Item>& prefix) {
        if (prefix.size() >= params.max_pattern_len) return;
        std::vector<std::pair<Item, std::size_t>> frequent_concrete;
        for (const Item& cand : concrete_alphabet) {
            prefix.push_back(cand);
            std::size_t n = count(cover, prefix);
            prefix.pop_back();
            if (n >= threshold) frequent_concrete.emplace_back(cand, n);
        }
        for (const auto& [cand, n] : frequent_concrete) {
            prefix.push_back(cand);
            out.push_back(Pattern{ctx, prefix, cover.size(), n});
            expand(ctx, cover, threshold, prefix);
            prefix.pop_back();
        }
        bool generalize = false;
        if (params.generalization == GeneralizationMode::Always)
            generalize = true;
        else if (params.generalization == GeneralizationMode::Fallback)
            generalize = frequent_concrete.empty();
        if (!generalize) return;
        for (const Item& cand : generalized_alphabet) {
            prefix.push_back(cand);
            std::size_t n = count(cover, prefix);
            if (n >= threshold && !pruned(cand, n, frequent_concrete)) {
                out.push_back(Pattern{ctx, prefix, cover.size(), n});
                if (params.allow_extend_generalized)
                    expand(ctx, cover, threshold, prefix);
            }
            prefix.pop_back();
        }
    }

    bool pruned(const Item& gen, std::size_t gen_count,
                const std::vector<std::pair<Item, std::size_t>>& concrete) const {
        if (params.generalization != GeneralizationMode::Always) return false;
        for (const auto& [item, n] : concrete) {
            if (n != gen_count) continue;
            const ResourceAttributes& attrs = db.attributes_of(item.resource);
            auto it = attrs.attrs.find(gen.attribute);
            if (it != attrs.attrs.end() && it->second && *it->second == gen.value)
                return true;
        }
        return false;
    }
};

}  // namespace

bool supports(const ContextualizedSequence& seq, const std::vector<Item>& items,
              const SequenceDatabase& db, const MiningParams& params) {
    if (items.empty()) return true;
    if (params.gap == GapMode::Gapped)
        return match_gapped(seq, items, 0, 0, db, params);
    if (seq.events.size() < items.size()) return false;
    for (std::size_t start = 0; start + items.size() <= seq.events.size();
         ++start) {
        bool ok = true;
        for (std::size_t j = 0; j < items.size(); ++j) {
            if (!event_matches(items[j], seq.events[start + j], db, params)) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
    }
    return false;
}

std::vector<Pattern> brute_force_mine(const SequenceDatabase& db,
                                      const MiningParams& params,
                                      std::size_t max_students) {
    if (db.sequences.size() > max_students)
        throw InstanceTooLarge(db.sequences.size(), max_students);

    OracleRun run{db, params, {}, {}, {}};

    // Candidate alphabets: every observed concrete item, every declared
    // attribute value of the generalizing source.
    {
        std::set<Item> concrete;
        for (const auto& seq : db.sequences)
            for (const auto& e : seq.events)
                concrete.insert(Item::concrete(
                    e.resource, params.action_mode
                                    ? std::optional<std::string>(e.action)
                                    : std::nullopt));
        run.concrete_alphabet.assign(concrete.begin(), concrete.end());
        for (const auto& [key, values] : db.resource_domains)
            for (const auto& v : values)
                run.generalized_alphabet.push_back(Item::generalized(key, v));
    }

    // All candidate contexts, one predicate per key, smallest first.
    std::vector<std::pair<std::string, std::string>> universe;
    for (const auto& [key, values] : db.context_domains)
        for (const auto& v : values) universe.emplace_back(key, v);

    std::vector<std::pair<Context, std::vector<std::uint32_t>>> frequent;
    std::vector<std::pair<std::string, std::string>> chosen;
    auto cover_of = [&](const Context& ctx) {
        std::vector<std::uint32_t> cover;
        for (std::uint32_t s = 0; s < db.sequences.size(); ++s)
            if (satisfies(db.sequences[s], ctx)) cover.push_back(s);
        return cover;
    };
    auto enumerate = [&](auto&& self, std::size_t start) -> void {
        Context ctx;
        for (const auto& [k, v] : chosen) ctx.predicates.emplace(k, v);
        auto cover = cover_of(ctx);
        if (cover.size() >= params.minsup_ctx)
            frequent.emplace_back(std::move(ctx), std::move(cover));
        if (chosen.size() >= params.max_context_size) return;
        for (std::size_t u = start; u < universe.size(); ++u) {
            bool dup_key = false;
            for (const auto& [k, v] : chosen)
                if (k == universe[u].first) dup_key = true;
            if (dup_key) continue;
            chosen.push_back(universe[u]);
            self(self, u + 1);
            chosen.pop_back();
        }
    };
    enumerate(enumerate, 0);

    for (const auto& [ctx, cover] : frequent) {
        if (params.dedup == ContextDedup::MostGeneral) {
            bool redundant = false;
            for (const auto& [gctx, gcover] : frequent) {
                if (gctx.size() >= ctx.size()) continue;
                if (ctx.specializes(gctx) && gcover == cover) {
                    redundant = true;
                    break;
                }
            }
            if (redundant) continue;
        }
        std::vector<Item> prefix;
        run.expand(ctx, cover, params.threshold(cover.size()), prefix);
    }

    std::sort(run.out.begin(), run.out.end(), pattern_order);
    return run.out;
}

}  // namespace oracle
}  // namespace ctxmine
