#ifndef CTXMINE_PATTERN_HPP
#define CTXMINE_PATTERN_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ctxmine/context.hpp"

namespace ctxmine {

// A pattern element: a concrete resource id, or an attribute=value
// generalization over resource descriptions.
struct Item {
    enum class Kind { Concrete, Generalized };

    Kind kind = Kind::Concrete;
    std::string resource;                // Concrete
    std::string attribute;               // Generalized: namespaced key
    std::string value;                   // Generalized: never Unknown
    std::optional<std::string> action;   // Concrete, action-mode only

    static Item concrete(std::string resource,
                         std::optional<std::string> action = std::nullopt);
    static Item generalized(std::string attribute, std::string value);

    bool is_concrete() const { return kind == Kind::Concrete; }
    std::string canonical() const;

    auto operator<=>(const Item&) const = default;
};

struct Pattern {
    Context context;
    std::vector<Item> items;
    std::size_t cover = 0;  // |cover(context)|
    std::size_t count = 0;  // supporting students

    double support() const {
        return cover == 0 ? 0.0 : static_cast<double>(count) / cover;
    }

    bool operator==(const Pattern&) const = default;
};

enum class GeneralizationMode { Fallback, Always, Off };
enum class GapMode { Gapped, Contiguous };
enum class ContextDedup { None, MostGeneral };

struct MiningParams {
    double minsup_seq = 0.5;          // fraction of the context cover
    std::size_t minsup_ctx = 2;       // absolute student count
    std::size_t max_context_size = 3;
    std::size_t max_pattern_len = 5;
    GeneralizationMode generalization = GeneralizationMode::Fallback;
    bool allow_extend_generalized = false;
    GapMode gap = GapMode::Gapped;
    bool action_mode = false;
    ContextDedup dedup = ContextDedup::None;
    std::size_t workers = 1;

    // ceiling(minsup_seq * cover), never below 1.
    std::size_t threshold(std::size_t cover_size) const;
};

// Canonical output order: context, then items, then count descending.
bool pattern_order(const Pattern& a, const Pattern& b);

const char* to_string(GeneralizationMode m);
const char* to_string(GapMode m);
const char* to_string(ContextDedup d);

}  // namespace ctxmine

#endif
