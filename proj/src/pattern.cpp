#include "ctxmine/pattern.hpp"

#include <cmath>

namespace ctxmine {

Item Item::concrete(std::string resource, std::optional<std::string> action) {
    Item item;
    item.kind = Kind::Concrete;
    item.resource = std::move(resource);
    item.action = std::move(action);
    return item;
}

Item Item::generalized(std::string attribute, std::string value) {
    Item item;
    item.kind = Kind::Generalized;
    item.attribute = std::move(attribute);
    item.value = std::move(value);
    return item;
}

std::string Item::canonical() const {
    if (kind == Kind::Concrete) {
        std::string out = resource;
        if (action) {
            out.push_back('@');
            out += *action;
        }
        return out;
    }
    return attribute + "=" + value;
}

std::size_t MiningParams::threshold(std::size_t cover_size) const {
    auto t = static_cast<std::size_t>(
        std::ceil(minsup_seq * static_cast<double>(cover_size)));
    return t < 1 ? 1 : t;
}

bool pattern_order(const Pattern& a, const Pattern& b) {
    if (a.context != b.context) return a.context < b.context;
    if (a.items != b.items) return a.items < b.items;
    return a.count > b.count;
}

const char* to_string(GeneralizationMode m) {
    switch (m) {
        case GeneralizationMode::Fallback: return "fallback";
        case GeneralizationMode::Always: return "always";
        case GeneralizationMode::Off: return "off";
    }
    return "?";
}

const char* to_string(GapMode m) {
    return m == GapMode::Gapped ? "gapped" : "contiguous";
}

const char* to_string(ContextDedup d) {
    return d == ContextDedup::None ? "none" : "most-general";
}

}  // namespace ctxmine
