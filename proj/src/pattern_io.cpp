#include "ctxmine/pattern_io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace ctxmine {

namespace {

void append_json_string(std::string& out, const std::string& s) {
    out.push_back('"');
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out.push_back(static_cast<char>(c));
                }
        }
    }
    out.push_back('"');
}

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

GeneralizationMode parse_generalization(const std::string& s) {
    if (s == "fallback") return GeneralizationMode::Fallback;
    if (s == "always") return GeneralizationMode::Always;
    if (s == "off") return GeneralizationMode::Off;
    throw PatternIoError("bad generalization mode '" + s + "'");
}

GapMode parse_gap(const std::string& s) {
    if (s == "gapped") return GapMode::Gapped;
    if (s == "contiguous") return GapMode::Contiguous;
    throw PatternIoError("bad gap mode '" + s + "'");
}

ContextDedup parse_dedup(const std::string& s) {
    if (s == "none") return ContextDedup::None;
    if (s == "most-general") return ContextDedup::MostGeneral;
    throw PatternIoError("bad dedup mode '" + s + "'");
}

}  // namespace

std::string serialize_patterns(const std::vector<Pattern>& patterns,
                               const MiningParams& params) {
    std::string out;
    out += "{\n";
    out += "  \"params\": {\n";
    out += "    \"minsup_seq\": " + fixed6(params.minsup_seq) + ",\n";
    out += "    \"minsup_ctx\": " + std::to_string(params.minsup_ctx) + ",\n";
    out += "    \"max_context_size\": " + std::to_string(params.max_context_size) + ",\n";
    out += "    \"max_pattern_len\": " + std::to_string(params.max_pattern_len) + ",\n";
    out += std::string("    \"generalization\": \"") + to_string(params.generalization) + "\",\n";
    out += std::string("    \"gap\": \"") + to_string(params.gap) + "\",\n";
    out += std::string("    \"dedup\": \"") + to_string(params.dedup) + "\",\n";
    out += std::string("    \"action_mode\": ") + (params.action_mode ? "true" : "false") + ",\n";
    out += std::string("    \"allow_extend_generalized\": ") +
           (params.allow_extend_generalized ? "true" : "false") + "\n";
    out += "  },\n";
    out += "  \"patterns\": [";
    for (std::size_t p = 0; p < patterns.size(); ++p) {
        const Pattern& pat = patterns[p];
        out += p ? ",\n" : "\n";
        out += "    {\n";
        out += "      \"context\": {";
        std::size_t k = 0;
        for (const auto& [key, value] : pat.context.predicates) {
            out += k++ ? ",\n" : "\n";
            out += "        ";
            append_json_string(out, key);
            out += ": ";
            append_json_string(out, value);
        }
        out += pat.context.predicates.empty() ? "},\n" : "\n      },\n";
        out += "      \"sequence\": [";
        for (std::size_t i = 0; i < pat.items.size(); ++i) {
            const Item& item = pat.items[i];
            out += i ? ",\n" : "\n";
            out += "        {";
            if (item.is_concrete()) {
                out += "\"kind\": \"concrete\", \"resource\": ";
                append_json_string(out, item.resource);
                if (item.action) {
                    out += ", \"action\": ";
                    append_json_string(out, *item.action);
                }
            } else {
                out += "\"kind\": \"generalized\", \"attribute\": ";
                append_json_string(out, item.attribute);
                out += ", \"value\": ";
                append_json_string(out, item.value);
            }
            out += "}";
        }
        out += pat.items.empty() ? "],\n" : "\n      ],\n";
        out += "      \"cover\": " + std::to_string(pat.cover) + ",\n";
        out += "      \"count\": " + std::to_string(pat.count) + ",\n";
        out += "      \"support\": " + fixed6(pat.support()) + "\n";
        out += "    }";
    }
    out += patterns.empty() ? "]\n" : "\n  ]\n";
    out += "}\n";
    return out;
}

PatternDocument parse_patterns(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw PatternIoError(std::string("pattern document is not valid JSON: ") +
                             e.what());
    }
    PatternDocument result;
    try {
        const auto& jp = doc.at("params");
        result.params.minsup_seq = jp.at("minsup_seq").get<double>();
        result.params.minsup_ctx = jp.at("minsup_ctx").get<std::size_t>();
        result.params.max_context_size = jp.at("max_context_size").get<std::size_t>();
        result.params.max_pattern_len = jp.at("max_pattern_len").get<std::size_t>();
        result.params.generalization =
            parse_generalization(jp.at("generalization").get<std::string>());
        result.params.gap = parse_gap(jp.at("gap").get<std::string>());
        result.params.dedup = parse_dedup(jp.at("dedup").get<std::string>());
        result.params.action_mode = jp.at("action_mode").get<bool>();
        result.params.allow_extend_generalized =
            jp.at("allow_extend_generalized").get<bool>();

        for (const auto& jpat : doc.at("patterns")) {
            Pattern pat;
            for (const auto& [key, value] : jpat.at("context").items())
                pat.context.predicates.emplace(key, value.get<std::string>());
            for (const auto& ji : jpat.at("sequence")) {
                const std::string kind = ji.at("kind").get<std::string>();
                if (kind == "concrete") {
                    std::optional<std::string> action;
                    if (ji.contains("action"))
                        action = ji["action"].get<std::string>();
                    pat.items.push_back(Item::concrete(
                        ji.at("resource").get<std::string>(), action));
                } else if (kind == "generalized") {
                    pat.items.push_back(
                        Item::generalized(ji.at("attribute").get<std::string>(),
                                          ji.at("value").get<std::string>()));
                } else {
                    throw PatternIoError("bad item kind '" + kind + "'");
                }
            }
            pat.cover = jpat.at("cover").get<std::size_t>();
            pat.count = jpat.at("count").get<std::size_t>();
            result.patterns.push_back(std::move(pat));
        }
    } catch (const nlohmann::json::exception& e) {
        throw PatternIoError(std::string("malformed pattern document: ") +
                             e.what());
    }
    return result;
}

std::vector<Pattern> match_student(const StudentProfile& profile,
                                   const std::vector<Pattern>& patterns) {
    std::vector<Pattern> matched;
    for (const Pattern& pat : patterns) {
        bool ok = true;
        for (const auto& [key, value] : pat.context.predicates) {
            auto it = profile.assignments.find(key);
            if (it == profile.assignments.end() || !it->second.count(value)) {
                ok = false;
                break;
            }
        }
        if (ok) matched.push_back(pat);
    }
    return matched;
}

}  // namespace ctxmine
