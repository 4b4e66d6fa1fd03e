#include "ctxmine/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>

#include <json.hpp>

#include "ctxmine/contextdb.hpp"

namespace ctxmine {
namespace synthgen {

namespace {

// All randomness flows through mt19937_64 (fully specified by the standard)
// with explicit mappings below; std::*_distribution is not reproducible
// across standard libraries.
std::uint64_t pick_below(std::mt19937_64& rng, std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % n;
}

double unit_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Samples a cell for one attribute; empty string means Unknown.
std::string sample_attribute(const AttributeSpec& spec, std::mt19937_64& rng) {
    double total = spec.unknown_weight;
    std::vector<double> weights = spec.weights;
    if (weights.empty()) weights.assign(spec.values.size(), 1.0);
    for (double w : weights) total += w;
    double r = unit_double(rng) * total;
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
        if (r < weights[i]) return spec.values[i];
        r -= weights[i];
    }
    return std::string();  // Unknown
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::string padded_id(const char* prefix, std::size_t i, std::size_t width) {
    std::string digits = std::to_string(i);
    std::string out = prefix;
    out.append(width > digits.size() ? width - digits.size() : 0, '0');
    out += digits;
    return out;
}

std::vector<AttributeSpec> parse_attributes(const nlohmann::json& arr) {
    std::vector<AttributeSpec> specs;
    for (const auto& ja : arr) {
        AttributeSpec spec;
        spec.name = ja.at("name").get<std::string>();
        spec.values = ja.at("values").get<std::vector<std::string>>();
        if (ja.contains("weights"))
            spec.weights = ja["weights"].get<std::vector<double>>();
        if (ja.contains("unknown_weight"))
            spec.unknown_weight = ja["unknown_weight"].get<double>();
        if (!spec.weights.empty() && spec.weights.size() != spec.values.size())
            throw InfeasibleConfig("attribute '" + spec.name +
                                   "': weights/values length mismatch");
        specs.push_back(std::move(spec));
    }
    return specs;
}

Item parse_item(const nlohmann::json& ji) {
    const std::string kind = ji.at("kind").get<std::string>();
    if (kind == "concrete") {
        std::optional<std::string> action;
        if (ji.contains("action")) action = ji["action"].get<std::string>();
        return Item::concrete(ji.at("resource").get<std::string>(), action);
    }
    if (kind == "generalized")
        return Item::generalized(ji.at("attribute").get<std::string>(),
                                 ji.at("value").get<std::string>());
    throw InfeasibleConfig("unknown item kind '" + kind + "'");
}

}  // namespace

GeneratorConfig parse_config(const std::string& json_text) {
    nlohmann::json doc = nlohmann::json::parse(json_text);
    GeneratorConfig cfg;
    cfg.seed = doc.at("seed").get<std::uint64_t>();
    cfg.n_students = doc.at("n_students").get<std::size_t>();
    cfg.n_curricula = doc.value("n_curricula", std::size_t{1});
    cfg.n_resources = doc.at("n_resources").get<std::size_t>();
    cfg.student_attributes = parse_attributes(doc.at("student_attributes"));
    if (doc.contains("curriculum_attributes"))
        cfg.curriculum_attributes = parse_attributes(doc["curriculum_attributes"]);
    cfg.resource_attributes = parse_attributes(doc.at("resource_attributes"));
    if (doc.contains("noise_events_per_student")) {
        auto range = doc["noise_events_per_student"];
        cfg.noise_min = range.at(0).get<std::size_t>();
        cfg.noise_max = range.at(1).get<std::size_t>();
        if (cfg.noise_max < cfg.noise_min)
            throw InfeasibleConfig("noise range is inverted");
    }
    if (doc.contains("planted_patterns")) {
        for (const auto& jp : doc["planted_patterns"]) {
            PlantedPattern p;
            for (const auto& [key, value] :
                 jp.at("context").get<std::map<std::string, std::string>>())
                p.context.predicates.emplace(key, value);
            for (const auto& ji : jp.at("sequence")) p.items.push_back(parse_item(ji));
            if (p.items.empty())
                throw InfeasibleConfig("planted pattern with empty sequence");
            p.carrier_fraction = jp.value("carrier_fraction", 1.0);
            if (p.carrier_fraction <= 0.0 || p.carrier_fraction > 1.0)
                throw InfeasibleConfig("carrier_fraction must be in (0,1]");
            cfg.planted.push_back(std::move(p));
        }
    }
    return cfg;
}

GroundTruth generate(const GeneratorConfig& config,
                     const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::mt19937_64 rng(config.seed);

    const std::size_t id_width = std::max<std::size_t>(
        4, std::to_string(std::max<std::size_t>(config.n_students, 1)).size());

    // Curricula.
    std::vector<std::string> curriculum_ids;
    std::vector<std::vector<std::string>> curriculum_cells;  // per row
    for (std::size_t i = 1; i <= config.n_curricula; ++i) {
        curriculum_ids.push_back(padded_id("C-", i, 1));
        std::vector<std::string> cells;
        for (const auto& spec : config.curriculum_attributes)
            cells.push_back(sample_attribute(spec, rng));
        curriculum_cells.push_back(std::move(cells));
    }

    // Resources.
    std::vector<std::string> resource_ids;
    std::vector<std::vector<std::string>> resource_cells;
    for (std::size_t i = 1; i <= config.n_resources; ++i) {
        resource_ids.push_back(padded_id("R-", i, 1));
        std::vector<std::string> cells;
        for (const auto& spec : config.resource_attributes)
            cells.push_back(sample_attribute(spec, rng));
        resource_cells.push_back(std::move(cells));
    }

    // Students with their resolved context vectors.
    std::vector<std::string> student_ids;
    std::vector<std::vector<std::string>> student_cells;
    std::vector<std::size_t> student_curriculum;
    std::vector<ContextVector> student_context;
    for (std::size_t i = 1; i <= config.n_students; ++i) {
        student_ids.push_back(padded_id("s-", i, id_width));
        std::vector<std::string> cells;
        ContextVector ctx;
        for (const auto& spec : config.student_attributes) {
            std::string v = sample_attribute(spec, rng);
            if (!v.empty()) ctx.add("student." + spec.name, v);
            cells.push_back(std::move(v));
        }
        std::size_t cu = config.n_curricula == 0
                             ? 0
                             : pick_below(rng, config.n_curricula);
        if (config.n_curricula > 0) {
            for (std::size_t a = 0; a < config.curriculum_attributes.size(); ++a) {
                const std::string& v = curriculum_cells[cu][a];
                if (!v.empty())
                    ctx.add("curriculum." + config.curriculum_attributes[a].name, v);
            }
        }
        student_cells.push_back(std::move(cells));
        student_curriculum.push_back(cu);
        student_context.push_back(std::move(ctx));
    }

    // Resource pools per (attribute, value), for generalized planted items.
    std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> pools;
    for (std::size_t r = 0; r < resource_ids.size(); ++r)
        for (std::size_t a = 0; a < config.resource_attributes.size(); ++a)
            if (!resource_cells[r][a].empty())
                pools[{"resource." + config.resource_attributes[a].name,
                       resource_cells[r][a]}]
                    .push_back(r);

    // Select carriers per planted pattern.
    GroundTruth truth;
    std::vector<std::vector<std::size_t>> carriers_of(config.planted.size());
    for (std::size_t p = 0; p < config.planted.size(); ++p) {
        const PlantedPattern& plant = config.planted[p];
        std::vector<std::size_t> matching;
        for (std::size_t s = 0; s < student_ids.size(); ++s)
            if (plant.context.satisfied_by(student_context[s])) matching.push_back(s);
        if (matching.empty())
            throw InfeasibleConfig("planted pattern " + std::to_string(p) +
                                   ": context '" + plant.context.canonical() +
                                   "' matches no student");
        for (const Item& item : plant.items) {
            if (item.is_concrete()) {
                if (std::find(resource_ids.begin(), resource_ids.end(),
                              item.resource) == resource_ids.end())
                    throw InfeasibleConfig("planted pattern " + std::to_string(p) +
                                           ": undeclared resource " + item.resource);
            } else if (!pools.count({item.attribute, item.value})) {
                throw InfeasibleConfig("planted pattern " + std::to_string(p) +
                                       ": no resource with " + item.canonical());
            }
        }
        // Fisher-Yates then a prefix of the shuffle.
        for (std::size_t i = matching.size(); i > 1; --i)
            std::swap(matching[i - 1], matching[pick_below(rng, i)]);
        const auto n_carriers = static_cast<std::size_t>(std::ceil(
            plant.carrier_fraction * static_cast<double>(matching.size())));
        truth.planted.push_back(
            PlantedTruth{plant, matching.size(), n_carriers});
        carriers_of[p].assign(matching.begin(), matching.begin() + n_carriers);
    }

    // Event lists: noise first, planted item sequences inserted in order.
    std::vector<std::vector<std::size_t>> events(student_ids.size());
    for (std::size_t s = 0; s < student_ids.size(); ++s) {
        std::size_t n_noise =
            config.noise_min +
            pick_below(rng, config.noise_max - config.noise_min + 1);
        for (std::size_t i = 0; i < n_noise && config.n_resources > 0; ++i)
            events[s].push_back(pick_below(rng, config.n_resources));
    }
    for (std::size_t p = 0; p < config.planted.size(); ++p) {
        for (std::size_t s : carriers_of[p]) {
            std::size_t lo = 0;
            for (const Item& item : config.planted[p].items) {
                std::size_t r;
                if (item.is_concrete()) {
                    r = static_cast<std::size_t>(
                        std::find(resource_ids.begin(), resource_ids.end(),
                                  item.resource) -
                        resource_ids.begin());
                } else {
                    const auto& pool = pools.at({item.attribute, item.value});
                    r = pool[pick_below(rng, pool.size())];
                }
                std::size_t pos = lo + pick_below(rng, events[s].size() - lo + 1);
                events[s].insert(events[s].begin() + static_cast<std::ptrdiff_t>(pos), r);
                lo = pos + 1;
            }
        }
    }

    // File emission.
    auto header_line = [](const std::vector<std::string>& cols) {
        std::string line;
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (i) line.push_back(',');
            line += csv_escape(cols[i]);
        }
        line.push_back('\n');
        return line;
    };

    std::vector<std::string> student_cols{"student_id"};
    for (const auto& spec : config.student_attributes) student_cols.push_back(spec.name);
    student_cols.push_back("curriculum_id");
    std::string students_csv = header_line(student_cols);
    for (std::size_t s = 0; s < student_ids.size(); ++s) {
        students_csv += csv_escape(student_ids[s]);
        for (const auto& v : student_cells[s]) students_csv += "," + csv_escape(v);
        students_csv += ",";
        if (config.n_curricula > 0)
            students_csv += csv_escape(curriculum_ids[student_curriculum[s]]);
        students_csv += "\n";
    }

    std::vector<std::string> curriculum_cols{"curriculum_id"};
    for (const auto& spec : config.curriculum_attributes)
        curriculum_cols.push_back(spec.name);
    std::string curricula_csv = header_line(curriculum_cols);
    for (std::size_t c = 0; c < curriculum_ids.size(); ++c) {
        curricula_csv += csv_escape(curriculum_ids[c]);
        for (const auto& v : curriculum_cells[c]) curricula_csv += "," + csv_escape(v);
        curricula_csv += "\n";
    }

    std::vector<std::string> resource_cols{"resource_id"};
    for (const auto& spec : config.resource_attributes)
        resource_cols.push_back(spec.name);
    std::string resources_csv = header_line(resource_cols);
    for (std::size_t r = 0; r < resource_ids.size(); ++r) {
        resources_csv += csv_escape(resource_ids[r]);
        for (const auto& v : resource_cells[r]) resources_csv += "," + csv_escape(v);
        resources_csv += "\n";
    }

    std::string activity_csv = "student_id,resource_id,timestamp,action\n";
    for (std::size_t s = 0; s < student_ids.size(); ++s) {
        for (std::size_t i = 0; i < events[s].size(); ++i) {
            activity_csv += csv_escape(student_ids[s]) + "," +
                            csv_escape(resource_ids[events[s][i]]) + "," +
                            std::to_string(i * 10) + ",view\n";
        }
    }

    nlohmann::ordered_json manifest;
    manifest["sources"] = nlohmann::ordered_json::array();
    auto add_source = [&](const char* name, const char* role, const char* path,
                          const char* key,
                          const std::vector<std::string>& cols) {
        nlohmann::ordered_json js;
        js["name"] = name;
        js["role"] = role;
        js["path"] = path;
        if (key) js["key_column"] = key;
        js["columns"] = cols;
        manifest["sources"].push_back(std::move(js));
    };
    add_source("activity", "core", "activity.csv", nullptr,
               {"student_id", "resource_id", "timestamp", "action"});
    add_source("student", "refining", "students.csv", "student_id", student_cols);
    add_source("curriculum", "refining", "curricula.csv", "curriculum_id",
               curriculum_cols);
    add_source("resource", "generalizing", "resources.csv", "resource_id",
               resource_cols);
    manifest["links"] = nlohmann::ordered_json::array();
    auto add_link = [&](const char* from, const char* to, const char* via,
                        const char* kind) {
        nlohmann::ordered_json jl;
        jl["from"] = from;
        jl["to"] = to;
        jl["via"] = via;
        jl["kind"] = kind;
        manifest["links"].push_back(std::move(jl));
    };
    add_link("activity", "student", "student_id", "source_to_source");
    add_link("student", "curriculum", "curriculum_id", "source_to_source");
    add_link("activity", "resource", "resource_id", "element_to_source");

    nlohmann::ordered_json gt;
    gt["planted"] = nlohmann::ordered_json::array();
    for (const auto& t : truth.planted) {
        nlohmann::ordered_json jp;
        jp["context"] = nlohmann::ordered_json::object();
        for (const auto& [k, v] : t.pattern.context.predicates) jp["context"][k] = v;
        jp["sequence"] = nlohmann::ordered_json::array();
        for (const auto& item : t.pattern.items) {
            nlohmann::ordered_json ji;
            if (item.is_concrete()) {
                ji["kind"] = "concrete";
                ji["resource"] = item.resource;
                if (item.action) ji["action"] = *item.action;
            } else {
                ji["kind"] = "generalized";
                ji["attribute"] = item.attribute;
                ji["value"] = item.value;
            }
            jp["sequence"].push_back(std::move(ji));
        }
        jp["carrier_fraction"] = t.pattern.carrier_fraction;
        jp["matching_students"] = t.matching_students;
        jp["min_count"] = t.min_count;
        gt["planted"].push_back(std::move(jp));
    }

    write_file(out_dir / "students.csv", students_csv);
    write_file(out_dir / "curricula.csv", curricula_csv);
    write_file(out_dir / "resources.csv", resources_csv);
    write_file(out_dir / "activity.csv", activity_csv);
    write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
    write_file(out_dir / "ground_truth.json", gt.dump(2) + "\n");
    return truth;
}

}  // namespace synthgen
}  // namespace ctxmine
