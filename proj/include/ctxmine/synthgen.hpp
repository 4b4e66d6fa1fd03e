#ifndef CTXMINE_SYNTHGEN_HPP
#define CTXMINE_SYNTHGEN_HPP

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctxmine/pattern.hpp"

namespace ctxmine {
namespace synthgen {

struct AttributeSpec {
    std::string name;
    std::vector<std::string> values;
    std::vector<double> weights;    // same length as values; uniform if empty
    double unknown_weight = 0.0;    // weight of emitting an Unknown cell
};

struct PlantedPattern {
    Context context;
    std::vector<Item> items;
    double carrier_fraction = 1.0;  // fraction of matching students carrying it
};

// Fixed star shape: activity core, student + curriculum refining,
// resource generalizing. Attribute schemas and pattern plants vary.
struct GeneratorConfig {
    std::uint64_t seed = 0;
    std::size_t n_students = 0;
    std::size_t n_curricula = 1;
    std::size_t n_resources = 1;
    std::vector<AttributeSpec> student_attributes;
    std::vector<AttributeSpec> curriculum_attributes;
    std::vector<AttributeSpec> resource_attributes;
    std::size_t noise_min = 0;  // noise events per student, inclusive range
    std::size_t noise_max = 0;
    std::vector<PlantedPattern> planted;
};

struct PlantedTruth {
    PlantedPattern pattern;
    std::size_t matching_students = 0;
    std::size_t min_count = 0;  // guaranteed carriers
};

struct GroundTruth {
    std::vector<PlantedTruth> planted;
};

class InfeasibleConfig : public std::runtime_error {
public:
    explicit InfeasibleConfig(const std::string& what)
        : std::runtime_error(what) {}
};

GeneratorConfig parse_config(const std::string& json_text);

// Writes students.csv, curricula.csv, resources.csv, activity.csv,
// manifest.json and ground_truth.json into out_dir. Same config + seed
// produce byte-identical files.
GroundTruth generate(const GeneratorConfig& config,
                     const std::filesystem::path& out_dir);

}  // namespace synthgen
}  // namespace ctxmine

#endif
