#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ctxmine/contextdb.hpp"
#include "ctxmine/ingest.hpp"
#include "ctxmine/oracle.hpp"
#include "ctxmine/pattern_io.hpp"
#include "ctxmine/schema.hpp"
#include "ctxmine/seqminer.hpp"
#include "ctxmine/synthgen.hpp"

namespace fs = std::filesystem;
using namespace ctxmine;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError(IngestError::Code::IoError,
                               "cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Manifest paths are resolved relative to the manifest's directory.
SchemaModel load_schema(const fs::path& manifest_path) {
    SchemaModel model = validate_schema(read_file(manifest_path));
    const fs::path base = manifest_path.parent_path();
    for (auto& src : model.sources) {
        fs::path p = src.path;
        if (p.is_relative()) src.path = (base / p).string();
    }
    return model;
}

void write_output(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestError(IngestError::Code::IoError,
                                "cannot write '" + path + "'");
    out << content;
}

int run_validate(const std::string& schema_path) {
    SchemaModel model = validate_schema(read_file(schema_path));
    std::cout << "ok: " << model.sources.size() << " sources, "
              << model.links.size() << " links\n";
    return kExitOk;
}

int run_mine(const std::string& schema_path, const MiningParams& params,
             const std::string& output) {
    SchemaModel schema = load_schema(schema_path);
    SequenceDatabase db = load_database(schema);
    if (db.broken_link_warnings)
        std::cerr << "warning: " << db.broken_link_warnings
                  << " unresolved link keys\n";
    auto patterns = mine(db, params);
    write_output(output, serialize_patterns(patterns, params));
    std::cerr << "mined " << patterns.size() << " patterns over "
              << db.sequences.size() << " students\n";
    return kExitOk;
}

int run_generate(const std::string& config_path, const std::string& out_dir) {
    auto config = synthgen::parse_config(read_file(config_path));
    auto truth = synthgen::generate(config, out_dir);
    std::cerr << "generated " << config.n_students << " students, "
              << truth.planted.size() << " planted patterns into " << out_dir
              << "\n";
    return kExitOk;
}

int run_explain(const std::string& patterns_path,
                const std::vector<std::string>& profile_args) {
    PatternDocument doc = parse_patterns(read_file(patterns_path));
    StudentProfile profile;
    for (const auto& arg : profile_args) {
        auto eq = arg.find('=');
        if (eq == std::string::npos || eq == 0) {
            std::cerr << "error: --profile expects key=value, got '" << arg
                      << "'\n";
            return kExitValidation;
        }
        profile.assignments[arg.substr(0, eq)].insert(arg.substr(eq + 1));
    }
    auto matched = match_student(profile, doc.patterns);
    std::cout << serialize_patterns(matched, doc.params);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Contextual sequential pattern miner for multi-source activity logs"};
    app.require_subcommand(1);

    std::string schema_path, output = "-", config_path, out_dir, patterns_path;
    std::vector<std::string> profile_args;
    MiningParams params;

    auto* validate = app.add_subcommand("validate", "Validate a schema manifest");
    validate->add_option("--schema", schema_path, "Manifest file")->required();

    auto* mine_cmd = app.add_subcommand("mine", "Mine contextual patterns");
    mine_cmd->add_option("--schema", schema_path, "Manifest file")->required();
    mine_cmd->add_option("--minsup-seq", params.minsup_seq,
                         "Minimum sequence support fraction in (0,1]")
        ->check(CLI::Range(0.0, 1.0));
    mine_cmd->add_option("--minsup-ctx", params.minsup_ctx,
                         "Minimum context cover (student count)");
    mine_cmd->add_option("--max-context-size", params.max_context_size,
                         "Maximum predicates per context");
    mine_cmd->add_option("--max-pattern-len", params.max_pattern_len,
                         "Maximum items per pattern");
    mine_cmd
        ->add_option_function<std::string>(
            "--generalization",
            [&](const std::string& s) {
                if (s == "fallback") params.generalization = GeneralizationMode::Fallback;
                else if (s == "always") params.generalization = GeneralizationMode::Always;
                else if (s == "off") params.generalization = GeneralizationMode::Off;
                else throw CLI::ValidationError("--generalization", "must be fallback|always|off");
            },
            "fallback|always|off")
        ->default_str("fallback");
    mine_cmd
        ->add_option_function<std::string>(
            "--gap",
            [&](const std::string& s) {
                if (s == "gapped") params.gap = GapMode::Gapped;
                else if (s == "contiguous") params.gap = GapMode::Contiguous;
                else throw CLI::ValidationError("--gap", "must be gapped|contiguous");
            },
            "gapped|contiguous")
        ->default_str("gapped");
    mine_cmd
        ->add_option_function<std::string>(
            "--dedup",
            [&](const std::string& s) {
                if (s == "none") params.dedup = ContextDedup::None;
                else if (s == "most-general") params.dedup = ContextDedup::MostGeneral;
                else throw CLI::ValidationError("--dedup", "must be none|most-general");
            },
            "none|most-general")
        ->default_str("none");
    mine_cmd->add_flag("--action-mode", params.action_mode,
                       "Distinguish items by (resource, action)");
    mine_cmd->add_flag("--allow-extend-generalized",
                       params.allow_extend_generalized,
                       "Keep mining past generalized items");
    mine_cmd->add_option("--workers", params.workers, "Mining worker threads")
        ->check(CLI::PositiveNumber);
    mine_cmd->add_option("--output", output, "Output file, '-' for stdout");

    auto* generate = app.add_subcommand("generate", "Generate a synthetic dataset");
    generate->add_option("--config", config_path, "Generator config JSON")->required();
    generate->add_option("--out-dir", out_dir, "Output directory")->required();

    auto* explain = app.add_subcommand("explain", "Match a student profile against patterns");
    explain->add_option("--patterns", patterns_path, "Pattern document")->required();
    explain->add_option("--profile", profile_args, "key=value context assignment");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (validate->parsed()) return run_validate(schema_path);
        if (mine_cmd->parsed()) {
            if (params.minsup_seq <= 0.0) {
                std::cerr << "error: --minsup-seq must be > 0\n";
                return kExitValidation;
            }
            return run_mine(schema_path, params, output);
        }
        if (generate->parsed()) return run_generate(config_path, out_dir);
        if (explain->parsed()) return run_explain(patterns_path, profile_args);
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.code_name() << ": " << e.what() << "\n";
        return kExitValidation;
    } catch (const synthgen::InfeasibleConfig& e) {
        std::cerr << "error: InfeasibleConfig: " << e.what() << "\n";
        return kExitValidation;
    } catch (const UnknownAttributeKey& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const IngestError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const PatternIoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}
