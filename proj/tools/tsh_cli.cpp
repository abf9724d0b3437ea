#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tsh/config.hpp"
#include "tsh/error.hpp"
#include "tsh/goldens.hpp"
#include "tsh/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw tsh::Error(tsh::ErrorKind::Validation, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
}

std::string sanitize(const std::string& id)
{
    std::string out;
    for (char ch : id) {
        const bool keep = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '-' ||
                          ch == '_' || ch == '.';
        out.push_back(keep ? ch : '_');
    }
    return out.empty() ? "_" : out;
}

struct Options {
    std::string input;
    std::string config;
    std::string output_dir = ".";
    std::string baseline_csv;
    std::string fit_ids;
    std::optional<std::uint64_t> seed;
    std::string mutate = "none";
    std::size_t scale = 1;
};

tsh::PipelineConfig load_config(const Options& opt)
{
    tsh::PipelineConfig cfg = opt.config.empty() ? tsh::PipelineConfig{} : tsh::config_from_text(read_file(opt.config));
    if (opt.seed) cfg.seed = *opt.seed;
    cfg.validate();
    return cfg;
}

std::vector<tsh::FixationSequence> load_input(const Options& opt, const tsh::PipelineConfig& cfg)
{
    if (opt.input.empty()) throw tsh::Error(tsh::ErrorKind::Validation, "--input is required");
    return tsh::parse_fixation_csv(read_file(opt.input), cfg.columns);
}

int cmd_diagrams(const Options& opt)
{
    auto cfg = load_config(opt);
    auto stage = tsh::run_diagram_stage(load_input(opt, cfg), cfg);

    const fs::path out_dir(opt.output_dir);
    fs::create_directories(out_dir / "diagrams");
    std::set<std::string> used;
    std::size_t files = 0;
    for (const auto& t : stage.trials) {
        for (std::size_t axis = 0; axis < 2; ++axis) {
            std::string base = sanitize(t.reader_id) + "__" + sanitize(t.trial_id) + "__" + tsh::axis_name(axis);
            std::string name = base;
            for (int k = 1; used.count(name); ++k) name = base + "-" + std::to_string(k);
            used.insert(name);
            write_file(out_dir / "diagrams" / (name + ".json"), tsh::trial_axis_json(t, axis, cfg).dump(2) + "\n");
            ++files;
        }
    }
    auto report = tsh::stage_report(stage);
    report["diagram_files"] = files;
    write_file(out_dir / "report.json", report.dump(2) + "\n");
    std::cout << "wrote " << files << " diagram files for " << stage.trials.size() << " trials (" << stage.skipped.size()
              << " skipped) to " << out_dir.string() << '\n';
    return 0;
}

int cmd_features(const Options& opt)
{
    auto cfg = load_config(opt);
    auto seqs = load_input(opt, cfg);
    std::optional<tsh::BaselineTable> baseline;
    if (!opt.baseline_csv.empty()) baseline = tsh::parse_baseline_csv(read_file(opt.baseline_csv), cfg.columns);
    std::optional<std::set<tsh::TrialKey>> fit_ids;
    if (!opt.fit_ids.empty()) fit_ids = tsh::parse_fit_ids(read_file(opt.fit_ids), cfg.columns);

    auto res = tsh::run_features(seqs, cfg, baseline, fit_ids);

    const fs::path out_dir(opt.output_dir);
    fs::create_directories(out_dir);
    write_file(out_dir / "features.csv", tsh::feature_csv(res));
    write_file(out_dir / "transforms.json", tsh::transforms_json(res, cfg).dump(2) + "\n");
    write_file(out_dir / "report.json", tsh::stage_report(res.stage).dump(2) + "\n");
    std::cout << "wrote " << res.rows.size() << " feature rows of width " << res.transforms.pca.n_components()
              << (res.baseline_width ? " + " + std::to_string(res.baseline_width) + " baseline" : std::string())
              << " to " << (out_dir / "features.csv").string() << '\n';
    return 0;
}

int cmd_goldens(const Options& opt)
{
    tsh::Mutation mutation = tsh::Mutation::None;
    if (opt.mutate == "elder-rule") mutation = tsh::Mutation::ElderRule;
    else if (opt.mutate == "critical-points") mutation = tsh::Mutation::CriticalPoints;
    else if (opt.mutate != "none") throw tsh::Error(tsh::ErrorKind::Config, "unknown mutation '" + opt.mutate + "'");

    auto checks = tsh::run_goldens(mutation, opt.scale);
    bool ok = true;
    for (const auto& c : checks) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name;
        if (!c.passed) std::cout << ": " << c.detail;
        std::cout << '\n';
        ok = ok && c.passed;
    }
    std::cout << (ok ? "all goldens passed" : "golden checks failed") << '\n';
    return ok ? 0 : 1;
}

int cmd_show_config(const Options& opt)
{
    std::cout << tsh::to_json(load_config(opt)).dump(2) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Topological features of fixation sequences"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config, "JSON pipeline configuration");
        sub->add_option("--seed", opt.seed, "override the configured seed");
    };

    auto* diagrams = app.add_subcommand("diagrams", "write persistence diagrams per trial and axis");
    diagrams->add_option("--input", opt.input, "fixation CSV")->required();
    diagrams->add_option("--output-dir", opt.output_dir, "output directory");
    add_common(diagrams);

    auto* features = app.add_subcommand("features", "write the feature matrix and the fitted transforms");
    features->add_option("--input", opt.input, "fixation CSV")->required();
    features->add_option("--output-dir", opt.output_dir, "output directory");
    features->add_option("--baseline-csv", opt.baseline_csv, "baseline features keyed by reader_id,trial_id");
    features->add_option("--fit-ids", opt.fit_ids, "CSV of reader_id,trial_id rows to fit transforms on");
    add_common(features);

    auto* goldens = app.add_subcommand("goldens", "run the built-in golden and oracle checks");
    goldens->add_option("--mutate", opt.mutate, "test hook: none | elder-rule | critical-points");
    goldens->add_option("--scale", opt.scale, "multiplier for the number of random cases");

    auto* show = app.add_subcommand("show-config", "print the resolved configuration");
    add_common(show);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*diagrams) return cmd_diagrams(opt);
        if (*features) return cmd_features(opt);
        if (*goldens) return cmd_goldens(opt);
        if (*show) return cmd_show_config(opt);
    } catch (const tsh::Error& e) {
        std::cerr << "error (" << tsh::to_string(e.kind()) << "): " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
