// owh — campaign runner CLI.
//
// Subcommands:
//   run       execute a campaign with an agent and persist results
//   metrics   recompute the metric report from a results directory
//   catalog   list built-in novelties
//   validate  parse and statically check a campaign config
//
// Exit codes: 0 success, 2 configuration error, 3 runtime error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "owh/agents.hpp"
#include "owh/errors.hpp"
#include "owh/novelty.hpp"
#include "owh/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw owh::ConfigError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int cmd_run(const std::string& campaign_file, const std::string& agent, const std::string& out,
            int parallel, bool trace, int window, const std::string& score_mode) {
    owh::CampaignConfig config = owh::parse_campaign(read_file(campaign_file));
    owh::RunOptions options;
    options.parallelism = parallel;
    options.trace = trace;
    options.anrp_window = window;
    options.score_mode = owh::score_mode_from_name(score_mode);
    owh::MetricReport report = owh::run_experiment(config, agent, out, options);
    std::cout << "campaign '" << config.name << "' complete; results in " << out << "\n\n";
    std::cout << owh::render_report(report);
    return 0;
}

int cmd_metrics(const std::string& in_dir, int window, bool as_json) {
    owh::MetricReport report = owh::recompute_metrics(in_dir, window);
    if (as_json) {
        std::cout << owh::metric_report_to_json(report).dump(2) << "\n";
    } else {
        std::cout << owh::render_report(report);
    }
    return 0;
}

int cmd_catalog(int level) {
    for (const owh::NoveltySpec& spec : owh::catalog()) {
        if (level > 0 && spec.level != level) continue;
        std::cout << "L" << spec.level << " " << owh::novelty_level_name(spec.level) << "  "
                  << spec.id << "\n"
                  << "    target: " << spec.target << "\n"
                  << "    " << spec.description << "\n";
    }
    return 0;
}

int cmd_validate(const std::string& campaign_file) {
    owh::CampaignConfig config = owh::parse_campaign(read_file(campaign_file));
    std::cout << "ok: '" << config.name << "' trials=" << config.trials
              << " battles=" << config.battles << " variations=" << config.variations.size()
              << " novelties=" << config.novelties.size();
    if (!config.novelties.empty()) {
        std::cout << " onset=" << owh::campaign_onset(config);
    }
    std::cout << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"open-world novelty evaluation harness"};
    app.require_subcommand(1);

    std::string campaign_file, agent = "baseline", out_dir, in_dir;
    std::string score_mode = "detection-only";
    int parallel = 0, window = 0, level = 0;
    bool trace = false, as_json = false;

    CLI::App* run = app.add_subcommand("run", "execute a campaign");
    run->add_option("--campaign", campaign_file, "campaign config file")->required();
    run->add_option("--agent", agent, "agent name (baseline|aware)")->required();
    run->add_option("--out", out_dir, "output directory")->required();
    run->add_option("--parallel", parallel, "worker count (default: OWH_PARALLEL or 1)");
    run->add_flag("--trace", trace, "write per-battle tick traces");
    run->add_option("--window", window, "ANRP window (default min(10, post-onset))");
    run->add_option("--score-mode", score_mode,
                    "abort scoring: detection-only|require-correct-level");

    CLI::App* metrics = app.add_subcommand("metrics", "recompute metrics from results");
    metrics->add_option("--in", in_dir, "results directory")->required();
    metrics->add_option("--window", window, "ANRP window override");
    metrics->add_flag("--json", as_json, "emit the report as JSON");

    CLI::App* catalog = app.add_subcommand("catalog", "list built-in novelties");
    catalog->add_option("--level", level, "filter by ontology level 1..8");

    CLI::App* validate = app.add_subcommand("validate", "check a campaign config");
    validate->add_option("--campaign", campaign_file, "campaign config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run->parsed())
            return cmd_run(campaign_file, agent, out_dir, parallel, trace, window, score_mode);
        if (metrics->parsed()) return cmd_metrics(in_dir, window, as_json);
        if (catalog->parsed()) return cmd_catalog(level);
        if (validate->parsed()) return cmd_validate(campaign_file);
    } catch (const owh::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
