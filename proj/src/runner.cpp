#include "owh/runner.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "owh/agents.hpp"
#include "owh/errors.hpp"

namespace owh {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string iso_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string hex64(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json make_manifest(const CampaignConfig& config, const std::string& agent_name,
                   const RunOptions& options, int window) {
    return {{"config_hash", hex64(config_fingerprint(config))},
            {"master_seed", config.master_seed},
            {"harness_version", kHarnessVersion},
            {"campaign_name", config.name},
            {"agent", agent_name},
            {"trials", config.trials},
            {"battles", config.battles},
            {"onset", campaign_onset(config)},
            {"score_mode", score_mode_name(options.score_mode)},
            {"anrp_window", window},
            {"started_at", iso_now()},
            {"finished_at", nullptr},
            {"complete", false},
            {"error", nullptr},
            {"files",
             {{"campaign", "campaign.json"},
              {"results", "results.jsonl"},
              {"metrics", "metrics.json"}}}};
}

} // namespace

int resolve_parallelism(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("OWH_PARALLEL")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

BattleResult run_battle_plan(const BattlePlan& plan, const std::string& agent_name,
                             ScoreMode mode, const fs::path* trace_dir) {
    auto agent = make_agent(agent_name);
    if (!agent) throw ConfigError("unknown agent '" + agent_name + "'");

    auto known = std::make_shared<KnownWorld>(
        KnownWorld{plan.known, sim_constants::kDefaultAssumedRangeKm});

    std::ofstream trace_out;
    TraceSink sink;
    const TraceSink* sink_ptr = nullptr;
    if (trace_dir) {
        fs::path file = *trace_dir / ("trial-" + std::to_string(plan.trial) + "-battle-" +
                                      std::to_string(plan.battle) + ".jsonl");
        trace_out.open(file, std::ios::binary | std::ios::trunc);
        sink = [&trace_out](const std::string& line) { trace_out << line << "\n"; };
        sink_ptr = &sink;
    }

    BattleOutcome outcome =
        run_battle(plan.scenario, known, *agent, RngState(plan.seed), sink_ptr);

    BattleResult r;
    r.trial = plan.trial;
    r.battle = plan.battle;
    r.status = outcome.status;
    r.targets_prosecuted = outcome.targets_prosecuted;
    r.friendly_casualties = outcome.friendly_casualties;
    r.time_exceeded = outcome.time_exceeded;
    r.ticks = outcome.ticks;
    for (const NoveltyReport& rep : outcome.reports) {
        if (!rep.detected) continue;
        if (!r.detected) {
            r.detected = true;
            r.first_detection_tick = rep.tick;
            r.level_guess = rep.level_guess;
        }
    }
    r.novelty_active = !plan.applied.empty();
    for (const AppliedNovelty& a : plan.applied) {
        r.true_levels.push_back(a.level);
        if (a.clamped) r.clamped_novelty = true;
    }
    r.score = score_battle(r.status, r.detected, r.novelty_active, r.level_guess,
                           r.true_levels, mode);
    return r;
}

MetricReport run_experiment(const CampaignConfig& config, const std::string& agent_name,
                            const fs::path& out_dir, const RunOptions& options) {
    if (!make_agent(agent_name)) throw ConfigError("unknown agent '" + agent_name + "'");
    validate_campaign(config);

    fs::create_directories(out_dir);
    fs::path trace_dir = out_dir / "traces";
    if (options.trace) fs::create_directories(trace_dir);

    const int onset = campaign_onset(config);
    int post_count = std::max(0, config.battles - onset + 1);
    int window = options.anrp_window > 0
                     ? std::min(options.anrp_window, std::max(post_count, 1))
                     : std::min(10, std::max(post_count, 1));

    json manifest = make_manifest(config, agent_name, options, window);
    write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
    write_file(out_dir / "campaign.json", serialize_campaign(config));

    std::vector<BattlePlan> plans = generate_battles(config);
    std::vector<BattleResult> results(plans.size());

    std::atomic<size_t> cursor{0};
    std::mutex error_mutex;
    std::string first_error;

    auto worker = [&]() {
        while (true) {
            size_t i = cursor.fetch_add(1);
            if (i >= plans.size()) break;
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error.empty()) break;
            }
            try {
                results[i] = run_battle_plan(plans[i], agent_name, options.score_mode,
                                             options.trace ? &trace_dir : nullptr);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (first_error.empty()) first_error = e.what();
            }
        }
    };

    int workers = resolve_parallelism(options.parallelism);
    std::vector<std::thread> pool;
    for (int i = 1; i < workers; ++i) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();

    if (!first_error.empty()) {
        manifest["complete"] = false;
        manifest["error"] = first_error;
        manifest["finished_at"] = iso_now();
        write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
        throw std::runtime_error("experiment aborted: " + first_error);
    }

    // Canonical results: plans were generated in (trial, battle) order.
    std::ostringstream lines;
    for (const BattleResult& r : results) {
        lines << battle_result_to_json(r).dump() << "\n";
    }
    write_file(out_dir / "results.jsonl", lines.str());

    std::vector<TrialResults> trials(config.trials);
    for (const BattleResult& r : results) trials[r.trial - 1].push_back(r);
    MetricReport report = build_report(trials, onset, window);
    write_file(out_dir / "metrics.json", metric_report_to_json(report).dump(2) + "\n");

    manifest["complete"] = true;
    manifest["finished_at"] = iso_now();
    write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
    return report;
}

MetricReport recompute_metrics(const fs::path& dir, int window) {
    json manifest = json::parse(read_file(dir / "manifest.json"));
    const int trials_count = manifest.at("trials").get<int>();
    const int onset = manifest.at("onset").get<int>();
    if (window <= 0) window = manifest.at("anrp_window").get<int>();

    std::vector<TrialResults> trials(trials_count);
    std::istringstream in(read_file(dir / "results.jsonl"));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        BattleResult r = battle_result_from_json(json::parse(line));
        if (r.trial < 1 || r.trial > trials_count)
            throw std::runtime_error("results.jsonl: trial index out of range");
        trials[r.trial - 1].push_back(r);
    }
    return build_report(trials, onset, window);
}

} // namespace owh
