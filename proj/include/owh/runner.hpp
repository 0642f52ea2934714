// Experiment orchestration: run every battle of a campaign with a bounded
// worker pool, persist canonical results, and compute the metric report.
//
// Output directory layout:
//   manifest.json   written before the first battle, finalized afterwards
//   campaign.json   canonical serialization of the executed config
//   results.jsonl   one BattleResult per line, sorted by (trial, battle)
//   metrics.json    the MetricReport
//   traces/         per-battle tick traces (only with the trace option)
//
// results.jsonl and metrics.json are byte-deterministic for a given
// (config, agent); the manifest carries wall-clock timestamps and is not.

#ifndef OWH_RUNNER_HPP
#define OWH_RUNNER_HPP

#include <filesystem>
#include <string>

#include "owh/campaign.hpp"
#include "owh/metrics.hpp"

namespace owh {

inline constexpr const char* kHarnessVersion = "0.1.0";

struct RunOptions {
    int parallelism = 0;  // 0: use OWH_PARALLEL env var, else 1
    bool trace = false;
    ScoreMode score_mode = ScoreMode::DetectionOnly;
    int anrp_window = 0;  // 0: default min(10, post-onset battles)
};

// Runs one battle of a campaign and scores it. Fresh agent instance per call.
BattleResult run_battle_plan(const BattlePlan& plan, const std::string& agent_name,
                             ScoreMode mode, const std::filesystem::path* trace_dir);

// Executes the whole campaign. Throws ConfigError (bad agent/config) or
// std::runtime_error (IO/battle failure, after marking the manifest partial).
MetricReport run_experiment(const CampaignConfig& config, const std::string& agent_name,
                            const std::filesystem::path& out_dir,
                            const RunOptions& options = {});

// Rebuilds the MetricReport from a persisted results directory.
MetricReport recompute_metrics(const std::filesystem::path& dir, int window = 0);

int resolve_parallelism(int requested);

} // namespace owh

#endif // OWH_RUNNER_HPP
