// Battle scoring and campaign-level detection/reaction metrics.
//
// Score rubric per battle: win 1, abort 0.5 (only when an active novelty was
// detected; a pre-novelty abort is a false alarm and scores 0), anything
// else 0. Campaign metrics over trials:
//   CDT  - fraction of trials with no pre-onset detection and at least one
//          post-onset detection,
//   IDN  - over correctly detected trials, mean battles from onset to first
//          detection (1 = detected at the onset battle),
//   NRP  - mean(post-onset scores) / mean(pre-onset scores),
//   ANRP - same ratio using only the last `window` post-onset battles.
// Formula details and the abort-score switch live in docs/metrics.md.

#ifndef OWH_METRICS_HPP
#define OWH_METRICS_HPP

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "owh/scenario.hpp"

namespace owh {

enum class ScoreMode {
    DetectionOnly,       // abort scores 0.5 if any active novelty was detected
    RequireCorrectLevel  // ... and the level guess matches an active novelty
};

std::string score_mode_name(ScoreMode mode);
ScoreMode score_mode_from_name(const std::string& name);

struct BattleResult {
    int trial = 1;
    int battle = 1;
    MissionStatus status = MissionStatus::Ongoing;
    int targets_prosecuted = 0;
    int friendly_casualties = 0;
    bool time_exceeded = false;
    bool detected = false;
    std::optional<int> first_detection_tick;
    std::optional<int> level_guess;
    bool novelty_active = false;
    std::vector<int> true_levels;  // ground-truth levels of active novelties
    bool clamped_novelty = false;
    double score = 0.0;
    int ticks = 0;
};

// Throws std::invalid_argument for a non-terminal status.
double score_battle(MissionStatus status, bool detected, bool novelty_active,
                    std::optional<int> level_guess, const std::vector<int>& true_levels,
                    ScoreMode mode);

struct TrialMetrics {
    int trial = 1;
    bool correctly_detected = false;
    std::optional<int> first_detection_battle;  // absolute battle index
    std::optional<double> nrp;
    std::optional<double> anrp;
};

struct MetricReport {
    int trials = 0;
    int battles = 0;
    int onset = 0;   // battles + 1 when the campaign has no novelty
    int window = 0;  // ANRP window actually used
    double cdt = 0.0;
    std::optional<double> idn;
    std::optional<double> nrp;   // mean of defined per-trial values
    std::optional<double> anrp;
    int pre_wins = 0, pre_aborts = 0, pre_fails = 0;
    int post_wins = 0, post_aborts = 0, post_fails = 0;
    std::vector<std::vector<double>> trial_scores;  // [trial][battle]
    std::vector<TrialMetrics> per_trial;
};

using TrialResults = std::vector<BattleResult>;  // one trial, battle order

// First battle index carrying an active novelty; battles + 1 when none.
int derive_onset(const std::vector<TrialResults>& trials);

// Throws std::invalid_argument for an empty trial list or ragged battle counts.
double compute_cdt(const std::vector<TrialResults>& trials, int onset);
std::optional<double> compute_idn(const std::vector<TrialResults>& trials, int onset);

// Preconditions: at least one pre-onset and one post-onset battle.
std::optional<double> compute_nrp(const TrialResults& trial, int onset);
std::optional<double> compute_anrp(const TrialResults& trial, int onset, int window);

// window <= 0 selects the default min(10, post-onset count).
MetricReport build_report(const std::vector<TrialResults>& trials, int onset, int window);

nlohmann::json battle_result_to_json(const BattleResult& r);
BattleResult battle_result_from_json(const nlohmann::json& j);
nlohmann::json metric_report_to_json(const MetricReport& report);

// Human-readable summary table for the CLI.
std::string render_report(const MetricReport& report);

} // namespace owh

#endif // OWH_METRICS_HPP
