#include "owh/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace owh {

using nlohmann::json;

std::string score_mode_name(ScoreMode mode) {
    return mode == ScoreMode::DetectionOnly ? "detection-only" : "require-correct-level";
}

ScoreMode score_mode_from_name(const std::string& name) {
    if (name == "detection-only") return ScoreMode::DetectionOnly;
    if (name == "require-correct-level") return ScoreMode::RequireCorrectLevel;
    throw std::invalid_argument("unknown score mode '" + name +
                                "' (expected detection-only|require-correct-level)");
}

double score_battle(MissionStatus status, bool detected, bool novelty_active,
                    std::optional<int> level_guess, const std::vector<int>& true_levels,
                    ScoreMode mode) {
    switch (status) {
        case MissionStatus::Ongoing:
            throw std::invalid_argument("score_battle: mission status not terminal");
        case MissionStatus::Win:
            return 1.0;
        case MissionStatus::Fail:
            return 0.0;
        case MissionStatus::Abort: {
            if (!novelty_active || !detected) return 0.0;  // false alarm or blind abort
            if (mode == ScoreMode::RequireCorrectLevel) {
                bool match = level_guess &&
                             std::find(true_levels.begin(), true_levels.end(),
                                       *level_guess) != true_levels.end();
                if (!match) return 0.0;
            }
            return 0.5;
        }
    }
    throw std::invalid_argument("score_battle: unknown status");
}

namespace {

void check_trials(const std::vector<TrialResults>& trials) {
    if (trials.empty()) throw std::invalid_argument("metrics: empty trial list");
    size_t battles = trials.front().size();
    if (battles == 0) throw std::invalid_argument("metrics: trial with zero battles");
    for (const TrialResults& t : trials) {
        if (t.size() != battles)
            throw std::invalid_argument("metrics: trials have different battle counts");
    }
}

double mean(const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

} // namespace

int derive_onset(const std::vector<TrialResults>& trials) {
    check_trials(trials);
    int battles = static_cast<int>(trials.front().size());
    int onset = battles + 1;
    for (const TrialResults& t : trials) {
        for (const BattleResult& r : t) {
            if (r.novelty_active) onset = std::min(onset, r.battle);
        }
    }
    return onset;
}

double compute_cdt(const std::vector<TrialResults>& trials, int onset) {
    check_trials(trials);
    int correct = 0;
    for (const TrialResults& t : trials) {
        bool pre_false_alarm = false;
        bool post_detected = false;
        for (const BattleResult& r : t) {
            if (r.battle < onset && r.detected) pre_false_alarm = true;
            if (r.battle >= onset && r.detected) post_detected = true;
        }
        if (!pre_false_alarm && post_detected) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(trials.size());
}

std::optional<double> compute_idn(const std::vector<TrialResults>& trials, int onset) {
    check_trials(trials);
    std::vector<double> instances;
    for (const TrialResults& t : trials) {
        bool pre_false_alarm = false;
        std::optional<int> first_post;
        for (const BattleResult& r : t) {
            if (r.battle < onset && r.detected) pre_false_alarm = true;
            if (r.battle >= onset && r.detected && !first_post) first_post = r.battle;
        }
        if (!pre_false_alarm && first_post) {
            instances.push_back(static_cast<double>(*first_post - onset + 1));
        }
    }
    if (instances.empty()) return std::nullopt;
    return mean(instances);
}

std::optional<double> compute_nrp(const TrialResults& trial, int onset) {
    std::vector<double> pre, post;
    for (const BattleResult& r : trial) {
        (r.battle < onset ? pre : post).push_back(r.score);
    }
    if (pre.empty() || post.empty()) {
        throw std::invalid_argument(
            "compute_nrp: trial needs at least one pre-onset and one post-onset battle");
    }
    double denom = mean(pre);
    if (denom == 0.0) return std::nullopt;
    return mean(post) / denom;
}

std::optional<double> compute_anrp(const TrialResults& trial, int onset, int window) {
    std::vector<double> pre, post;
    for (const BattleResult& r : trial) {
        (r.battle < onset ? pre : post).push_back(r.score);
    }
    if (pre.empty() || post.empty()) {
        throw std::invalid_argument(
            "compute_anrp: trial needs at least one pre-onset and one post-onset battle");
    }
    if (window <= 0) window = std::min<int>(10, static_cast<int>(post.size()));
    window = std::min<int>(window, static_cast<int>(post.size()));
    std::vector<double> tail(post.end() - window, post.end());
    double denom = mean(pre);
    if (denom == 0.0) return std::nullopt;
    return mean(tail) / denom;
}

MetricReport build_report(const std::vector<TrialResults>& trials, int onset, int window) {
    check_trials(trials);
    MetricReport report;
    report.trials = static_cast<int>(trials.size());
    report.battles = static_cast<int>(trials.front().size());
    report.onset = onset;

    int post_count = std::max(0, report.battles - onset + 1);
    report.window = window > 0 ? std::min(window, std::max(post_count, 1))
                               : std::min(10, std::max(post_count, 1));

    report.cdt = compute_cdt(trials, onset);
    report.idn = compute_idn(trials, onset);

    bool has_pre = onset > 1;
    bool has_post = post_count > 0;
    std::vector<double> nrps, anrps;
    for (const TrialResults& t : trials) {
        TrialMetrics tm;
        tm.trial = t.front().trial;
        bool pre_false_alarm = false;
        for (const BattleResult& r : t) {
            if (r.battle < onset && r.detected) pre_false_alarm = true;
            if (r.battle >= onset && r.detected && !tm.first_detection_battle)
                tm.first_detection_battle = r.battle;
        }
        tm.correctly_detected = !pre_false_alarm && tm.first_detection_battle.has_value();
        if (has_pre && has_post) {
            tm.nrp = compute_nrp(t, onset);
            tm.anrp = compute_anrp(t, onset, report.window);
            if (tm.nrp) nrps.push_back(*tm.nrp);
            if (tm.anrp) anrps.push_back(*tm.anrp);
        }
        report.per_trial.push_back(tm);

        std::vector<double> scores;
        for (const BattleResult& r : t) {
            scores.push_back(r.score);
            bool pre = r.battle < onset;
            switch (r.status) {
                case MissionStatus::Win: (pre ? report.pre_wins : report.post_wins)++; break;
                case MissionStatus::Abort:
                    (pre ? report.pre_aborts : report.post_aborts)++;
                    break;
                case MissionStatus::Fail: (pre ? report.pre_fails : report.post_fails)++; break;
                case MissionStatus::Ongoing: break;
            }
        }
        report.trial_scores.push_back(std::move(scores));
    }
    if (!nrps.empty()) report.nrp = mean(nrps);
    if (!anrps.empty()) report.anrp = mean(anrps);
    return report;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

json opt_to_json(const std::optional<int>& v) {
    return v ? json(*v) : json(nullptr);
}
json opt_to_json(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

MissionStatus status_from_name(const std::string& name) {
    if (name == "ongoing") return MissionStatus::Ongoing;
    if (name == "win") return MissionStatus::Win;
    if (name == "abort") return MissionStatus::Abort;
    if (name == "fail") return MissionStatus::Fail;
    throw std::invalid_argument("unknown mission status '" + name + "'");
}

} // namespace

json battle_result_to_json(const BattleResult& r) {
    return {{"trial", r.trial},
            {"battle", r.battle},
            {"status", status_name(r.status)},
            {"targets_prosecuted", r.targets_prosecuted},
            {"friendly_casualties", r.friendly_casualties},
            {"time_exceeded", r.time_exceeded},
            {"detected", r.detected},
            {"first_detection_tick", opt_to_json(r.first_detection_tick)},
            {"level_guess", opt_to_json(r.level_guess)},
            {"novelty_active", r.novelty_active},
            {"true_levels", r.true_levels},
            {"clamped_novelty", r.clamped_novelty},
            {"score", r.score},
            {"ticks", r.ticks}};
}

BattleResult battle_result_from_json(const json& j) {
    BattleResult r;
    r.trial = j.at("trial").get<int>();
    r.battle = j.at("battle").get<int>();
    r.status = status_from_name(j.at("status").get<std::string>());
    r.targets_prosecuted = j.at("targets_prosecuted").get<int>();
    r.friendly_casualties = j.at("friendly_casualties").get<int>();
    r.time_exceeded = j.at("time_exceeded").get<bool>();
    r.detected = j.at("detected").get<bool>();
    if (!j.at("first_detection_tick").is_null())
        r.first_detection_tick = j["first_detection_tick"].get<int>();
    if (!j.at("level_guess").is_null()) r.level_guess = j["level_guess"].get<int>();
    r.novelty_active = j.at("novelty_active").get<bool>();
    r.true_levels = j.at("true_levels").get<std::vector<int>>();
    r.clamped_novelty = j.at("clamped_novelty").get<bool>();
    r.score = j.at("score").get<double>();
    r.ticks = j.at("ticks").get<int>();
    return r;
}

json metric_report_to_json(const MetricReport& report) {
    json per_trial = json::array();
    for (const TrialMetrics& t : report.per_trial) {
        per_trial.push_back({{"trial", t.trial},
                             {"correctly_detected", t.correctly_detected},
                             {"first_detection_battle", opt_to_json(t.first_detection_battle)},
                             {"nrp", opt_to_json(t.nrp)},
                             {"anrp", opt_to_json(t.anrp)}});
    }
    return {{"trials", report.trials},
            {"battles", report.battles},
            {"onset", report.onset},
            {"window", report.window},
            {"cdt", report.cdt},
            {"idn", opt_to_json(report.idn)},
            {"nrp", opt_to_json(report.nrp)},
            {"anrp", opt_to_json(report.anrp)},
            {"pre_onset", {{"wins", report.pre_wins}, {"aborts", report.pre_aborts},
                           {"fails", report.pre_fails}}},
            {"post_onset", {{"wins", report.post_wins}, {"aborts", report.post_aborts},
                            {"fails", report.post_fails}}},
            {"trial_scores", report.trial_scores},
            {"per_trial", per_trial}};
}

std::string render_report(const MetricReport& report) {
    std::ostringstream out;
    auto opt = [](const std::optional<double>& v) {
        if (!v) return std::string("n/a");
        std::ostringstream s;
        s << *v;
        return s.str();
    };
    out << "trials:  " << report.trials << "   battles: " << report.battles
        << "   novelty onset: ";
    if (report.onset > report.battles) out << "none";
    else out << "battle " << report.onset;
    out << "\n";
    out << "CDT:  " << report.cdt << "\n";
    out << "IDN:  " << opt(report.idn) << "\n";
    out << "NRP:  " << opt(report.nrp) << "\n";
    out << "ANRP: " << opt(report.anrp) << " (window " << report.window << ")\n";
    out << "           win  abort  fail\n";
    out << "pre-onset  " << report.pre_wins << "    " << report.pre_aborts << "      "
        << report.pre_fails << "\n";
    out << "post-onset " << report.post_wins << "    " << report.post_aborts << "      "
        << report.post_fails << "\n";
    return out.str();
}

} // namespace owh
