#include "owh/agents.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <tuple>

namespace owh {

namespace {

using namespace agent_constants;

// ---------------------------------------------------------------------------
// Grid route planner
// ---------------------------------------------------------------------------

struct ThreatCircle {
    std::string id;
    Vec2 center;
    double radius;
};

// 8-connected A* over a fixed 1-km grid. Cells inside a threat circle cost
// 50x to traverse (escape stays possible when a circle rolls over the jet);
// free shortest paths never pay the penalty.
class Planner {
public:
    static constexpr double kX0 = -60.0, kY0 = -150.0, kCell = 1.0;
    static constexpr int kNx = 301, kNy = 301;

    enum class Result { Ok, NoFreeGoal, NoPath };

    Result plan(Vec2 start, Vec2 goal_pos, double goal_radius,
                const std::vector<ThreatCircle>& circles, std::vector<Vec2>& out) {
        out.clear();
        blocked_.assign(kNx * kNy, 0);
        for (const ThreatCircle& c : circles) {
            int ix_lo = std::max(0, cell_x(c.center.x - c.radius) - 1);
            int ix_hi = std::min(kNx - 1, cell_x(c.center.x + c.radius) + 1);
            int iy_lo = std::max(0, cell_y(c.center.y - c.radius) - 1);
            int iy_hi = std::min(kNy - 1, cell_y(c.center.y + c.radius) + 1);
            double r2 = c.radius * c.radius;
            for (int iy = iy_lo; iy <= iy_hi; ++iy) {
                for (int ix = ix_lo; ix <= ix_hi; ++ix) {
                    Vec2 p = center_of(ix, iy);
                    double dx = p.x - c.center.x, dy = p.y - c.center.y;
                    if (dx * dx + dy * dy <= r2) blocked_[iy * kNx + ix] = 1;
                }
            }
        }

        goal_mask_.assign(kNx * kNy, 0);
        bool any_goal = false;
        {
            double reach = std::max(goal_radius, 0.0);
            int ix_lo = std::max(0, cell_x(goal_pos.x - reach) - 1);
            int ix_hi = std::min(kNx - 1, cell_x(goal_pos.x + reach) + 1);
            int iy_lo = std::max(0, cell_y(goal_pos.y - reach) - 1);
            int iy_hi = std::min(kNy - 1, cell_y(goal_pos.y + reach) + 1);
            for (int iy = iy_lo; iy <= iy_hi; ++iy) {
                for (int ix = ix_lo; ix <= ix_hi; ++ix) {
                    int idx = iy * kNx + ix;
                    if (blocked_[idx]) continue;
                    if (distance(center_of(ix, iy), goal_pos) <= std::max(reach, kCell * 0.75)) {
                        goal_mask_[idx] = 1;
                        any_goal = true;
                    }
                }
            }
        }
        if (!any_goal) return Result::NoFreeGoal;

        const int start_idx = clamp_cell(start);
        g_.assign(kNx * kNy, std::numeric_limits<double>::infinity());
        parent_.assign(kNx * kNy, -1);

        using Node = std::tuple<double, int>;  // (f, idx); idx breaks ties
        std::priority_queue<Node, std::vector<Node>, std::greater<>> open;
        auto heuristic = [&](int idx) {
            Vec2 p = center_of(idx % kNx, idx / kNx);
            return std::max(0.0, distance(p, goal_pos) - goal_radius);
        };
        g_[start_idx] = 0.0;
        open.emplace(heuristic(start_idx), start_idx);

        static const int dxs[8] = {1, -1, 0, 0, 1, 1, -1, -1};
        static const int dys[8] = {0, 0, 1, -1, 1, -1, 1, -1};
        static const double base_cost[8] = {1, 1, 1, 1, kSqrt2, kSqrt2, kSqrt2, kSqrt2};

        int goal_idx = -1;
        while (!open.empty()) {
            auto [f, idx] = open.top();
            open.pop();
            if (f > g_[idx] + heuristic(idx) + 1e-9) continue;  // stale entry
            if (goal_mask_[idx]) {
                goal_idx = idx;
                break;
            }
            int ix = idx % kNx, iy = idx / kNx;
            for (int k = 0; k < 8; ++k) {
                int nx = ix + dxs[k], ny = iy + dys[k];
                if (nx < 0 || ny < 0 || nx >= kNx || ny >= kNy) continue;
                int nidx = ny * kNx + nx;
                double w = base_cost[k] * (blocked_[nidx] ? 50.0 : 1.0);
                double ng = g_[idx] + w;
                if (ng + 1e-12 < g_[nidx]) {
                    g_[nidx] = ng;
                    parent_[nidx] = idx;
                    open.emplace(ng + heuristic(nidx), nidx);
                }
            }
        }
        if (goal_idx < 0) return Result::NoPath;

        std::vector<Vec2> rev;
        for (int idx = goal_idx; idx != -1; idx = parent_[idx]) {
            rev.push_back(center_of(idx % kNx, idx / kNx));
        }
        out.assign(rev.rbegin(), rev.rend());
        return Result::Ok;
    }

private:
    static constexpr double kSqrt2 = 1.4142135623730951;
    static int cell_x(double x) {
        return std::clamp(static_cast<int>(std::lround((x - kX0) / kCell)), 0, kNx - 1);
    }
    static int cell_y(double y) {
        return std::clamp(static_cast<int>(std::lround((y - kY0) / kCell)), 0, kNy - 1);
    }
    static int clamp_cell(Vec2 p) { return cell_y(p.y) * kNx + cell_x(p.x); }
    static Vec2 center_of(int ix, int iy) {
        return {kX0 + ix * kCell, kY0 + iy * kCell};
    }

    std::vector<uint8_t> blocked_;
    std::vector<uint8_t> goal_mask_;
    std::vector<double> g_;
    std::vector<int> parent_;
};

// ---------------------------------------------------------------------------
// Shared pilot core
// ---------------------------------------------------------------------------

struct Track {
    std::string cls;
    Vec2 pos;
    Vec2 prev_pos;
    int first_seen = -1;
    int last_seen = -1;
    bool seen_now = false;
    bool seen_prev = false;
    double accum_move = 0.0;
    int move_ticks = 0;
    int closing_streak = 0;
    double prev_jet_dist = -1.0;
    int jumps = 0;
    double max_jump = 0.0;  // largest per-tick displacement; sensing-noise estimate
};

enum class GoalKind { None, Release, Home };

struct PilotCore {
    std::shared_ptr<const KnownWorld> known;
    std::map<std::string, Track> tracks;
    std::map<std::string, double> range_override;  // aware re-estimates

    Planner planner;
    std::vector<Vec2> path;
    size_t path_next = 0;
    GoalKind path_goal = GoalKind::None;
    bool path_valid = false;
    bool release_unreachable = false;  // latched result of the last release plan
    int last_plan_tick = -1000;
    std::vector<ThreatCircle> planned_circles;

    // own-fire bookkeeping (observed only; never changes behavior)
    int fire_commanded_tick = -1;
    int weapons_at_command = -1;
    bool fire_pending = false;

    int empty_ticks = 0;
    bool first_obs_seen = false;
    bool had_tracks_at_start = false;

    void reset(std::shared_ptr<const KnownWorld> kw) {
        known = std::move(kw);
        tracks.clear();
        range_override.clear();
        path.clear();
        path_next = 0;
        path_goal = GoalKind::None;
        path_valid = false;
        release_unreachable = false;
        last_plan_tick = -1000;
        planned_circles.clear();
        fire_commanded_tick = -1;
        weapons_at_command = -1;
        fire_pending = false;
        empty_ticks = 0;
        first_obs_seen = false;
        had_tracks_at_start = false;
    }

    double assumed_range(const std::string& id) const {
        double base = known ? known->assumed_range(id) : sim_constants::kDefaultAssumedRangeKm;
        auto it = range_override.find(id);
        return it != range_override.end() ? std::max(base, it->second) : base;
    }

    void update_tracks(const Observation& obs) {
        if (!first_obs_seen) {
            first_obs_seen = true;
            had_tracks_at_start = !obs.tracks.empty();
        }
        empty_ticks = obs.tracks.empty() ? empty_ticks + 1 : 0;

        for (auto& [id, t] : tracks) {
            t.seen_prev = t.seen_now;
            t.seen_now = false;
        }
        for (const TrackReport& r : obs.tracks) {
            auto [it, inserted] = tracks.try_emplace(r.id);
            Track& t = it->second;
            if (inserted) {
                t.cls = r.cls;
                t.pos = r.pos;
                t.prev_pos = r.pos;
                t.first_seen = obs.tick;
                t.prev_jet_dist = distance(obs.own_pos, r.pos);
            } else {
                t.prev_pos = t.pos;
                double moved = distance(t.pos, r.pos);
                if (t.seen_prev && moved > 0.01) {
                    t.accum_move += moved;
                    t.move_ticks += 1;
                }
                if (t.seen_prev && moved > kTrackJumpKm) {
                    t.jumps += 1;
                    t.max_jump = std::max(t.max_jump, moved);
                }
                double jd = distance(obs.own_pos, r.pos);
                if (t.seen_prev && moved > 0.01 && jd < t.prev_jet_dist - 0.005) {
                    t.closing_streak += 1;
                } else if (moved > 0.01) {
                    t.closing_streak = 0;
                }
                t.prev_jet_dist = jd;
                t.pos = r.pos;
            }
            t.seen_now = true;
            t.last_seen = obs.tick;
        }
    }

    std::vector<ThreatCircle> threat_circles() const {
        std::vector<ThreatCircle> circles;
        for (const auto& [id, t] : tracks) {
            if (t.cls != "sam") continue;
            // Noisy tracks get extra standoff covering the observed jump size.
            double noise_pad = std::min(t.max_jump, 15.0);
            circles.push_back({id, t.pos, assumed_range(id) + kStandoffMarginKm + noise_pad});
        }
        return circles;
    }

    const Track* storage_track() const {
        auto it = tracks.find("storage");
        return it != tracks.end() ? &it->second : nullptr;
    }

    bool circles_drifted(const std::vector<ThreatCircle>& circles) const {
        if (circles.size() != planned_circles.size()) return true;
        for (size_t i = 0; i < circles.size(); ++i) {
            if (circles[i].id != planned_circles[i].id) return true;
            if (distance(circles[i].center, planned_circles[i].center) > 1.5) return true;
            if (std::abs(circles[i].radius - planned_circles[i].radius) > 0.25) return true;
        }
        return false;
    }

    void plan_to(const Observation& obs, GoalKind kind, Vec2 goal_pos, double goal_radius,
                 const std::vector<ThreatCircle>& circles) {
        auto result = planner.plan(obs.own_pos, goal_pos, goal_radius, circles, path);
        path_next = 0;
        path_goal = kind;
        path_valid = result == Planner::Result::Ok;
        release_unreachable = kind == GoalKind::Release && !path_valid;
        last_plan_tick = obs.tick;
        planned_circles = circles;
    }

    std::optional<Vec2> follow_path(const Observation& obs,
                                    const std::vector<ThreatCircle>& circles) {
        if (!path_valid || path.empty()) return std::nullopt;
        auto clear = [&](Vec2 a, Vec2 b) {
            for (const ThreatCircle& c : circles) {
                if (segment_hits_circle(a, b, c.center, c.radius + 0.1)) return false;
            }
            return true;
        };
        // Skip ahead over nodes reachable in a straight safe line.
        size_t lookahead = std::min(path.size() - 1, path_next + 40);
        for (size_t k = lookahead; k > path_next; --k) {
            if (distance(obs.own_pos, path[k]) <= 40.0 && clear(obs.own_pos, path[k])) {
                path_next = k;
                break;
            }
        }
        while (path_next + 1 < path.size() && distance(obs.own_pos, path[path_next]) < 0.45) {
            ++path_next;
        }
        return path[path_next];
    }

    // The briefed strike policy: route to a release point, strike, egress.
    Action strike_action(const Observation& obs) {
        Action action;
        const auto circles = threat_circles();
        const Track* storage = storage_track();
        const double weapon_range = known ? known->assumed.jet.weapon_range : 20.0;

        // Emergency: inside a threat circle, move straight out while the
        // next plan forms.
        Vec2 flee{0, 0};
        bool emergency = false;
        for (const ThreatCircle& c : circles) {
            double d = distance(obs.own_pos, c.center);
            if (d < c.radius) {
                Vec2 away = d > 1e-9 ? (obs.own_pos - c.center) * (1.0 / d) : Vec2{1, 0};
                flee = flee + away;
                emergency = true;
            }
        }
        if (emergency) {
            action.waypoint = obs.own_pos + flee.unit_or_zero() * 5.0;
            path_valid = false;  // force replan once outside
            return maybe_fire(action, obs, storage, weapon_range);
        }

        GoalKind want;
        Vec2 goal_pos;
        double goal_radius = 0.0;
        if (obs.own_weapons <= 0 || !storage) {
            if (obs.own_weapons <= 0) {
                want = GoalKind::Home;
                goal_pos = known ? known->assumed.jet.base_pos : Vec2{0, 0};
            } else {
                // No target picture: hold at a safe standoff.
                action.waypoint = std::nullopt;
                return action;
            }
        } else {
            want = GoalKind::Release;
            goal_pos = storage->pos;
            goal_radius = std::max(1.0, weapon_range - 1.0);
        }

        const bool drifted = circles_drifted(circles);
        const bool cooled = obs.tick - last_plan_tick >= 10;
        bool need_plan;
        if (path_goal != want) {
            need_plan = true;
        } else if (release_unreachable) {
            need_plan = drifted && cooled;  // retry only when the picture changed
        } else if (!path_valid) {
            need_plan = true;
        } else {
            bool goal_moved = want == GoalKind::Release && !path.empty() &&
                              distance(path.back(), goal_pos) > goal_radius + 2.0;
            need_plan = (drifted || goal_moved) && cooled;
        }
        if (need_plan) {
            plan_to(obs, want, goal_pos, goal_radius, circles);
        }
        if (want == GoalKind::Release && release_unreachable) {
            // No safe release point under current estimates.
            action.waypoint = std::nullopt;
            return maybe_fire(action, obs, storage, weapon_range);
        }
        action.waypoint = follow_path(obs, circles);
        return maybe_fire(action, obs, storage, weapon_range);
    }

    // Release is commanded only when legal under the briefed rule set; the
    // simulator enforces the true rules.
    bool briefed_fire_legal(const Observation& obs, Vec2 target_pos) const {
        if (!known) return true;
        const Rules& r = known->assumed.rules;
        if (r.engagement_window &&
            (obs.tick < r.engagement_window->first || obs.tick > r.engagement_window->second)) {
            return false;
        }
        for (const NoFireZone& z : known->assumed.zones) {
            if (distance(target_pos, z.center) <= z.radius) return false;
        }
        return true;
    }

    Action& maybe_fire(Action& action, const Observation& obs, const Track* storage,
                       double weapon_range) {
        if (storage && storage->seen_now && obs.own_weapons > 0 &&
            distance(obs.own_pos, storage->pos) <= weapon_range - 0.5 &&
            briefed_fire_legal(obs, storage->pos)) {
            action.fire_at = "storage";
            if (!fire_pending) {
                fire_pending = true;
                fire_commanded_tick = obs.tick;
                weapons_at_command = obs.own_weapons;
            }
        }
        if (fire_pending && weapons_at_command >= 0 && obs.own_weapons < weapons_at_command) {
            fire_pending = false;  // strike resolved
        }
        return action;
    }
};

} // namespace

// ---------------------------------------------------------------------------
// Baseline agent
// ---------------------------------------------------------------------------

struct BaselineAgent::Impl {
    PilotCore core;
};

BaselineAgent::BaselineAgent() : impl_(std::make_unique<Impl>()) {}
BaselineAgent::~BaselineAgent() = default;

void BaselineAgent::reset(std::shared_ptr<const KnownWorld> known) {
    impl_->core.reset(std::move(known));
}

Action BaselineAgent::act(const Observation& obs) {
    impl_->core.update_tracks(obs);
    return impl_->core.strike_action(obs);
}

// ---------------------------------------------------------------------------
// Aware agent
// ---------------------------------------------------------------------------

struct AwareAgent::Impl {
    PilotCore core;

    enum class Phase { Strike, Evade, GoHome };
    Phase phase = Phase::Strike;
    bool detected = false;
    bool report_sent = false;
    NoveltyReport report;
    bool warning_seen_before = false;
    int clean_warning_ticks = 0;

    void reset(std::shared_ptr<const KnownWorld> known) {
        core.reset(std::move(known));
        phase = Phase::Strike;
        detected = false;
        report_sent = false;
        report = NoveltyReport{};
        warning_seen_before = false;
        clean_warning_ticks = 0;
    }

    void declare(const Observation& obs, int level, const std::string& what) {
        if (detected) return;
        detected = true;
        report.detected = true;
        report.level_guess = level;
        report.description = what;
        report.tick = obs.tick;
    }

    // Returns the trigger evaluation; ordering is fixed: roster anomalies,
    // unexpected launches, lost picture, track jumps, hostile closure,
    // unexplained movement, unresponsive weapons.
    void run_triggers(const Observation& obs) {
        const KnownWorld* kw = core.known.get();
        auto in_roster = [&](const std::string& id) {
            if (!kw) return true;
            if (id == kw->assumed.storage.id) return true;
            for (const SamSite& s : kw->assumed.sams)
                if (s.id == id) return true;
            return false;
        };

        // (b) unknown entity / unexpected count
        for (const TrackReport& r : obs.tracks) {
            if (in_roster(r.id)) continue;
            auto it = core.tracks.find(r.id);
            int first = it != core.tracks.end() ? it->second.first_seen : obs.tick;
            if (first <= 2) {
                declare(obs, 2, "unbriefed " + r.cls + " '" + r.id + "' present at start");
            } else {
                declare(obs, 8, r.cls + " '" + r.id + "' appeared mid-battle");
            }
        }

        // (a) missile launch while outside every briefed envelope
        if (!obs.missile_warnings.empty() && !warning_seen_before) {
            warning_seen_before = true;
            bool all_outside = true;
            for (const auto& [id, t] : core.tracks) {
                if (t.cls != "sam" || !t.seen_now) continue;
                double briefed = kw ? kw->assumed_range(id)
                                    : sim_constants::kDefaultAssumedRangeKm;
                if (distance(obs.own_pos, t.pos) <= briefed + kEnvelopeSlackKm) {
                    all_outside = false;
                }
            }
            if (all_outside) {
                declare(obs, 2, "inbound missile while outside every briefed engagement envelope");
                reestimate_ranges(obs);
                phase = Phase::Evade;
                clean_warning_ticks = 0;
            }
        } else if (!obs.missile_warnings.empty() && phase == Phase::Strike) {
            // Post-detection surprise: envelope still underestimated. Widen
            // again and break off.
            bool outside_estimates = true;
            for (const auto& [id, t] : core.tracks) {
                if (t.cls != "sam" || !t.seen_now) continue;
                if (distance(obs.own_pos, t.pos) <=
                    core.assumed_range(id) + kEnvelopeSlackKm) {
                    outside_estimates = false;
                }
            }
            if (outside_estimates && detected) {
                reestimate_ranges(obs);
                phase = Phase::Evade;
                clean_warning_ticks = 0;
            }
        }

        // (d) picture lost while the briefed sensor suite was nominal
        bool sensors_briefed_nominal = true;
        if (kw) {
            for (const Sensor& s : kw->assumed.sensors) {
                if (s.status != SensorStatus::Nominal) sensors_briefed_nominal = false;
            }
        }
        if (sensors_briefed_nominal && core.empty_ticks >= kTracksLostTicks) {
            declare(obs, 4, "all sensor tracks lost");
            if (phase != Phase::Evade) phase = Phase::GoHome;
        }

        // (e) kinematically implausible track jumps
        for (const auto& [id, t] : core.tracks) {
            if (t.jumps >= 2) {
                declare(obs, 5, "track '" + id + "' jumps beyond plausible speed");
            }
        }

        // (g) SAM closing on the jet / (c) SAM under way
        for (const auto& [id, t] : core.tracks) {
            if (t.cls != "sam" || t.move_ticks < 5) continue;
            if (t.closing_streak >= 4) {
                declare(obs, 7, "sam '" + id + "' is closing on us instead of holding");
            } else if (t.accum_move > 0.5) {
                declare(obs, 3, "sam '" + id + "' is moving");
            }
        }

        // (f) a legal fire order did not execute in the expected delay
        if (core.fire_pending && kw) {
            int expected = core.fire_commanded_tick + kw->assumed.rules.global_fire_delay;
            if (obs.tick > expected && obs.own_weapons >= core.weapons_at_command) {
                declare(obs, 6, "weapon release order did not execute");
                if (phase != Phase::Evade) phase = Phase::GoHome;
            }
        }
    }

    void reestimate_ranges(const Observation& obs) {
        double nearest = std::numeric_limits<double>::infinity();
        for (const auto& [id, t] : core.tracks) {
            if (t.cls == "sam" && t.seen_now) {
                nearest = std::min(nearest, distance(obs.own_pos, t.pos));
            }
        }
        if (!std::isfinite(nearest)) nearest = sim_constants::kDefaultAssumedRangeKm;
        double estimate = nearest + kRangePadKm;
        for (const auto& [id, t] : core.tracks) {
            if (t.cls != "sam") continue;
            double& ov = core.range_override[id];
            ov = std::max(ov, estimate);
        }
        core.path_valid = false;  // standoff changed; replan
    }

    Action act(const Observation& obs) {
        core.update_tracks(obs);
        run_triggers(obs);

        Action action;
        switch (phase) {
            case Phase::Strike: {
                action = core.strike_action(obs);
                if (core.release_unreachable && detected) {
                    // Characterized enough to know the strike is off the table.
                    phase = Phase::GoHome;
                    core.path_valid = false;
                } else if (core.release_unreachable && !detected) {
                    // Boxed out without an explanation: hold (mirrors baseline).
                }
                break;
            }
            case Phase::Evade: {
                Vec2 flee{0, 0};
                for (const auto& [id, t] : core.tracks) {
                    if (t.cls != "sam") continue;
                    Vec2 away = obs.own_pos - t.pos;
                    double d = std::max(away.norm(), 1e-6);
                    flee = flee + away * (1.0 / (d * d));
                }
                Vec2 dir = flee.unit_or_zero();
                if (dir.norm() < 0.5) {
                    Vec2 base = core.known ? core.known->assumed.jet.base_pos : Vec2{0, 0};
                    dir = (base - obs.own_pos).unit_or_zero();
                }
                action.waypoint = obs.own_pos + dir * 10.0;

                clean_warning_ticks =
                    obs.missile_warnings.empty() ? clean_warning_ticks + 1 : 0;
                bool outside = true;
                for (const auto& [id, t] : core.tracks) {
                    if (t.cls != "sam") continue;
                    if (distance(obs.own_pos, t.pos) <
                        core.assumed_range(id) + kStandoffMarginKm) {
                        outside = false;
                    }
                }
                if (clean_warning_ticks >= 5 && outside) {
                    phase = Phase::Strike;
                    core.path_valid = false;
                }
                break;
            }
            case Phase::GoHome: {
                const auto circles = core.threat_circles();
                Vec2 base = core.known ? core.known->assumed.jet.base_pos : Vec2{0, 0};
                bool need_plan = !core.path_valid || core.path_goal != GoalKind::Home;
                bool stale = core.circles_drifted(circles) && obs.tick - core.last_plan_tick >= 10;
                if (need_plan || stale) {
                    core.plan_to(obs, GoalKind::Home, base, 0.0, circles);
                }
                action.waypoint = core.follow_path(obs, circles);
                if (!action.waypoint) action.waypoint = base;
                if (distance(obs.own_pos, base) <= 0.8) {
                    action.abort = true;
                }
                break;
            }
        }

        if (detected && !report_sent) {
            action.declare = report;
            report_sent = true;
        }
        return action;
    }
};

AwareAgent::AwareAgent() : impl_(std::make_unique<Impl>()) {}
AwareAgent::~AwareAgent() = default;

void AwareAgent::reset(std::shared_ptr<const KnownWorld> known) {
    impl_->reset(std::move(known));
}

Action AwareAgent::act(const Observation& obs) {
    return impl_->act(obs);
}

std::unique_ptr<AgentInterface> make_agent(const std::string& name) {
    if (name == "baseline") return std::make_unique<BaselineAgent>();
    if (name == "aware") return std::make_unique<AwareAgent>();
    return nullptr;
}

std::vector<std::string> agent_names() {
    return {"baseline", "aware"};
}

} // namespace owh
