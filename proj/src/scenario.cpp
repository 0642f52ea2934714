#include "owh/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "owh/errors.hpp"

namespace owh {

ScenarioConfig default_scenario() {
    ScenarioConfig cfg;
    cfg.jet = BlueJet{};
    cfg.jet.pos = {0.0, 0.0};
    cfg.jet.base_pos = {0.0, 0.0};

    SamSite north;
    north.id = "sam-0";
    north.pos = {100.0, 30.0};
    SamSite south;
    south.id = "sam-1";
    south.pos = {100.0, -30.0};
    cfg.sams = {north, south};

    cfg.storage = AmmoStorage{};
    cfg.storage.pos = {150.0, 0.0};

    // Redundant sensor suite; any nominal sensor sees the whole picture.
    for (int i = 0; i < 3; ++i) {
        Sensor s;
        s.id = "sensor-" + std::to_string(i);
        cfg.sensors.push_back(s);
    }
    return cfg;
}

std::vector<std::string> validate_scenario(const ScenarioConfig& cfg) {
    std::vector<std::string> errors;
    auto check_finite = [&](Vec2 v, const std::string& what) {
        if (!std::isfinite(v.x) || !std::isfinite(v.y))
            errors.push_back(what + ": position must be finite");
    };
    auto check_prob = [&](double p, const std::string& what) {
        if (!(p >= 0.0 && p <= 1.0)) errors.push_back(what + ": must be in [0,1]");
    };

    check_finite(cfg.jet.pos, "jet.pos");
    check_finite(cfg.jet.base_pos, "jet.base_pos");
    if (!(cfg.jet.speed_max > 0.0)) errors.push_back("jet.speed_max: must be > 0");
    if (!(cfg.jet.weapon_range > 0.0)) errors.push_back("jet.weapon_range: must be > 0");
    if (cfg.jet.weapons_remaining < 0) errors.push_back("jet.weapons: must be >= 0");
    check_prob(cfg.jet.survivability_p, "jet.survivability_p");

    for (size_t i = 0; i < cfg.sams.size(); ++i) {
        const SamSite& s = cfg.sams[i];
        const std::string tag = "sams[" + std::to_string(i) + "]";
        check_finite(s.pos, tag + ".pos");
        if (!(s.missile_range > 0.0)) errors.push_back(tag + ".missile_range: must be > 0");
        if (!(s.missile_speed > 0.0)) errors.push_back(tag + ".missile_speed: must be > 0");
        if (s.warheads < 0) errors.push_back(tag + ".warheads: must be >= 0");
        if (s.reload_ticks < 0) errors.push_back(tag + ".reload_ticks: must be >= 0");
        check_prob(s.kill_prob, tag + ".kill_prob");
        check_prob(s.survivability_p, tag + ".survivability_p");
        if (s.move_speed < 0.0) errors.push_back(tag + ".move_speed: must be >= 0");
        if (s.fire_delay < 0.0) errors.push_back(tag + ".fire_delay: must be >= 0");
    }

    check_finite(cfg.storage.pos, "storage.pos");
    check_prob(cfg.storage.survivability_p, "storage.survivability_p");
    if (cfg.storage.defender) {
        if (!(cfg.storage.defender->range > 0.0))
            errors.push_back("storage.defender.range: must be > 0");
        check_prob(cfg.storage.defender->kill_prob, "storage.defender.kill_prob");
    }

    for (size_t i = 0; i < cfg.zones.size(); ++i) {
        if (!(cfg.zones[i].radius > 0.0))
            errors.push_back("zones[" + std::to_string(i) + "].radius: must be > 0");
        check_finite(cfg.zones[i].center, "zones[" + std::to_string(i) + "].center");
    }
    for (size_t i = 0; i < cfg.terrain.size(); ++i) {
        const TerrainPatch& t = cfg.terrain[i];
        const std::string tag = "terrain[" + std::to_string(i) + "]";
        if (!(t.radius > 0.0)) errors.push_back(tag + ".radius: must be > 0");
        check_prob(t.sensor_attenuation, tag + ".sensor_attenuation");
        if (!(t.speed_factor > 0.0 && t.speed_factor <= 1.0))
            errors.push_back(tag + ".speed_factor: must be in (0,1]");
    }

    if (cfg.rules.time_limit <= 0) errors.push_back("rules.time_limit: must be > 0");
    if (cfg.rules.global_fire_delay < 0)
        errors.push_back("rules.global_fire_delay: must be >= 0");
    if (cfg.rules.engagement_window &&
        cfg.rules.engagement_window->first > cfg.rules.engagement_window->second)
        errors.push_back("rules.engagement_window: start_tick <= end_tick violated");

    for (size_t i = 0; i < cfg.events.size(); ++i) {
        if (cfg.events[i].tick < 0)
            errors.push_back("events[" + std::to_string(i) + "].tick: must be >= 0");
    }
    return errors;
}

double KnownWorld::assumed_range(const std::string& sam_id) const {
    for (const SamSite& s : assumed.sams) {
        if (s.id == sam_id) return s.missile_range;
    }
    return default_missile_range;
}

std::string status_name(MissionStatus s) {
    switch (s) {
        case MissionStatus::Ongoing: return "ongoing";
        case MissionStatus::Win: return "win";
        case MissionStatus::Abort: return "abort";
        case MissionStatus::Fail: return "fail";
    }
    return "?";
}

WorldState init_world(const ScenarioConfig& cfg, std::shared_ptr<const KnownWorld> known,
                      RngState rng) {
    auto errors = validate_scenario(cfg);
    if (!errors.empty()) {
        std::ostringstream msg;
        msg << "invalid battle plan:";
        for (const auto& e : errors) msg << "\n  - " << e;
        throw ConfigError(msg.str());
    }
    WorldState w;
    w.jet = cfg.jet;
    w.sams = cfg.sams;
    w.storage = cfg.storage;
    w.zones = cfg.zones;
    w.terrain = cfg.terrain;
    w.sensors = cfg.sensors;
    w.rules = cfg.rules;
    w.scheduled_events = cfg.events;
    w.rng = rng;
    w.known = std::move(known);
    return w;
}

namespace {

bool inside_zone(Vec2 p, const NoFireZone& z) {
    return distance(p, z.center) <= z.radius;
}

bool inside_patch(Vec2 p, const TerrainPatch& t) {
    return distance(p, t.center) <= t.radius;
}

bool window_open(const Rules& rules, int tick) {
    if (!rules.engagement_window) return true;
    return tick >= rules.engagement_window->first && tick <= rules.engagement_window->second;
}

// True when any no-fire zone shields `target_pos` from `shooter_is_blue`.
bool fire_blocked_by_zone(const std::vector<NoFireZone>& zones, Vec2 target_pos,
                          bool shooter_is_blue) {
    for (const NoFireZone& z : zones) {
        if (!inside_zone(target_pos, z)) continue;
        if (z.applies_to == ZoneScope::AllEntities || shooter_is_blue) return true;
    }
    return false;
}

struct SensedEntity {
    std::string id;
    std::string cls;
    Vec2 pos;
};

std::vector<SensedEntity> ground_truth_entities(const WorldState& w) {
    std::vector<SensedEntity> out;
    for (const SamSite& s : w.sams)
        if (s.alive) out.push_back({s.id, "sam", s.pos});
    for (const SamSite& f : w.red_fighters)
        if (f.alive) out.push_back({f.id, "red_fighter", f.pos});
    if (!w.storage.destroyed) out.push_back({w.storage.id, "storage", w.storage.pos});
    return out;
}

// Suppression roll for a view-limiting patch: pure function of
// (battle seed, tick, sensor, entity).
bool attenuated(const WorldState& w, const TerrainPatch& patch, const Sensor& sensor,
                const SensedEntity& e) {
    std::string label = "atten/" + std::to_string(w.tick) + "/" + sensor.id + "/" + e.id;
    return hashed_u01(w.rng.seed(), label) < patch.sensor_attenuation;
}

Vec2 falsified_pos(const WorldState& w, const Sensor& sensor, const SensedEntity& e,
                   const FalsifyRule& rule) {
    Vec2 p = e.pos + rule.offset;
    if (rule.jitter > 0.0) {
        std::string base = "jitter/" + std::to_string(w.tick) + "/" + sensor.id + "/" + e.id;
        double jx = (hashed_u01(w.rng.seed(), base + "/x") * 2.0 - 1.0) * rule.jitter;
        double jy = (hashed_u01(w.rng.seed(), base + "/y") * 2.0 - 1.0) * rule.jitter;
        p = p + Vec2{jx, jy};
    }
    return p;
}

std::optional<double> briefed_range(const WorldState& w, const SensedEntity& e) {
    if (e.cls != "sam" && e.cls != "red_fighter") return std::nullopt;
    if (w.known) return w.known->assumed_range(e.id);
    return sim_constants::kDefaultAssumedRangeKm;
}

} // namespace

Observation observe(const WorldState& state) {
    Observation obs;
    obs.tick = state.tick;
    obs.own_pos = state.jet.pos;
    obs.own_weapons = state.jet.weapons_remaining;
    obs.own_alive = state.jet.alive;
    obs.known_world = state.known;

    const auto truth = ground_truth_entities(state);

    auto seen_by = [&](const Sensor& sensor, const SensedEntity& e) {
        for (const TerrainPatch& t : state.terrain) {
            if (t.kind == TerrainKind::ViewLimiting && inside_patch(e.pos, t) &&
                attenuated(state, t, sensor, e)) {
                return false;
            }
        }
        return true;
    };
    auto already_tracked = [&](const std::string& id) {
        return std::any_of(obs.tracks.begin(), obs.tracks.end(),
                           [&](const TrackReport& t) { return t.id == id; });
    };

    // Nominal sensors report truth; compromised ones contribute only
    // falsified reports, and never override a true report for the same id.
    for (const Sensor& sensor : state.sensors) {
        if (sensor.status != SensorStatus::Nominal) continue;
        for (const SensedEntity& e : truth) {
            if (already_tracked(e.id) || !seen_by(sensor, e)) continue;
            obs.tracks.push_back({e.id, e.cls, e.pos, briefed_range(state, e)});
        }
    }
    for (const Sensor& sensor : state.sensors) {
        if (sensor.status != SensorStatus::Compromised) continue;
        const FalsifyRule rule = sensor.falsify.value_or(FalsifyRule{});
        for (const SensedEntity& e : truth) {
            if (e.id == rule.omit_id) continue;
            if (already_tracked(e.id) || !seen_by(sensor, e)) continue;
            obs.tracks.push_back(
                {e.id, e.cls, falsified_pos(state, sensor, e, rule), briefed_range(state, e)});
        }
    }

    for (const Missile& m : state.missiles) {
        if (m.target != state.jet.id) continue;
        Vec2 rel = m.pos - state.jet.pos;
        if (rel.norm() <= sim_constants::kMissileWarningRadiusKm) {
            obs.missile_warnings.push_back({std::atan2(rel.y, rel.x)});
        }
    }
    return obs;
}

MissionStatus mission_status(const WorldState& state) {
    return state.status;
}

namespace {

double terrain_speed_factor(const WorldState& w, Vec2 p) {
    double factor = 1.0;
    for (const TerrainPatch& t : w.terrain) {
        if (t.kind == TerrainKind::Arduous && inside_patch(p, t)) {
            factor = std::min(factor, t.speed_factor);
        }
    }
    return factor;
}

// Launch commitment: decrement warheads now, spawn the missile after the
// configured delays.
void decide_fire(WorldState& w, SamSite& site) {
    double dist = distance(site.pos, w.jet.pos);
    site.warheads -= 1;
    site.last_decision_tick = w.tick;
    int launch_tick = w.tick + static_cast<int>(std::lround(site.fire_delay)) +
                      w.rules.global_fire_delay;
    w.pending_launches.push_back({launch_tick, site.id});
    w.launch_log.push_back({w.tick, site.id, dist, site.missile_range});
}

SamSite* find_launcher(WorldState& w, const std::string& id) {
    for (SamSite& s : w.sams)
        if (s.id == id) return &s;
    for (SamSite& s : w.red_fighters)
        if (s.id == id) return &s;
    return nullptr;
}

void spawn_missile(WorldState& w, const std::string& owner, Vec2 from, double speed,
                   double kill_prob, double fuel_km) {
    Missile m;
    m.id = "missile-" + std::to_string(w.next_missile_seq++);
    m.owner = owner;
    m.target = w.jet.id;
    m.pos = from;
    m.speed = speed;
    m.kill_prob = kill_prob;
    m.fuel_km = fuel_km;
    w.missiles.push_back(m);
}

void resolve_strike(WorldState& w, const std::string& target_id) {
    w.weapons_fired += 1;
    w.jet.weapons_remaining -= 1;
    if (target_id == w.storage.id && !w.storage.destroyed) {
        if (!(w.rng.u01() < w.storage.survivability_p)) w.storage.destroyed = true;
        return;
    }
    for (SamSite& s : w.sams) {
        if (s.id == target_id && s.alive) {
            if (!(w.rng.u01() < s.survivability_p)) s.alive = false;
            return;
        }
    }
    for (SamSite& f : w.red_fighters) {
        if (f.id == target_id && f.alive) {
            if (!(w.rng.u01() < f.survivability_p)) f.alive = false;
            return;
        }
    }
}

} // namespace

void step(WorldState& w, const Action& action) {
    if (w.status != MissionStatus::Ongoing) {
        throw std::logic_error("battle already terminal");
    }

    // Fire legality is judged against the picture the agent acted on.
    const Observation pre_obs = observe(w);
    auto tracked = [&](const std::string& id) {
        return std::any_of(pre_obs.tracks.begin(), pre_obs.tracks.end(),
                           [&](const TrackReport& t) { return t.id == id; });
    };

    // (1) scheduled events
    for (auto it = w.scheduled_events.begin(); it != w.scheduled_events.end();) {
        if (it->tick == w.tick) {
            if (it->kind == EventKind::SpawnRedFighter) {
                SamSite fighter = it->fighter;
                if (fighter.id.empty())
                    fighter.id = "fighter-" + std::to_string(w.red_fighters.size());
                fighter.goal = SamGoal::DestroyJet;
                fighter.mobile = true;
                w.red_fighters.push_back(fighter);
            }
            it = w.scheduled_events.erase(it);
        } else {
            ++it;
        }
    }

    // (2) blue movement
    if (action.abort) w.abort_latched = true;
    std::optional<Vec2> waypoint = action.waypoint;
    if (w.abort_latched) waypoint = w.jet.base_pos;
    if (w.jet.alive && waypoint) {
        double speed = w.jet.speed_max * terrain_speed_factor(w, w.jet.pos);
        w.jet.pos = step_toward(w.jet.pos, *waypoint, speed);
    }

    // (3) blue fire
    if (w.jet.alive && action.fire_at) {
        const std::string& target_id = *action.fire_at;
        Vec2 target_pos;
        bool target_known = false;
        if (target_id == w.storage.id && !w.storage.destroyed) {
            target_pos = w.storage.pos;
            target_known = true;
        } else {
            for (const SamSite& s : w.sams)
                if (s.id == target_id && s.alive) { target_pos = s.pos; target_known = true; }
            for (const SamSite& f : w.red_fighters)
                if (f.id == target_id && f.alive) { target_pos = f.pos; target_known = true; }
        }
        int committed = static_cast<int>(w.pending_strikes.size());
        bool legal = target_known && tracked(target_id) &&
                     distance(w.jet.pos, target_pos) <= w.jet.weapon_range &&
                     !fire_blocked_by_zone(w.zones, target_pos, /*shooter_is_blue=*/true) &&
                     window_open(w.rules, w.tick) &&
                     w.jet.weapons_remaining - committed > 0;
        if (legal) {
            w.pending_strikes.push_back({w.tick + w.rules.global_fire_delay, target_id});
        }
    }
    for (auto it = w.pending_strikes.begin(); it != w.pending_strikes.end();) {
        if (it->resolve_tick <= w.tick && w.jet.alive) {
            resolve_strike(w, it->target);
            it = w.pending_strikes.erase(it);
        } else {
            ++it;
        }
    }

    // (4) red fire decisions and movement
    auto red_turn = [&](SamSite& site, bool is_fighter) {
        if (!site.alive || site.decoy) return;
        if (w.jet.alive && site.warheads > 0 &&
            w.tick - site.last_decision_tick >= site.reload_ticks &&
            window_open(w.rules, w.tick) &&
            distance(site.pos, w.jet.pos) <= site.missile_range &&
            !fire_blocked_by_zone(w.zones, w.jet.pos, /*shooter_is_blue=*/false)) {
            decide_fire(w, site);
        }
        if (site.mobile && site.move_speed > 0.0) {
            double speed = site.move_speed * terrain_speed_factor(w, site.pos);
            if (site.goal == SamGoal::DestroyJet || site.pursue_jet || is_fighter) {
                site.pos = step_toward(site.pos, w.jet.pos, speed);
            } else if (!w.storage.destroyed) {
                // Repositioning toward the asset it defends; holds at standoff.
                if (distance(site.pos, w.storage.pos) > 25.0) {
                    site.pos = step_toward(site.pos, w.storage.pos, speed);
                }
            }
        }
    };
    for (SamSite& s : w.sams) red_turn(s, false);
    for (SamSite& f : w.red_fighters) red_turn(f, true);

    if (w.storage.defender && !w.storage.destroyed && w.jet.alive) {
        Defender& d = *w.storage.defender;
        if (d.warheads > 0 && w.tick - d.last_decision_tick >= d.reload_ticks &&
            window_open(w.rules, w.tick) &&
            distance(w.storage.pos, w.jet.pos) <= d.range &&
            !fire_blocked_by_zone(w.zones, w.jet.pos, /*shooter_is_blue=*/false)) {
            d.warheads -= 1;
            d.last_decision_tick = w.tick;
            int launch_tick = w.tick + w.rules.global_fire_delay;
            w.pending_launches.push_back({launch_tick, w.storage.id});
            w.launch_log.push_back({w.tick, w.storage.id,
                                    distance(w.storage.pos, w.jet.pos), d.range});
        }
    }

    for (auto it = w.pending_launches.begin(); it != w.pending_launches.end();) {
        if (it->launch_tick <= w.tick) {
            if (it->owner == w.storage.id) {
                if (!w.storage.destroyed && w.storage.defender) {
                    const Defender& d = *w.storage.defender;
                    spawn_missile(w, w.storage.id, w.storage.pos, d.missile_speed,
                                  d.kill_prob, d.range);
                }
            } else if (SamSite* site = find_launcher(w, it->owner); site && site->alive) {
                spawn_missile(w, site->id, site->pos, site->missile_speed, site->kill_prob,
                              site->missile_range);
            }
            it = w.pending_launches.erase(it);
        } else {
            ++it;
        }
    }

    // (5) missile flight
    for (auto it = w.missiles.begin(); it != w.missiles.end();) {
        Missile& m = *it;
        if (!w.jet.alive) {
            it = w.missiles.erase(it);
            continue;
        }
        double gap = distance(m.pos, w.jet.pos);
        double stride = std::min(m.speed, gap);
        m.pos = step_toward(m.pos, w.jet.pos, m.speed);
        m.traveled += stride;
        if (distance(m.pos, w.jet.pos) <= sim_constants::kInterceptRadiusKm) {
            bool survives = w.rng.u01() < w.jet.survivability_p;
            if (!survives && w.rng.u01() < m.kill_prob) {
                w.jet.alive = false;
            }
            it = w.missiles.erase(it);
            continue;
        }
        if (m.traveled >= m.fuel_km) {
            it = w.missiles.erase(it);
            continue;
        }
        ++it;
    }

    // (6) status
    if (w.storage.destroyed && w.jet.alive) {
        w.status = MissionStatus::Win;
    } else if (!w.jet.alive) {
        w.status = MissionStatus::Fail;
    } else if (w.tick >= w.rules.time_limit) {
        w.status = MissionStatus::Fail;
    } else if (w.abort_latched && !w.storage.destroyed &&
               distance(w.jet.pos, w.jet.base_pos) <= sim_constants::kAbortRadiusKm) {
        w.status = MissionStatus::Abort;
    }

    // (7)
    w.tick += 1;
}

BattleOutcome run_battle(const ScenarioConfig& cfg, std::shared_ptr<const KnownWorld> known,
                         AgentInterface& agent, RngState rng, const TraceSink* trace) {
    WorldState w = init_world(cfg, known, rng);
    agent.reset(w.known);

    BattleOutcome out;
    while (w.status == MissionStatus::Ongoing) {
        Observation obs = observe(w);
        Action action = agent.act(obs);
        if (action.declare && action.declare->detected) {
            out.reports.push_back(*action.declare);
        }
        step(w, action);
        if (trace) {
            std::ostringstream line;
            line << "{\"tick\":" << w.tick << ",\"jet\":[" << w.jet.pos.x << ","
                 << w.jet.pos.y << "],\"alive\":" << (w.jet.alive ? "true" : "false")
                 << ",\"weapons\":" << w.jet.weapons_remaining
                 << ",\"missiles\":" << w.missiles.size() << ",\"status\":\""
                 << status_name(w.status) << "\"}";
            (*trace)(line.str());
        }
    }

    out.status = w.status;
    out.ticks = w.tick;
    out.targets_prosecuted = w.storage.destroyed ? 1 : 0;
    out.friendly_casualties = w.jet.alive ? 0 : 1;
    out.time_exceeded = w.status == MissionStatus::Fail && w.tick > w.rules.time_limit;
    out.weapons_fired = w.weapons_fired;
    out.launch_log = w.launch_log;
    return out;
}

} // namespace owh
