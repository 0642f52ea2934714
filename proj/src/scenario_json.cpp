#include <nlohmann/json.hpp>

#include "owh/errors.hpp"
#include "owh/scenario.hpp"

namespace owh {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& msg) {
    throw ConfigError("scenario config: " + where + ": " + msg);
}

// Objects merge per key (override wins), everything else is replaced.
json deep_merge(const json& base, const json& overrides) {
    if (!base.is_object() || !overrides.is_object()) return overrides;
    json out = base;
    for (auto it = overrides.begin(); it != overrides.end(); ++it) {
        if (out.contains(it.key())) {
            out[it.key()] = deep_merge(out[it.key()], it.value());
        } else {
            out[it.key()] = it.value();  // rejected later by the strict parser
        }
    }
    return out;
}

void require_object(const json& j, const std::string& where,
                    std::initializer_list<const char*> keys) {
    if (!j.is_object()) schema_error(where, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : keys)
            if (it.key() == k) known = true;
        if (!known) schema_error(where, "unknown field '" + it.key() + "'");
    }
    for (const char* k : keys) {
        if (!j.contains(k)) schema_error(where, std::string("missing field '") + k + "'");
    }
}

json vec_to_json(Vec2 v) { return json::array({v.x, v.y}); }

Vec2 vec_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        schema_error(where, "expected [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

json jet_to_json(const BlueJet& jet) {
    return {{"pos", vec_to_json(jet.pos)},
            {"base_pos", vec_to_json(jet.base_pos)},
            {"speed_max", jet.speed_max},
            {"weapon_range", jet.weapon_range},
            {"weapons", jet.weapons_remaining},
            {"survivability_p", jet.survivability_p}};
}

BlueJet jet_from_json(const json& raw) {
    const json j = deep_merge(jet_to_json(BlueJet{}), raw);
    require_object(j, "jet",
                   {"pos", "base_pos", "speed_max", "weapon_range", "weapons",
                    "survivability_p"});
    BlueJet jet;
    jet.pos = vec_from_json(j["pos"], "jet.pos");
    jet.base_pos = vec_from_json(j["base_pos"], "jet.base_pos");
    jet.speed_max = j["speed_max"].get<double>();
    jet.weapon_range = j["weapon_range"].get<double>();
    jet.weapons_remaining = j["weapons"].get<int>();
    jet.survivability_p = j["survivability_p"].get<double>();
    return jet;
}

json sam_to_json(const SamSite& s) {
    return {{"id", s.id},
            {"pos", vec_to_json(s.pos)},
            {"missile_range", s.missile_range},
            {"missile_speed", s.missile_speed},
            {"warheads", s.warheads},
            {"reload_ticks", s.reload_ticks},
            {"kill_prob", s.kill_prob},
            {"survivability_p", s.survivability_p},
            {"mobile", s.mobile},
            {"move_speed", s.move_speed},
            {"decoy", s.decoy},
            {"pursue_jet", s.pursue_jet},
            {"fire_delay", s.fire_delay},
            {"goal", s.goal == SamGoal::DestroyJet ? "destroy_jet" : "defend_target"}};
}

SamSite sam_from_json(const json& raw, const std::string& where) {
    const json j = deep_merge(sam_to_json(SamSite{}), raw);
    require_object(j, where,
                   {"id", "pos", "missile_range", "missile_speed", "warheads",
                    "reload_ticks", "kill_prob", "survivability_p", "mobile", "move_speed",
                    "decoy", "pursue_jet", "fire_delay", "goal"});
    SamSite s;
    s.id = j["id"].get<std::string>();
    s.pos = vec_from_json(j["pos"], where + ".pos");
    s.missile_range = j["missile_range"].get<double>();
    s.missile_speed = j["missile_speed"].get<double>();
    s.warheads = j["warheads"].get<int>();
    s.reload_ticks = j["reload_ticks"].get<int>();
    s.kill_prob = j["kill_prob"].get<double>();
    s.survivability_p = j["survivability_p"].get<double>();
    s.mobile = j["mobile"].get<bool>();
    s.move_speed = j["move_speed"].get<double>();
    s.decoy = j["decoy"].get<bool>();
    s.pursue_jet = j["pursue_jet"].get<bool>();
    s.fire_delay = j["fire_delay"].get<double>();
    const std::string goal = j["goal"].get<std::string>();
    if (goal == "defend_target") s.goal = SamGoal::DefendTarget;
    else if (goal == "destroy_jet") s.goal = SamGoal::DestroyJet;
    else schema_error(where + ".goal", "expected defend_target|destroy_jet");
    return s;
}

json storage_to_json(const AmmoStorage& st) {
    json defender = nullptr;
    if (st.defender) {
        defender = {{"range", st.defender->range},
                    {"kill_prob", st.defender->kill_prob},
                    {"warheads", st.defender->warheads},
                    {"reload_ticks", st.defender->reload_ticks},
                    {"missile_speed", st.defender->missile_speed}};
    }
    return {{"pos", vec_to_json(st.pos)},
            {"survivability_p", st.survivability_p},
            {"defender", defender}};
}

AmmoStorage storage_from_json(const json& raw) {
    const json j = deep_merge(storage_to_json(AmmoStorage{}), raw);
    require_object(j, "storage", {"pos", "survivability_p", "defender"});
    AmmoStorage st;
    st.pos = vec_from_json(j["pos"], "storage.pos");
    st.survivability_p = j["survivability_p"].get<double>();
    if (!j["defender"].is_null()) {
        Defender defaults;
        json dj = deep_merge(json{{"range", defaults.range},
                                  {"kill_prob", defaults.kill_prob},
                                  {"warheads", defaults.warheads},
                                  {"reload_ticks", defaults.reload_ticks},
                                  {"missile_speed", defaults.missile_speed}},
                             j["defender"]);
        require_object(dj, "storage.defender",
                       {"range", "kill_prob", "warheads", "reload_ticks", "missile_speed"});
        Defender d;
        d.range = dj["range"].get<double>();
        d.kill_prob = dj["kill_prob"].get<double>();
        d.warheads = dj["warheads"].get<int>();
        d.reload_ticks = dj["reload_ticks"].get<int>();
        d.missile_speed = dj["missile_speed"].get<double>();
        st.defender = d;
    }
    return st;
}

json zone_to_json(const NoFireZone& z) {
    return {{"center", vec_to_json(z.center)},
            {"radius", z.radius},
            {"applies_to", z.applies_to == ZoneScope::AllEntities ? "all_entities" : "blue_only"}};
}

NoFireZone zone_from_json(const json& raw, const std::string& where) {
    const json j = deep_merge(zone_to_json(NoFireZone{}), raw);
    require_object(j, where, {"center", "radius", "applies_to"});
    NoFireZone z;
    z.center = vec_from_json(j["center"], where + ".center");
    z.radius = j["radius"].get<double>();
    const std::string scope = j["applies_to"].get<std::string>();
    if (scope == "blue_only") z.applies_to = ZoneScope::BlueOnly;
    else if (scope == "all_entities") z.applies_to = ZoneScope::AllEntities;
    else schema_error(where + ".applies_to", "expected blue_only|all_entities");
    return z;
}

json terrain_to_json(const TerrainPatch& t) {
    return {{"center", vec_to_json(t.center)},
            {"radius", t.radius},
            {"kind", t.kind == TerrainKind::Arduous ? "arduous" : "view_limiting"},
            {"sensor_attenuation", t.sensor_attenuation},
            {"speed_factor", t.speed_factor}};
}

TerrainPatch terrain_from_json(const json& raw, const std::string& where) {
    const json j = deep_merge(terrain_to_json(TerrainPatch{}), raw);
    require_object(j, where, {"center", "radius", "kind", "sensor_attenuation", "speed_factor"});
    TerrainPatch t;
    t.center = vec_from_json(j["center"], where + ".center");
    t.radius = j["radius"].get<double>();
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "view_limiting") t.kind = TerrainKind::ViewLimiting;
    else if (kind == "arduous") t.kind = TerrainKind::Arduous;
    else schema_error(where + ".kind", "expected view_limiting|arduous");
    t.sensor_attenuation = j["sensor_attenuation"].get<double>();
    t.speed_factor = j["speed_factor"].get<double>();
    return t;
}

json sensor_to_json(const Sensor& s) {
    json falsify = nullptr;
    if (s.falsify) {
        falsify = {{"offset", vec_to_json(s.falsify->offset)},
                   {"jitter", s.falsify->jitter},
                   {"omit_id", s.falsify->omit_id}};
    }
    const char* status = s.status == SensorStatus::Nominal ? "nominal"
                         : s.status == SensorStatus::Dead ? "dead"
                                                          : "compromised";
    return {{"id", s.id}, {"status", status}, {"falsify", falsify}};
}

Sensor sensor_from_json(const json& raw, const std::string& where) {
    const json j = deep_merge(sensor_to_json(Sensor{}), raw);
    require_object(j, where, {"id", "status", "falsify"});
    Sensor s;
    s.id = j["id"].get<std::string>();
    const std::string status = j["status"].get<std::string>();
    if (status == "nominal") s.status = SensorStatus::Nominal;
    else if (status == "dead") s.status = SensorStatus::Dead;
    else if (status == "compromised") s.status = SensorStatus::Compromised;
    else schema_error(where + ".status", "expected nominal|dead|compromised");
    if (!j["falsify"].is_null()) {
        json fj = deep_merge(json{{"offset", json::array({0.0, 0.0})},
                                  {"jitter", 0.0},
                                  {"omit_id", ""}},
                             j["falsify"]);
        require_object(fj, where + ".falsify", {"offset", "jitter", "omit_id"});
        FalsifyRule rule;
        rule.offset = vec_from_json(fj["offset"], where + ".falsify.offset");
        rule.jitter = fj["jitter"].get<double>();
        rule.omit_id = fj["omit_id"].get<std::string>();
        s.falsify = rule;
    }
    return s;
}

json rules_to_json(const Rules& r) {
    json window = nullptr;
    if (r.engagement_window) {
        window = json::array({r.engagement_window->first, r.engagement_window->second});
    }
    return {{"engagement_window", window},
            {"global_fire_delay", r.global_fire_delay},
            {"time_limit", r.time_limit}};
}

Rules rules_from_json(const json& raw) {
    const json j = deep_merge(rules_to_json(Rules{}), raw);
    require_object(j, "rules", {"engagement_window", "global_fire_delay", "time_limit"});
    Rules r;
    if (!j["engagement_window"].is_null()) {
        const json& w = j["engagement_window"];
        if (!w.is_array() || w.size() != 2)
            schema_error("rules.engagement_window", "expected [start_tick, end_tick]");
        r.engagement_window = {w[0].get<int>(), w[1].get<int>()};
    }
    r.global_fire_delay = j["global_fire_delay"].get<int>();
    r.time_limit = j["time_limit"].get<int>();
    return r;
}

json event_to_json(const ScheduledEvent& e) {
    return {{"tick", e.tick},
            {"kind", "spawn_red_fighter"},
            {"fighter", sam_to_json(e.fighter)}};
}

ScheduledEvent event_from_json(const json& raw, const std::string& where) {
    const json j = deep_merge(event_to_json(ScheduledEvent{}), raw);
    require_object(j, where, {"tick", "kind", "fighter"});
    ScheduledEvent e;
    e.tick = j["tick"].get<int>();
    if (j["kind"].get<std::string>() != "spawn_red_fighter")
        schema_error(where + ".kind", "expected spawn_red_fighter");
    e.fighter = sam_from_json(j["fighter"], where + ".fighter");
    return e;
}

} // namespace

json scenario_to_json(const ScenarioConfig& cfg) {
    json sams = json::array();
    for (const SamSite& s : cfg.sams) sams.push_back(sam_to_json(s));
    json zones = json::array();
    for (const NoFireZone& z : cfg.zones) zones.push_back(zone_to_json(z));
    json terrain = json::array();
    for (const TerrainPatch& t : cfg.terrain) terrain.push_back(terrain_to_json(t));
    json sensors = json::array();
    for (const Sensor& s : cfg.sensors) sensors.push_back(sensor_to_json(s));
    json events = json::array();
    for (const ScheduledEvent& e : cfg.events) events.push_back(event_to_json(e));
    return {{"jet", jet_to_json(cfg.jet)},
            {"sams", sams},
            {"storage", storage_to_json(cfg.storage)},
            {"zones", zones},
            {"terrain", terrain},
            {"sensors", sensors},
            {"rules", rules_to_json(cfg.rules)},
            {"events", events}};
}

ScenarioConfig scenario_from_json(const json& j) {
    require_object(j, "scenario",
                   {"jet", "sams", "storage", "zones", "terrain", "sensors", "rules",
                    "events"});
    ScenarioConfig cfg;
    cfg.jet = jet_from_json(j["jet"]);
    if (!j["sams"].is_array()) schema_error("sams", "expected an array");
    for (size_t i = 0; i < j["sams"].size(); ++i)
        cfg.sams.push_back(sam_from_json(j["sams"][i], "sams[" + std::to_string(i) + "]"));
    cfg.storage = storage_from_json(j["storage"]);
    if (!j["zones"].is_array()) schema_error("zones", "expected an array");
    for (size_t i = 0; i < j["zones"].size(); ++i)
        cfg.zones.push_back(zone_from_json(j["zones"][i], "zones[" + std::to_string(i) + "]"));
    if (!j["terrain"].is_array()) schema_error("terrain", "expected an array");
    for (size_t i = 0; i < j["terrain"].size(); ++i)
        cfg.terrain.push_back(
            terrain_from_json(j["terrain"][i], "terrain[" + std::to_string(i) + "]"));
    if (!j["sensors"].is_array()) schema_error("sensors", "expected an array");
    for (size_t i = 0; i < j["sensors"].size(); ++i)
        cfg.sensors.push_back(
            sensor_from_json(j["sensors"][i], "sensors[" + std::to_string(i) + "]"));
    cfg.rules = rules_from_json(j["rules"]);
    if (!j["events"].is_array()) schema_error("events", "expected an array");
    for (size_t i = 0; i < j["events"].size(); ++i)
        cfg.events.push_back(
            event_from_json(j["events"][i], "events[" + std::to_string(i) + "]"));
    for (size_t i = 0; i < cfg.sams.size(); ++i)
        if (cfg.sams[i].id.empty()) cfg.sams[i].id = "sam-" + std::to_string(i);
    for (size_t i = 0; i < cfg.sensors.size(); ++i)
        if (cfg.sensors[i].id.empty()) cfg.sensors[i].id = "sensor-" + std::to_string(i);
    return cfg;
}

ScenarioConfig apply_scenario_overrides(const ScenarioConfig& base, const json& overrides) {
    if (overrides.is_null()) return base;
    if (!overrides.is_object()) throw ConfigError("base_scenario: expected an object");
    json merged = deep_merge(scenario_to_json(base), overrides);
    return scenario_from_json(merged);
}

json sam_entity_to_json(const SamSite& s) { return sam_to_json(s); }
SamSite sam_entity_from_json(const json& j, const std::string& where) {
    return sam_from_json(j, where);
}
json zone_entity_to_json(const NoFireZone& z) { return zone_to_json(z); }
NoFireZone zone_entity_from_json(const json& j, const std::string& where) {
    return zone_from_json(j, where);
}
json terrain_entity_to_json(const TerrainPatch& t) { return terrain_to_json(t); }
TerrainPatch terrain_entity_from_json(const json& j, const std::string& where) {
    return terrain_from_json(j, where);
}

} // namespace owh
