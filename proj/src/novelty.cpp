#include "owh/novelty.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "owh/errors.hpp"

namespace owh {

using nlohmann::json;

std::string novelty_level_name(int level) {
    switch (level) {
        case 1: return "Objects";
        case 2: return "Agents";
        case 3: return "Actions";
        case 4: return "Relations";
        case 5: return "Interactions";
        case 6: return "Rules";
        case 7: return "Goals";
        case 8: return "Events";
    }
    throw ConfigError("novelty level must be in 1..8, got " + std::to_string(level));
}

TargetSelector parse_target(const std::string& text) {
    TargetSelector sel;
    auto is_simple = [&](const char* name) { return text == name; };
    if (is_simple("jet") || is_simple("storage") || is_simple("rules") ||
        is_simple("world")) {
        sel.cls = text;
        return sel;
    }
    if (is_simple("all-sams")) return {"sam", std::nullopt, true};
    if (is_simple("all-sensors") || is_simple("sensors")) return {"sensor", std::nullopt, true};
    auto bracket = text.find('[');
    if (bracket != std::string::npos && text.back() == ']') {
        std::string cls = text.substr(0, bracket);
        std::string idx = text.substr(bracket + 1, text.size() - bracket - 2);
        if ((cls == "sam" || cls == "sensor") && !idx.empty() &&
            idx.find_first_not_of("0123456789") == std::string::npos) {
            return {cls, std::stoi(idx), false};
        }
    }
    throw ConfigError("unknown novelty target '" + text +
                      "' (expected jet|storage|rules|world|sam[i]|all-sams|sensor[i]|all-sensors)");
}

namespace {

constexpr double kDefaultMobileSpeed = 0.08;  // km/tick when a flag makes a SAM mobile

struct Constraint {
    double lo;
    double hi;
    bool integer;
};

Constraint constraint_for(const std::string& path) {
    if (path == "missile_range" || path == "radius") return {0.1, 1e6, false};
    if (path == "missile_speed" || path == "move_speed") return {0.01, 1e6, false};
    if (path == "warheads" || path == "weapons" || path == "dead_count")
        return {0.0, 1e9, true};
    if (path == "reload_ticks") return {0.0, 1e9, true};
    if (path == "kill_prob" || path == "survivability_p" || path == "sensor_attenuation")
        return {0.0, 1.0, false};
    if (path == "fire_delay" || path == "compromised_jitter") return {0.0, 1e6, false};
    if (path == "pos.x" || path == "pos.y" || path == "center.x" || path == "center.y")
        return {-1000.0, 1000.0, false};
    if (path == "engagement_window.start" || path == "engagement_window.end")
        return {0.0, 1e9, true};
    if (path == "global_fire_delay") return {0.0, 1e9, true};
    if (path == "time_limit" || path == "tick") return {1.0, 1e9, true};
    if (path == "speed_factor") return {0.05, 1.0, false};
    if (path == "speed_max" || path == "weapon_range") return {0.01, 1e6, false};
    throw ConfigError("unknown novelty parameter path '" + path + "'");
}

double sample_constrained(const TieredSpec& tiered, DifficultyTier tier, RngState& rng,
                          const Constraint& c, bool& clamped) {
    double v = 0.0;
    for (int attempt = 0; attempt < 8; ++attempt) {
        v = sample_tier(tiered, tier, rng);
        if (c.integer) v = std::round(v);
        if (v >= c.lo && v <= c.hi) return v;
    }
    clamped = true;
    return std::clamp(v, c.lo, c.hi);
}

void make_mobile(SamSite& s) {
    s.mobile = true;
    if (s.move_speed < kDefaultMobileSpeed) s.move_speed = kDefaultMobileSpeed;
}

void set_sam_param(SamSite& s, const std::string& path, double v) {
    if (path == "missile_range") s.missile_range = v;
    else if (path == "missile_speed") s.missile_speed = v;
    else if (path == "warheads") s.warheads = static_cast<int>(v);
    else if (path == "reload_ticks") s.reload_ticks = static_cast<int>(v);
    else if (path == "kill_prob") s.kill_prob = v;
    else if (path == "survivability_p") s.survivability_p = v;
    else if (path == "move_speed") { s.move_speed = v; s.mobile = true; }
    else if (path == "fire_delay") s.fire_delay = v;
    else if (path == "pos.x") s.pos.x = v;
    else if (path == "pos.y") s.pos.y = v;
    else throw ConfigError("parameter '" + path + "' does not exist on a SAM site");
}

void set_rules_param(Rules& r, const std::string& path, double v) {
    if (path == "global_fire_delay") {
        r.global_fire_delay = static_cast<int>(v);
    } else if (path == "time_limit") {
        r.time_limit = static_cast<int>(v);
    } else if (path == "engagement_window.start") {
        auto w = r.engagement_window.value_or(std::pair<int, int>{0, r.time_limit});
        w.first = static_cast<int>(v);
        r.engagement_window = w;
    } else if (path == "engagement_window.end") {
        auto w = r.engagement_window.value_or(std::pair<int, int>{0, r.time_limit});
        w.second = static_cast<int>(v);
        r.engagement_window = w;
    } else {
        throw ConfigError("parameter '" + path + "' does not exist on rules");
    }
}

void set_zone_param(NoFireZone& z, const std::string& path, double v) {
    if (path == "center.x") z.center.x = v;
    else if (path == "center.y") z.center.y = v;
    else if (path == "radius") z.radius = v;
    else throw ConfigError("parameter '" + path + "' does not exist on a no-fire zone");
}

void set_terrain_param(TerrainPatch& t, const std::string& path, double v) {
    if (path == "center.x") t.center.x = v;
    else if (path == "center.y") t.center.y = v;
    else if (path == "radius") t.radius = v;
    else if (path == "sensor_attenuation") t.sensor_attenuation = v;
    else if (path == "speed_factor") t.speed_factor = v;
    else throw ConfigError("parameter '" + path + "' does not exist on a terrain patch");
}

std::vector<SamSite*> selected_sams(ScenarioConfig& plan, const TargetSelector& sel,
                                    const std::string& spec_id) {
    std::vector<SamSite*> out;
    if (sel.all) {
        for (SamSite& s : plan.sams) out.push_back(&s);
        return out;
    }
    int idx = sel.index.value_or(0);
    if (idx < 0 || static_cast<size_t>(idx) >= plan.sams.size()) {
        throw ConfigError("novelty '" + spec_id + "': sam[" + std::to_string(idx) +
                          "] does not exist in the plan roster");
    }
    out.push_back(&plan.sams[idx]);
    return out;
}

} // namespace

AppliedNovelty apply_novelty(ScenarioConfig& plan, const NoveltySpec& spec,
                             DifficultyTier tier, int battle_index, RngState& rng) {
    AppliedNovelty record;
    record.spec_id = spec.id;
    record.level = spec.level;
    record.tier = tier;
    record.battle_index = battle_index;

    const TargetSelector sel = parse_target(spec.target);
    auto note = [&](const std::string& target_id, const std::string& path, double v) {
        record.resolved.push_back({target_id, path, v});
        if (std::find(record.affected.begin(), record.affected.end(), target_id) ==
            record.affected.end()) {
            record.affected.push_back(target_id);
        }
    };

    struct Applier {
        ScenarioConfig& plan;
        const NoveltySpec& spec;
        const TargetSelector& sel;
        DifficultyTier tier;
        RngState& rng;
        AppliedNovelty& record;
        decltype(note)& note_fn;

        void operator()(const SetParam& m) {
            for (const auto& [path, tiered] : m.params) {
                if (sel.cls == "sensor") {
                    apply_sensor_param(path, tiered);
                    continue;
                }
                const Constraint c = constraint_for(path);
                if (sel.cls == "sam") {
                    for (SamSite* s : selected_sams(plan, sel, spec.id)) {
                        double v = sample_constrained(tiered, tier, rng, c, record.clamped);
                        set_sam_param(*s, path, v);
                        note_fn(s->id, path, v);
                    }
                } else if (sel.cls == "storage") {
                    double v = sample_constrained(tiered, tier, rng, c, record.clamped);
                    if (path == "survivability_p") plan.storage.survivability_p = v;
                    else if (path == "pos.x") plan.storage.pos.x = v;
                    else if (path == "pos.y") plan.storage.pos.y = v;
                    else throw ConfigError("parameter '" + path + "' does not exist on storage");
                    note_fn(plan.storage.id, path, v);
                } else if (sel.cls == "jet") {
                    double v = sample_constrained(tiered, tier, rng, c, record.clamped);
                    if (path == "speed_max") plan.jet.speed_max = v;
                    else if (path == "weapon_range") plan.jet.weapon_range = v;
                    else if (path == "weapons") plan.jet.weapons_remaining = static_cast<int>(v);
                    else if (path == "survivability_p") plan.jet.survivability_p = v;
                    else throw ConfigError("parameter '" + path + "' does not exist on the jet");
                    note_fn(plan.jet.id, path, v);
                } else if (sel.cls == "rules") {
                    double v = sample_constrained(tiered, tier, rng, c, record.clamped);
                    set_rules_param(plan.rules, path, v);
                    note_fn("rules", path, v);
                } else {
                    throw ConfigError("novelty '" + spec.id + "': set_param cannot target '" +
                                      spec.target + "'");
                }
            }
            if (plan.rules.engagement_window &&
                plan.rules.engagement_window->first > plan.rules.engagement_window->second) {
                plan.rules.engagement_window->second = plan.rules.engagement_window->first;
                record.clamped = true;
            }
        }

        void apply_sensor_param(const std::string& path, const TieredSpec& tiered) {
            const Constraint c = constraint_for(path);
            double v = sample_constrained(tiered, tier, rng, c, record.clamped);
            if (path == "dead_count") {
                int k = std::min<int>(static_cast<int>(v),
                                      static_cast<int>(plan.sensors.size()));
                for (int i = 0; i < k; ++i) {
                    plan.sensors[i].status = SensorStatus::Dead;
                    record.affected.push_back(plan.sensors[i].id);
                }
                record.resolved.push_back({"sensors", path, static_cast<double>(k)});
            } else if (path == "compromised_jitter") {
                for (Sensor& s : plan.sensors) {
                    s.status = SensorStatus::Compromised;
                    FalsifyRule rule = s.falsify.value_or(FalsifyRule{});
                    rule.jitter = v;
                    s.falsify = rule;
                    record.affected.push_back(s.id);
                }
                record.resolved.push_back({"sensors", path, v});
            } else {
                throw ConfigError("parameter '" + path + "' does not exist on sensors");
            }
        }

        void operator()(const SetFlag& m) {
            const double flag_value = m.value ? 1.0 : 0.0;
            if (sel.cls == "sam") {
                for (SamSite* s : selected_sams(plan, sel, spec.id)) {
                    if (m.path == "mobile") {
                        s->mobile = m.value;
                        if (m.value) make_mobile(*s);
                    } else if (m.path == "decoy") {
                        s->decoy = m.value;
                    } else if (m.path == "pursuit") {
                        s->pursue_jet = m.value;
                        if (m.value) make_mobile(*s);
                    } else {
                        throw ConfigError("flag '" + m.path + "' does not exist on a SAM site");
                    }
                    note_fn(s->id, m.path, flag_value);
                }
            } else if (sel.cls == "storage") {
                if (m.path != "defender")
                    throw ConfigError("flag '" + m.path + "' does not exist on storage");
                if (m.value && !plan.storage.defender) plan.storage.defender = Defender{};
                if (!m.value) plan.storage.defender.reset();
                note_fn(plan.storage.id, m.path, flag_value);
            } else if (sel.cls == "sensor") {
                auto apply_one = [&](Sensor& s) {
                    if (m.path == "dead") {
                        s.status = m.value ? SensorStatus::Dead : SensorStatus::Nominal;
                    } else if (m.path == "compromised") {
                        s.status = m.value ? SensorStatus::Compromised : SensorStatus::Nominal;
                        if (m.value && !s.falsify) s.falsify = FalsifyRule{{}, 5.0, ""};
                    } else {
                        throw ConfigError("flag '" + m.path + "' does not exist on a sensor");
                    }
                    note_fn(s.id, m.path, flag_value);
                };
                if (sel.all) {
                    for (Sensor& s : plan.sensors) apply_one(s);
                } else {
                    int idx = sel.index.value_or(0);
                    if (idx < 0 || static_cast<size_t>(idx) >= plan.sensors.size())
                        throw ConfigError("novelty '" + spec.id + "': sensor[" +
                                          std::to_string(idx) + "] does not exist");
                    apply_one(plan.sensors[idx]);
                }
            } else {
                throw ConfigError("novelty '" + spec.id + "': set_flag cannot target '" +
                                  spec.target + "'");
            }
        }

        void operator()(const AddEntity& m) {
            auto sample_into = [&](auto& entity, auto setter) {
                for (const auto& [path, tiered] : m.tiered) {
                    const Constraint c = constraint_for(path);
                    double v = sample_constrained(tiered, tier, rng, c, record.clamped);
                    setter(entity, path, v);
                    record.resolved.push_back({"", path, v});
                }
            };
            if (const NoFireZone* z = std::get_if<NoFireZone>(&m.entity)) {
                NoFireZone zone = *z;
                sample_into(zone, set_zone_param);
                plan.zones.push_back(zone);
                std::string id = "zone[" + std::to_string(plan.zones.size() - 1) + "]";
                record.affected.push_back(id);
                for (auto& r : record.resolved)
                    if (r.target_id.empty()) r.target_id = id;
            } else if (const TerrainPatch* t = std::get_if<TerrainPatch>(&m.entity)) {
                TerrainPatch patch = *t;
                sample_into(patch, set_terrain_param);
                plan.terrain.push_back(patch);
                std::string id = "terrain[" + std::to_string(plan.terrain.size() - 1) + "]";
                record.affected.push_back(id);
                for (auto& r : record.resolved)
                    if (r.target_id.empty()) r.target_id = id;
            } else {
                SamSite site = std::get<SamSite>(m.entity);
                sample_into(site, set_sam_param);
                site.id = "sam-" + std::to_string(plan.sams.size());
                plan.sams.push_back(site);
                record.affected.push_back(site.id);
                for (auto& r : record.resolved)
                    if (r.target_id.empty()) r.target_id = site.id;
            }
        }

        void operator()(const SetGoal& m) {
            for (SamSite* s : selected_sams(plan, sel, spec.id)) {
                s->goal = m.goal;
                if (m.goal == SamGoal::DestroyJet) make_mobile(*s);
                note_fn(s->id, "goal", m.goal == SamGoal::DestroyJet ? 1.0 : 0.0);
            }
        }

        void operator()(const ScheduleEventMut& m) {
            Constraint c = constraint_for("tick");
            c.hi = static_cast<double>(plan.rules.time_limit);
            double v = sample_constrained(m.tick, tier, rng, c, record.clamped);
            ScheduledEvent e;
            e.tick = static_cast<int>(v);
            e.kind = EventKind::SpawnRedFighter;
            e.fighter = m.fighter;
            plan.events.push_back(e);
            std::string id = "event[" + std::to_string(plan.events.size() - 1) + "]";
            record.affected.push_back(id);
            record.resolved.push_back({id, "tick", v});
        }
    };

    std::visit(Applier{plan, spec, sel, tier, rng, record, note}, spec.mutation);
    return record;
}

// ---------------------------------------------------------------------------
// Classification consistency
// ---------------------------------------------------------------------------

namespace {

int set_param_level(const TargetSelector& sel, const std::string& path) {
    if (sel.cls == "rules") return 6;
    if (sel.cls == "sensor") {
        if (path == "dead_count") return 4;
        if (path == "compromised_jitter") return 5;
        return 4;
    }
    if (path == "pos.x" || path == "pos.y") return 4;
    if (path == "survivability_p") return 5;
    return 2;  // capability attribute of a volitional entity
}

} // namespace

int classify(const NoveltySpec& spec) {
    if (spec.level < 1 || spec.level > kNoveltyLevelCount) {
        throw ConfigError("novelty '" + spec.id + "': level must be in 1..8");
    }
    const TargetSelector sel = parse_target(spec.target);

    int expected = -1;
    std::string rule;
    if (std::holds_alternative<SetGoal>(spec.mutation)) {
        expected = 7;
        rule = "goal mutations are Goals (level 7)";
    } else if (std::holds_alternative<ScheduleEventMut>(spec.mutation)) {
        expected = 8;
        rule = "scheduled non-volitional events are Events (level 8)";
    } else if (const AddEntity* add = std::get_if<AddEntity>(&spec.mutation)) {
        if (const NoFireZone* z = std::get_if<NoFireZone>(&add->entity)) {
            if (z->applies_to == ZoneScope::AllEntities) {
                expected = 6;
                rule = "an all-entity no-fire zone is a global constraint, Rules (level 6)";
            } else {
                expected = 1;
                rule = "adding a non-volitional entity is Objects (level 1)";
            }
        } else if (std::holds_alternative<TerrainPatch>(add->entity)) {
            expected = 1;
            rule = "adding a non-volitional entity is Objects (level 1)";
        } else {
            expected = 2;
            rule = "adding a volitional entity is Agents (level 2)";
        }
    } else if (const SetFlag* flag = std::get_if<SetFlag>(&spec.mutation)) {
        if (flag->path == "mobile" || flag->path == "decoy") {
            expected = 3;
            rule = "changing how an agent can act is Actions (level 3)";
        } else if (flag->path == "pursuit") {
            expected = 5;
            rule = "changing behavior between entities is Interactions (level 5)";
        } else if (flag->path == "defender") {
            expected = 2;
            rule = "arming an entity is an Agents capability change (level 2)";
        } else if (flag->path == "dead") {
            expected = 4;
            rule = "severing a sensor link is Relations (level 4)";
        } else if (flag->path == "compromised") {
            expected = 5;
            rule = "falsified sensing between entities is Interactions (level 5)";
        } else {
            throw ConfigError("novelty '" + spec.id + "': unknown flag '" + flag->path + "'");
        }
    } else {
        const SetParam& sp = std::get<SetParam>(spec.mutation);
        if (sp.params.empty())
            throw ConfigError("novelty '" + spec.id + "': set_param needs at least one path");
        for (const auto& [path, tiered] : sp.params) {
            (void)tiered;
            int lvl = set_param_level(sel, path);
            if (expected == -1) {
                expected = lvl;
            } else if (expected != lvl) {
                throw ConfigError("novelty '" + spec.id +
                                  "': parameter paths map to different levels");
            }
        }
        switch (expected) {
            case 2: rule = "capability attributes of volitional entities are Agents (level 2)"; break;
            case 4: rule = "static placement/link changes are Relations (level 4)"; break;
            case 5: rule = "survivability/falsification dynamics are Interactions (level 5)"; break;
            case 6: rule = "global rule parameters are Rules (level 6)"; break;
        }
    }

    if (expected != spec.level) {
        throw ConfigError("novelty '" + spec.id + "': declared level " +
                          std::to_string(spec.level) + " (" + novelty_level_name(spec.level) +
                          ") is inconsistent: " + rule);
    }
    return spec.level;
}

// ---------------------------------------------------------------------------
// Built-in catalog
// ---------------------------------------------------------------------------

namespace {

TieredSpec tiers(DistributionSpec e, DistributionSpec m, DistributionSpec h) {
    return TieredSpec{std::move(e), std::move(m), std::move(h)};
}

std::vector<NoveltySpec> build_catalog() {
    std::vector<NoveltySpec> cat;
    auto add = [&](NoveltySpec spec) { cat.push_back(std::move(spec)); };

    // --- level 1: Objects ---
    {
        NoFireZone town{{150.0, 18.0}, 6.0, ZoneScope::BlueOnly};
        add({"no_fire_town", 1, "world",
             AddEntity{town,
                       {{"radius", tiers(ConstantDist{4}, ConstantDist{6}, ConstantDist{8})}}},
             1, "protected civilian area appears near the target; blue weapon release "
                "into it is forbidden"});
    }
    {
        TerrainPatch fog{{100.0, 0.0}, 25.0, TerrainKind::ViewLimiting, 0.5, 1.0};
        add({"view_terrain", 1, "world",
             AddEntity{fog,
                       {{"radius", tiers(ConstantDist{15}, ConstantDist{25}, ConstantDist{35})},
                        {"sensor_attenuation",
                         tiers(ConstantDist{0.3}, ConstantDist{0.5}, ConstantDist{0.8})}}},
             1, "view-limiting terrain intermittently hides entities inside it from sensors"});
    }
    {
        TerrainPatch rough{{75.0, 0.0}, 30.0, TerrainKind::Arduous, 0.0, 0.6};
        add({"arduous_terrain", 1, "world",
             AddEntity{rough,
                       {{"radius", tiers(ConstantDist{20}, ConstantDist{30}, ConstantDist{40})},
                        {"speed_factor",
                         tiers(ConstantDist{0.8}, ConstantDist{0.6}, ConstantDist{0.4})}}},
             1, "arduous terrain slows movement through it"});
    }

    // --- level 2: Agents ---
    add({"sam_range_up", 2, "all-sams",
         SetParam{{{"missile_range",
                    tiers(NormalDist{50.0, 2.0}, NormalDist{55.0, 2.5}, NormalDist{60.0, 3.0})}}},
         1, "SAM missile range grows beyond the briefed 50 km"});
    add({"sam_speed_up", 2, "all-sams",
         SetParam{{{"missile_speed",
                    tiers(NormalDist{1.2, 0.05}, NormalDist{1.5, 0.1}, NormalDist{2.0, 0.15})}}},
         1, "SAM warheads fly faster than briefed"});
    add({"sam_warheads_up", 2, "all-sams",
         SetParam{{{"warheads", tiers(DiscreteUniformDist{{5, 6}}, DiscreteUniformDist{{8, 10}},
                                      DiscreteUniformDist{{12, 16}})}}},
         1, "SAM magazines carry more warheads than briefed"});
    add({"storage_defender", 2, "storage", SetFlag{"defender", true}, 1,
         "the ammo storage site gains a point defender that fires on the jet"});
    {
        SamSite extra;  // default capabilities; placement sampled per tier
        extra.pos = {125.0, 30.0};
        add({"extra_sam", 2, "world",
             AddEntity{extra,
                       {{"pos.x", tiers(NormalDist{125.0, 3.0}, NormalDist{125.0, 3.0},
                                        NormalDist{125.0, 3.0})},
                        {"pos.y",
                         tiers(ConstantDist{60}, ConstantDist{30}, ConstantDist{0})}}},
             1, "an unbriefed additional SAM site guards the approach"});
    }

    // --- level 3: Actions ---
    add({"sam_mobile", 3, "sam[0]", SetFlag{"mobile", true}, 1,
         "a SAM becomes mobile and repositions toward the asset it defends"});
    add({"sam_decoy", 3, "sam[1]", SetFlag{"decoy", true}, 1,
         "a SAM is a decoy and never launches"});

    // --- level 4: Relations ---
    add({"sam_relocate", 4, "sam[0]",
         SetParam{{{"pos.x",
                    tiers(NormalDist{140.0, 3.0}, NormalDist{142.0, 3.0}, NormalDist{145.0, 2.0})},
                   {"pos.y",
                    tiers(NormalDist{18.0, 2.0}, NormalDist{16.0, 2.0}, NormalDist{14.0, 2.0})}}},
         1, "a SAM relocates next to the protected town site by the target"});
    add({"sensor_dead", 4, "sensors",
         SetParam{{{"dead_count",
                    tiers(PoissonDist{1.0}, PoissonDist{2.0}, PoissonDist{4.0})}}},
         1, "a random number of sensors fail and transmit nothing"});

    // --- level 5: Interactions ---
    add({"survivability_up", 5, "storage",
         SetParam{{{"survivability_p",
                    tiers(ConstantDist{0.3}, ConstantDist{0.5}, ConstantDist{0.7})}}},
         1, "the storage site survives hits more often (hit outcome stays a per-strike "
            "chance draw)"});
    add({"sam_pursuit", 5, "sam[0]", SetFlag{"pursuit", true}, 1,
         "a SAM becomes mobile and actively closes on the jet"});
    add({"sensor_false", 5, "sensors",
         SetParam{{{"compromised_jitter",
                    tiers(ConstantDist{2}, ConstantDist{5}, ConstantDist{10})}}},
         1, "all sensors are compromised and report jittered positions"});

    // --- level 6: Rules ---
    {
        NoFireZone global{{150.0, 0.0}, 15.0, ZoneScope::AllEntities};
        add({"global_no_fire", 6, "world",
             AddEntity{global,
                       {{"radius", tiers(ConstantDist{10}, ConstantDist{15}, ConstantDist{20})}}},
             1, "a no-fire zone binding every entity covers the target area"});
    }
    add({"engagement_window", 6, "rules",
         SetParam{{{"engagement_window.start",
                    tiers(ConstantDist{0}, ConstantDist{0}, ConstantDist{0})},
                   {"engagement_window.end",
                    tiers(ConstantDist{1500}, ConstantDist{800}, ConstantDist{500})}}},
         1, "weapon release is only permitted inside a time window"});
    add({"global_fire_delay", 6, "rules",
         SetParam{{{"global_fire_delay",
                    tiers(ConstantDist{5}, ConstantDist{15}, ConstantDist{30})}}},
         1, "every fire order executes with a delay"});

    // --- level 7: Goals ---
    add({"sam_goal_destroy_jet", 7, "sam[0]", SetGoal{SamGoal::DestroyJet}, 1,
         "a SAM abandons site defense and hunts the jet"});

    // --- level 8: Events ---
    {
        SamSite fighter;
        fighter.pos = {180.0, 0.0};
        fighter.missile_range = 30.0;
        fighter.missile_speed = 1.2;
        fighter.warheads = 2;
        fighter.reload_ticks = 40;
        fighter.kill_prob = 0.7;
        fighter.mobile = true;
        fighter.move_speed = 0.45;
        fighter.goal = SamGoal::DestroyJet;
        add({"red_fighter_event", 8, "world",
             ScheduleEventMut{tiers(ConstantDist{600}, ConstantDist{400}, ConstantDist{250}),
                              fighter},
             1, "an enemy fighter appears mid-battle and hunts the jet"});
    }

    for (const NoveltySpec& spec : cat) classify(spec);  // catalog self-check
    return cat;
}

} // namespace

const std::vector<NoveltySpec>& catalog() {
    static const std::vector<NoveltySpec> cat = build_catalog();
    return cat;
}

std::optional<NoveltySpec> catalog_lookup(const std::string& id) {
    for (const NoveltySpec& spec : catalog()) {
        if (spec.id == id) return spec;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// JSON encoding
// ---------------------------------------------------------------------------

namespace {

json params_to_json(const std::vector<std::pair<std::string, TieredSpec>>& params) {
    json out = json::object();
    for (const auto& [path, tiered] : params) out[path] = tiered_to_json(tiered);
    return out;
}

std::vector<std::pair<std::string, TieredSpec>> params_from_json(const json& j,
                                                                 const std::string& where) {
    if (!j.is_object() || j.empty())
        throw ConfigError(where + ": expected a non-empty object of {path: tiered spec}");
    std::vector<std::pair<std::string, TieredSpec>> out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        out.emplace_back(it.key(), tiered_from_json(it.value()));
    }
    return out;
}

} // namespace

json novelty_spec_to_json(const NoveltySpec& spec) {
    json mutation;
    struct Writer {
        json& mutation;
        void operator()(const SetParam& m) const {
            mutation = {{"kind", "set_param"}, {"params", params_to_json(m.params)}};
        }
        void operator()(const SetFlag& m) const {
            mutation = {{"kind", "set_flag"}, {"path", m.path}, {"value", m.value}};
        }
        void operator()(const AddEntity& m) const {
            json entity;
            std::string kind;
            if (const NoFireZone* z = std::get_if<NoFireZone>(&m.entity)) {
                kind = "no_fire_zone";
                entity = zone_entity_to_json(*z);
            } else if (const TerrainPatch* t = std::get_if<TerrainPatch>(&m.entity)) {
                kind = "terrain_patch";
                entity = terrain_entity_to_json(*t);
            } else {
                kind = "sam";
                entity = sam_entity_to_json(std::get<SamSite>(m.entity));
            }
            mutation = {{"kind", "add_entity"},
                        {"entity_kind", kind},
                        {"template", entity},
                        {"tiered", params_to_json(m.tiered)}};
        }
        void operator()(const SetGoal& m) const {
            mutation = {{"kind", "set_goal"},
                        {"goal", m.goal == SamGoal::DestroyJet ? "destroy_jet" : "defend_target"}};
        }
        void operator()(const ScheduleEventMut& m) const {
            mutation = {{"kind", "schedule_event"},
                        {"tick", tiered_to_json(m.tick)},
                        {"fighter", sam_entity_to_json(m.fighter)}};
        }
    };
    std::visit(Writer{mutation}, spec.mutation);
    return {{"id", spec.id},
            {"level", spec.level},
            {"target", spec.target},
            {"mutation", mutation},
            {"onset_battle", spec.onset_battle},
            {"description", spec.description}};
}

NoveltySpec novelty_spec_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("novelty spec: expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k != "id" && k != "level" && k != "target" && k != "mutation" &&
            k != "onset_battle" && k != "description") {
            throw ConfigError("novelty spec: unknown field '" + k + "'");
        }
    }
    for (const char* k : {"id", "level", "target", "mutation"}) {
        if (!j.contains(k))
            throw ConfigError(std::string("novelty spec: missing field '") + k + "'");
    }
    NoveltySpec spec;
    spec.id = j["id"].get<std::string>();
    spec.level = j["level"].get<int>();
    spec.target = j["target"].get<std::string>();
    spec.onset_battle = j.value("onset_battle", 1);
    spec.description = j.value("description", "");

    const json& m = j["mutation"];
    if (!m.is_object() || !m.contains("kind"))
        throw ConfigError("novelty spec '" + spec.id + "': mutation needs a 'kind'");
    const std::string kind = m["kind"].get<std::string>();
    const std::string where = "novelty spec '" + spec.id + "'";
    if (kind == "set_param") {
        spec.mutation = SetParam{params_from_json(m.at("params"), where + ".params")};
    } else if (kind == "set_flag") {
        spec.mutation = SetFlag{m.at("path").get<std::string>(), m.value("value", true)};
    } else if (kind == "add_entity") {
        const std::string ek = m.at("entity_kind").get<std::string>();
        AddEntity add;
        if (ek == "no_fire_zone") {
            add.entity = zone_entity_from_json(m.value("template", json::object()),
                                               where + ".template");
        } else if (ek == "terrain_patch") {
            add.entity = terrain_entity_from_json(m.value("template", json::object()),
                                                  where + ".template");
        } else if (ek == "sam") {
            add.entity = sam_entity_from_json(m.value("template", json::object()),
                                              where + ".template");
        } else {
            throw ConfigError(where + ": unknown entity_kind '" + ek + "'");
        }
        if (m.contains("tiered") && !m["tiered"].empty())
            add.tiered = params_from_json(m["tiered"], where + ".tiered");
        spec.mutation = std::move(add);
    } else if (kind == "set_goal") {
        const std::string goal = m.at("goal").get<std::string>();
        if (goal == "destroy_jet") spec.mutation = SetGoal{SamGoal::DestroyJet};
        else if (goal == "defend_target") spec.mutation = SetGoal{SamGoal::DefendTarget};
        else throw ConfigError(where + ": unknown goal '" + goal + "'");
    } else if (kind == "schedule_event") {
        ScheduleEventMut ev;
        ev.tick = tiered_from_json(m.at("tick"));
        ev.fighter = sam_entity_from_json(m.value("fighter", json::object()),
                                          where + ".fighter");
        spec.mutation = std::move(ev);
    } else {
        throw ConfigError(where + ": unknown mutation kind '" + kind + "'");
    }
    return spec;
}

json applied_novelty_to_json(const AppliedNovelty& a) {
    json resolved = json::array();
    for (const ResolvedValue& r : a.resolved) {
        resolved.push_back({{"target", r.target_id}, {"path", r.path}, {"value", r.value}});
    }
    return {{"spec_id", a.spec_id},
            {"level", a.level},
            {"tier", tier_name(a.tier)},
            {"battle_index", a.battle_index},
            {"resolved", resolved},
            {"affected", a.affected},
            {"clamped", a.clamped}};
}

AppliedNovelty applied_novelty_from_json(const json& j) {
    AppliedNovelty a;
    a.spec_id = j.at("spec_id").get<std::string>();
    a.level = j.at("level").get<int>();
    a.tier = tier_from_name(j.at("tier").get<std::string>());
    a.battle_index = j.at("battle_index").get<int>();
    for (const json& r : j.at("resolved")) {
        a.resolved.push_back({r.at("target").get<std::string>(), r.at("path").get<std::string>(),
                              r.at("value").get<double>()});
    }
    a.affected = j.at("affected").get<std::vector<std::string>>();
    a.clamped = j.at("clamped").get<bool>();
    return a;
}

} // namespace owh
