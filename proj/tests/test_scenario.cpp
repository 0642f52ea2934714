#include <doctest.h>

#include <cmath>

#include "owh/errors.hpp"
#include "owh/scenario.hpp"
#include "test_support.hpp"

using namespace owh;
using owh::test::make_known;
using owh::test::ScriptedAgent;

namespace {

WorldState default_world(uint64_t seed = 1) {
    ScenarioConfig cfg = default_scenario();
    return init_world(cfg, make_known(cfg), RngState(seed));
}

} // namespace

TEST_CASE("default scenario layout") {
    WorldState w = default_world();
    CHECK(w.tick == 0);
    CHECK(w.status == MissionStatus::Ongoing);
    CHECK(w.jet.pos == Vec2{0.0, 0.0});
    CHECK(w.jet.base_pos == Vec2{0.0, 0.0});
    CHECK(w.jet.speed_max == 0.3);
    CHECK(w.jet.weapon_range == 20.0);
    CHECK(w.jet.weapons_remaining == 2);
    CHECK(w.jet.survivability_p == 0.0);
    CHECK(w.storage.pos == Vec2{150.0, 0.0});
    CHECK(w.storage.survivability_p == 0.0);
    REQUIRE(w.sams.size() == 2);
    CHECK(w.sams[0].pos == Vec2{100.0, 30.0});
    CHECK(w.sams[1].pos == Vec2{100.0, -30.0});
    for (const SamSite& s : w.sams) {
        CHECK(s.missile_range == 50.0);
        CHECK(s.missile_speed == 1.0);
        CHECK(s.warheads == 4);
        CHECK(s.reload_ticks == 20);
        CHECK(s.kill_prob == 0.7);
        CHECK(s.fire_delay == 0.0);
    }
    CHECK(w.rules.time_limit == 2000);
    CHECK(w.sensors.size() == 3);
}

TEST_CASE("co-locating a SAM with the jet start is permitted") {
    ScenarioConfig cfg = default_scenario();
    cfg.sams[0].pos = cfg.jet.pos;
    CHECK(validate_scenario(cfg).empty());
    CHECK_NOTHROW(init_world(cfg, make_known(cfg), RngState(1)));
}

TEST_CASE("negative missile range is rejected with the offending field named") {
    ScenarioConfig cfg = default_scenario();
    cfg.sams[1].missile_range = -5.0;
    auto errors = validate_scenario(cfg);
    REQUIRE(errors.size() == 1);
    CHECK(errors[0].find("sams[1].missile_range") != std::string::npos);
    CHECK_THROWS_AS(init_world(cfg, make_known(cfg), RngState(1)), ConfigError);
}

TEST_CASE("observe: all sensors dead yields an empty picture") {
    ScenarioConfig cfg = default_scenario();
    for (Sensor& s : cfg.sensors) s.status = SensorStatus::Dead;
    WorldState w = init_world(cfg, make_known(cfg), RngState(1));
    CHECK(observe(w).tracks.empty());
}

TEST_CASE("observe: nominal sensor reports both SAMs and the storage") {
    WorldState w = default_world();
    Observation obs = observe(w);
    REQUIRE(obs.tracks.size() == 3);
    bool saw_sam0 = false, saw_sam1 = false, saw_storage = false;
    for (const TrackReport& t : obs.tracks) {
        if (t.id == "sam-0") saw_sam0 = true;
        if (t.id == "sam-1") saw_sam1 = true;
        if (t.id == "storage") {
            saw_storage = true;
            CHECK_FALSE(t.estimated_missile_range.has_value());
        }
    }
    CHECK(saw_sam0);
    CHECK(saw_sam1);
    CHECK(saw_storage);
}

TEST_CASE("observe: compromised sensor applies its offset rule") {
    ScenarioConfig cfg = default_scenario();
    cfg.sensors = {Sensor{"sensor-0", SensorStatus::Compromised,
                          FalsifyRule{{10.0, 0.0}, 0.0, ""}}};
    WorldState w = init_world(cfg, make_known(cfg), RngState(1));
    Observation obs = observe(w);
    bool found = false;
    for (const TrackReport& t : obs.tracks) {
        if (t.id == "sam-0") {
            found = true;
            CHECK(t.pos.x == doctest::Approx(110.0));
            CHECK(t.pos.y == doctest::Approx(30.0));
        }
    }
    CHECK(found);
}

TEST_CASE("observe: a nominal sensor's true report wins over a compromised one") {
    ScenarioConfig cfg = default_scenario();
    cfg.sensors = {Sensor{"sensor-0", SensorStatus::Nominal, std::nullopt},
                   Sensor{"sensor-1", SensorStatus::Compromised,
                          FalsifyRule{{10.0, 0.0}, 0.0, ""}}};
    WorldState w = init_world(cfg, make_known(cfg), RngState(1));
    for (const TrackReport& t : observe(w).tracks) {
        if (t.id == "sam-0") CHECK(t.pos.x == doctest::Approx(100.0));
    }
}

TEST_CASE("observe: estimated missile range reports the briefed value, never ground truth") {
    ScenarioConfig briefed = default_scenario();
    ScenarioConfig truth = briefed;
    truth.sams[0].missile_range = 60.0;  // post-novelty reality
    WorldState w = init_world(truth, make_known(briefed), RngState(1));
    for (const TrackReport& t : observe(w).tracks) {
        if (t.id == "sam-0") {
            REQUIRE(t.estimated_missile_range.has_value());
            CHECK(*t.estimated_missile_range == 50.0);
        }
    }
}

TEST_CASE("step: SAM fires when the jet is inside true range") {
    ScenarioConfig cfg = default_scenario();
    cfg.sams = {cfg.sams[0]};
    cfg.sams[0].pos = {0.0, 0.0};
    cfg.sams[0].warheads = 1;
    cfg.jet.pos = {49.0, 0.0};
    cfg.jet.base_pos = {49.0, 0.0};
    WorldState w = init_world(cfg, make_known(cfg), RngState(1));
    step(w, Action{});
    REQUIRE(w.missiles.size() == 1);
    CHECK(w.missiles[0].target == "jet");
    CHECK(w.sams[0].warheads == 0);
    REQUIRE(w.launch_log.size() == 1);
    CHECK(w.launch_log[0].distance == doctest::Approx(49.0));
}

TEST_CASE("step: both default SAMs engage a jet at (100,0)") {
    // distance to each SAM is 30 km <= 50 km, so each launches.
    ScenarioConfig cfg = default_scenario();
    cfg.jet.pos = {100.0, 0.0};
    cfg.jet.base_pos = {100.0, 0.0};
    WorldState w = init_world(cfg, make_known(cfg), RngState(1));
    step(w, Action{});
    CHECK(w.missiles.size() == 2);
}

TEST_CASE("step: a jet beyond every range draws no fire") {
    WorldState w = default_world();
    // nearest SAM is sqrt(100^2 + 30^2) ~ 104.4 km away
    step(w, Action{});
    CHECK(w.missiles.empty());
    CHECK(w.launch_log.empty());
}

TEST_CASE("step: decoy SAMs never launch") {
    ScenarioConfig cfg = default_scenario();
    cfg.sams = {cfg.sams[0]};
    cfg.sams[0].pos = {1.0, 0.0};
    cfg.sams[0].decoy = true;
    WorldState w = init_world(cfg, make_known(cfg), RngState(1));
    for (int i = 0; i < 100; ++i) step(w, Action{});
    CHECK(w.missiles.empty());
    CHECK(w.launch_log.empty());
    CHECK(w.sams[0].warheads == 4);
}

TEST_CASE("step: firing at vulnerable storage destroys it and wins") {
    ScenarioConfig cfg = default_scenario();
    cfg.jet.pos = {140.0, 0.0};  // 10 km from storage, outside both SAM ranges
    cfg.jet.base_pos = {0.0, 0.0};
    WorldState w = init_world(cfg, make_known(cfg), RngState(1));
    Action a;
    a.fire_at = "storage";
    step(w, a);
    CHECK(w.storage.destroyed);
    CHECK(w.jet.weapons_remaining == 1);
    CHECK(w.status == MissionStatus::Win);
}

TEST_CASE("step: firing at an untracked target is dropped") {
    ScenarioConfig cfg = default_scenario();
    cfg.jet.pos = {140.0, 0.0};
    for (Sensor& s : cfg.sensors) s.status = SensorStatus::Dead;
    WorldState w = init_world(cfg, make_known(cfg), RngState(1));
    Action a;
    a.fire_at = "storage";
    step(w, a);
    CHECK_FALSE(w.storage.destroyed);
    CHECK(w.jet.weapons_remaining == 2);
}

TEST_CASE("step: a no-fire zone shields targets inside it from blue fire") {
    ScenarioConfig cfg = default_scenario();
    cfg.jet.pos = {140.0, 0.0};
    cfg.zones.push_back({{150.0, 0.0}, 12.0, ZoneScope::BlueOnly});
    WorldState w = init_world(cfg, make_known(cfg), RngState(1));
    Action a;
    a.fire_at = "storage";
    step(w, a);
    CHECK_FALSE(w.storage.destroyed);
    CHECK(w.jet.weapons_remaining == 2);
}

TEST_CASE("step: an all-entities zone also blocks red fire at the jet inside it") {
    ScenarioConfig cfg = default_scenario();
    cfg.sams = {cfg.sams[0]};
    cfg.sams[0].pos = {10.0, 0.0};
    cfg.jet.pos = {5.0, 0.0};
    cfg.jet.base_pos = {5.0, 0.0};
    cfg.zones.push_back({{5.0, 0.0}, 6.0, ZoneScope::AllEntities});
    WorldState w = init_world(cfg, make_known(cfg), RngState(1));
    step(w, Action{});
    CHECK(w.missiles.empty());
}

TEST_CASE("step: closed engagement window silences every weapon") {
    ScenarioConfig cfg = default_scenario();
    cfg.rules.engagement_window = {{100, 200}};
    cfg.sams = {cfg.sams[0]};
    cfg.sams[0].pos = {10.0, 0.0};
    cfg.jet.pos = {5.0, 0.0};
    cfg.jet.base_pos = {5.0, 0.0};
    WorldState w = init_world(cfg, make_known(cfg), RngState(1));
    step(w, Action{});
    CHECK(w.missiles.empty());
    // and the jet's own release is dropped too
    ScenarioConfig cfg2 = default_scenario();
    cfg2.rules.engagement_window = {{100, 200}};
    cfg2.jet.pos = {140.0, 0.0};
    WorldState w2 = init_world(cfg2, make_known(cfg2), RngState(1));
    Action fire;
    fire.fire_at = "storage";
    step(w2, fire);
    CHECK_FALSE(w2.storage.destroyed);
    CHECK(w2.jet.weapons_remaining == 2);
}

TEST_CASE("step: global fire delay postpones strike resolution") {
    ScenarioConfig cfg = default_scenario();
    cfg.rules.global_fire_delay = 5;
    cfg.jet.pos = {140.0, 0.0};
    WorldState w = init_world(cfg, make_known(cfg), RngState(1));
    Action a;
    a.fire_at = "storage";
    Action hold;
    hold.waypoint = Vec2{140.0, 0.0};
    step(w, a);
    CHECK_FALSE(w.storage.destroyed);
    CHECK(w.jet.weapons_remaining == 2);  // decremented at execution
    for (int i = 0; i < 4; ++i) {
        step(w, hold);
        CHECK_FALSE(w.storage.destroyed);
    }
    step(w, hold);  // tick 5 after the order
    CHECK(w.storage.destroyed);
    CHECK(w.jet.weapons_remaining == 1);
}

TEST_CASE("step: mobile SAM with destroy-jet goal closes on the jet") {
    ScenarioConfig cfg = default_scenario();
    cfg.sams = {cfg.sams[0]};
    cfg.sams[0].pos = {100.0, 30.0};
    cfg.sams[0].mobile = true;
    cfg.sams[0].move_speed = 0.1;
    cfg.sams[0].goal = SamGoal::DestroyJet;
    WorldState w = init_world(cfg, make_known(cfg), RngState(1));
    double d0 = distance(w.sams[0].pos, w.jet.pos);
    for (int i = 0; i < 50; ++i) step(w, Action{});
    double d1 = distance(w.sams[0].pos, w.jet.pos);
    CHECK(d1 < d0);
    CHECK(d1 == doctest::Approx(d0 - 5.0).epsilon(0.01));
}

TEST_CASE("step: missiles chase and intercept an approaching jet") {
    ScenarioConfig cfg = default_scenario();
    cfg.sams = {cfg.sams[0]};
    cfg.sams[0].pos = {0.0, 0.0};
    cfg.sams[0].kill_prob = 1.0;
    cfg.jet.pos = {40.0, 0.0};
    cfg.jet.base_pos = {40.0, 0.0};
    WorldState w = init_world(cfg, make_known(cfg), RngState(1));
    Action approach;
    approach.waypoint = Vec2{0.0, 0.0};
    int guard = 0;
    while (w.status == MissionStatus::Ongoing && ++guard < 500) step(w, approach);
    CHECK(w.status == MissionStatus::Fail);
    CHECK_FALSE(w.jet.alive);
}

TEST_CASE("step: a missile launched at the range boundary expires on a fleeing jet") {
    ScenarioConfig cfg = default_scenario();
    cfg.sams = {cfg.sams[0]};
    cfg.sams[0].pos = {0.0, 0.0};
    cfg.sams[0].kill_prob = 1.0;
    cfg.sams[0].warheads = 1;
    cfg.jet.pos = {49.5, 0.0};
    cfg.jet.base_pos = {49.5, 0.0};
    cfg.rules.time_limit = 400;
    WorldState w = init_world(cfg, make_known(cfg), RngState(1));
    Action flee;
    flee.waypoint = Vec2{500.0, 0.0};
    step(w, flee);
    REQUIRE(w.missiles.size() == 1);
    bool expired = false;
    for (int i = 0; i < 200 && w.status == MissionStatus::Ongoing; ++i) {
        step(w, flee);
        if (w.missiles.empty()) {
            expired = true;
            break;
        }
    }
    CHECK(expired);
    CHECK(w.jet.alive);
}

TEST_CASE("step: survivability composes with kill probability") {
    // survivability 1.0: the jet shrugs off every intercept
    ScenarioConfig cfg = default_scenario();
    cfg.sams = {cfg.sams[0]};
    cfg.sams[0].pos = {0.0, 0.0};
    cfg.sams[0].kill_prob = 1.0;
    cfg.jet.pos = {10.0, 0.0};
    cfg.jet.base_pos = {10.0, 0.0};
    cfg.jet.survivability_p = 1.0;
    cfg.rules.time_limit = 300;
    WorldState w = init_world(cfg, make_known(cfg), RngState(1));
    Action hold;
    hold.waypoint = Vec2{10.0, 0.0};
    while (w.status == MissionStatus::Ongoing) step(w, hold);
    CHECK(w.jet.alive);
    CHECK(w.status == MissionStatus::Fail);  // time limit, not casualties
    CHECK(w.tick >= 300);
}

TEST_CASE("step: arduous terrain slows the jet") {
    ScenarioConfig cfg = default_scenario();
    cfg.terrain.push_back({{0.0, 0.0}, 50.0, TerrainKind::Arduous, 0.0, 0.5});
    WorldState w = init_world(cfg, make_known(cfg), RngState(1));
    Action east;
    east.waypoint = Vec2{100.0, 0.0};
    step(w, east);
    CHECK(w.jet.pos.x == doctest::Approx(0.15));
}

TEST_CASE("step on a terminal state is rejected") {
    ScenarioConfig cfg = default_scenario();
    cfg.jet.pos = {140.0, 0.0};
    WorldState w = init_world(cfg, make_known(cfg), RngState(1));
    Action a;
    a.fire_at = "storage";
    step(w, a);
    REQUIRE(w.status == MissionStatus::Win);
    CHECK_THROWS_WITH_AS(step(w, Action{}), "battle already terminal", std::logic_error);
}

TEST_CASE("mission_status reads the state") {
    WorldState w = default_world();
    CHECK(mission_status(w) == MissionStatus::Ongoing);
}

TEST_CASE("scheduled event spawns a red fighter at its tick") {
    ScenarioConfig cfg = default_scenario();
    ScheduledEvent ev;
    ev.tick = 3;
    ev.fighter.pos = {180.0, 0.0};
    ev.fighter.missile_range = 30.0;
    cfg.events.push_back(ev);
    WorldState w = init_world(cfg, make_known(cfg), RngState(1));
    step(w, Action{});
    step(w, Action{});
    step(w, Action{});
    CHECK(w.red_fighters.empty());
    step(w, Action{});  // tick 3 processed
    REQUIRE(w.red_fighters.size() == 1);
    CHECK(w.red_fighters[0].goal == SamGoal::DestroyJet);
    bool tracked = false;
    for (const TrackReport& t : observe(w).tracks) {
        if (t.cls == "red_fighter") tracked = true;
    }
    CHECK(tracked);
}

TEST_CASE("run_battle: scripted agent aborting at base ends with Abort and no casualties") {
    ScenarioConfig cfg = default_scenario();
    auto agent = owh::test::abort_agent();
    BattleOutcome out = run_battle(cfg, make_known(cfg), agent, RngState(1));
    CHECK(out.status == MissionStatus::Abort);
    CHECK(out.ticks == 1);
    CHECK(out.friendly_casualties == 0);
    CHECK(out.targets_prosecuted == 0);
}

TEST_CASE("run_battle: an agent that never moves fails by time limit") {
    ScenarioConfig cfg = default_scenario();
    cfg.rules.time_limit = 500;
    auto agent = owh::test::hold_agent();
    BattleOutcome out = run_battle(cfg, make_known(cfg), agent, RngState(1));
    CHECK(out.status == MissionStatus::Fail);
    CHECK(out.time_exceeded);
    CHECK(out.friendly_casualties == 0);
    CHECK(out.launch_log.empty());
    CHECK(out.ticks <= 501);
}

TEST_CASE("run_battle: identical inputs give a bit-identical trace") {
    ScenarioConfig cfg = default_scenario();
    cfg.rules.time_limit = 300;
    auto run_once = [&]() {
        std::vector<std::string> lines;
        TraceSink sink = [&](const std::string& line) { lines.push_back(line); };
        ScriptedAgent agent([](const Observation& obs) {
            Action a;
            a.waypoint = Vec2{obs.own_pos.x + 1.0, 10.0};
            return a;
        });
        run_battle(cfg, make_known(cfg), agent, RngState(99), &sink);
        return lines;
    };
    CHECK(run_once() == run_once());
}

TEST_CASE("conservation: weapons and warheads never increase and are accounted") {
    ScenarioConfig cfg = default_scenario();
    cfg.sams[0].pos = {30.0, 10.0};
    cfg.sams[1].pos = {45.0, -5.0};
    cfg.rules.time_limit = 600;
    ScriptedAgent agent([](const Observation& obs) {
        Action a;
        a.waypoint = Vec2{150.0, 0.0};
        for (const TrackReport& t : obs.tracks) {
            if (t.id == "storage" && distance(obs.own_pos, t.pos) < 19.0) {
                a.fire_at = "storage";
            }
        }
        return a;
    });
    WorldState w = init_world(cfg, make_known(cfg), RngState(5));
    agent.reset(w.known);
    int initial_warheads = cfg.sams[0].warheads + cfg.sams[1].warheads;
    while (w.status == MissionStatus::Ongoing) {
        Observation obs = observe(w);
        step(w, agent.act(obs));
        int remaining = w.sams[0].warheads + w.sams[1].warheads;
        CHECK(remaining + static_cast<int>(w.launch_log.size()) == initial_warheads);
        CHECK(w.jet.weapons_remaining + w.weapons_fired == 2);
        CHECK(static_cast<int>(w.pending_strikes.size()) <= w.jet.weapons_remaining);
    }
}

TEST_CASE("sensor soundness: all sensors dead keeps the picture empty all battle") {
    ScenarioConfig cfg = default_scenario();
    for (Sensor& s : cfg.sensors) s.status = SensorStatus::Dead;
    cfg.rules.time_limit = 200;
    WorldState w = init_world(cfg, make_known(cfg), RngState(1));
    while (w.status == MissionStatus::Ongoing) {
        CHECK(observe(w).tracks.empty());
        step(w, Action{});
    }
}

TEST_CASE("view-limiting terrain suppresses tracks intermittently") {
    ScenarioConfig cfg = default_scenario();
    cfg.sensors = {cfg.sensors[0]};
    cfg.terrain.push_back({{100.0, 30.0}, 5.0, TerrainKind::ViewLimiting, 0.6, 1.0});
    cfg.rules.time_limit = 400;
    WorldState w = init_world(cfg, make_known(cfg), RngState(3));
    int seen = 0, total = 0;
    while (w.status == MissionStatus::Ongoing && w.tick < 300) {
        Observation obs = observe(w);
        bool sam0 = false;
        for (const TrackReport& t : obs.tracks)
            if (t.id == "sam-0") sam0 = true;
        seen += sam0 ? 1 : 0;
        total += 1;
        step(w, Action{});
    }
    // attenuation 0.6: roughly 40% visibility, never 0% or 100%
    CHECK(seen > total / 10);
    CHECK(seen < (total * 6) / 10);
}

TEST_CASE("observe: a compromised sensor can omit a specific entity") {
    ScenarioConfig cfg = default_scenario();
    cfg.sensors = {Sensor{"sensor-0", SensorStatus::Compromised,
                          FalsifyRule{{0.0, 0.0}, 0.0, "sam-0"}}};
    WorldState w = init_world(cfg, make_known(cfg), RngState(1));
    bool sam0 = false, sam1 = false;
    for (const TrackReport& t : observe(w).tracks) {
        if (t.id == "sam-0") sam0 = true;
        if (t.id == "sam-1") sam1 = true;
    }
    CHECK_FALSE(sam0);
    CHECK(sam1);
}

TEST_CASE("an abort declared deep in a kill zone still ends in Fail when the jet dies") {
    ScenarioConfig cfg = default_scenario();
    cfg.sams = {cfg.sams[0]};
    cfg.sams[0].pos = {100.0, 0.0};
    cfg.sams[0].kill_prob = 1.0;
    cfg.jet.pos = {95.0, 0.0};  // deep inside the envelope, 95 km from base
    cfg.jet.base_pos = {0.0, 0.0};
    WorldState w = init_world(cfg, make_known(cfg), RngState(6));
    Action abort_now;
    abort_now.abort = true;
    step(w, abort_now);
    CHECK(w.abort_latched);
    while (w.status == MissionStatus::Ongoing) step(w, Action{});
    CHECK(w.status == MissionStatus::Fail);
    CHECK_FALSE(w.jet.alive);
}
