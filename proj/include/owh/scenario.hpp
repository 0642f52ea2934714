// Deterministic discrete-time tactical engagement: one blue strike jet
// against SAM launchers defending an ammo storage site.
//
// A ScenarioConfig is a fully resolved battle setup (no distributions left).
// init_world turns it into a WorldState; step advances one tick with a fixed
// sub-step order (scheduled events, blue movement, blue fire, red fire,
// missile flight, status). All stochastic rolls consume the battle's own
// RngState, so identical (config, agent, seed) replays bit-identically.

#ifndef OWH_SCENARIO_HPP
#define OWH_SCENARIO_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "owh/geometry.hpp"
#include "owh/rng.hpp"

#include <nlohmann/json_fwd.hpp>

namespace owh {

// ---------------------------------------------------------------------------
// Entities
// ---------------------------------------------------------------------------

struct BlueJet {
    std::string id = "jet";
    Vec2 pos;
    Vec2 base_pos;
    double speed_max = 0.3;      // km/tick
    double weapon_range = 20.0;  // km
    int weapons_remaining = 2;
    bool alive = true;
    double survivability_p = 0.0;  // P(intercept does NOT kill the jet)
};

enum class SamGoal { DefendTarget, DestroyJet };

struct SamSite {
    std::string id;
    Vec2 pos;
    double missile_range = 50.0;  // km; also the launched missile's flight budget
    double missile_speed = 1.0;   // km/tick
    int warheads = 4;
    int reload_ticks = 20;
    double kill_prob = 0.7;
    double survivability_p = 0.0;
    bool mobile = false;
    double move_speed = 0.0;  // km/tick, 0 unless mobile
    bool decoy = false;       // decoys never launch
    bool pursue_jet = false;  // mobile intent: close on the jet instead of repositioning
    double fire_delay = 0.0;  // ticks between fire decision and launch
    SamGoal goal = SamGoal::DefendTarget;
    bool alive = true;

    // runtime
    int last_decision_tick = -1000000;
};

struct Defender {
    double range = 25.0;
    double kill_prob = 0.5;
    int warheads = 4;
    int reload_ticks = 30;
    double missile_speed = 1.0;

    // runtime
    int last_decision_tick = -1000000;
};

struct AmmoStorage {
    std::string id = "storage";
    Vec2 pos;
    double survivability_p = 0.0;  // P(a hit does NOT destroy it)
    bool destroyed = false;
    std::optional<Defender> defender;
};

enum class ZoneScope { BlueOnly, AllEntities };

struct NoFireZone {
    Vec2 center;
    double radius = 5.0;
    ZoneScope applies_to = ZoneScope::BlueOnly;
};

enum class TerrainKind { ViewLimiting, Arduous };

struct TerrainPatch {
    Vec2 center;
    double radius = 10.0;
    TerrainKind kind = TerrainKind::ViewLimiting;
    double sensor_attenuation = 0.5;  // P(track suppressed per tick), ViewLimiting
    double speed_factor = 1.0;        // movement multiplier inside, Arduous
};

enum class SensorStatus { Nominal, Dead, Compromised };

// Mutation applied to a compromised sensor's reports.
struct FalsifyRule {
    Vec2 offset;             // constant position bias
    double jitter = 0.0;     // per-tick uniform position noise, half-width km
    std::string omit_id;     // entity id dropped from reports ("" = none)
};

struct Sensor {
    std::string id;
    SensorStatus status = SensorStatus::Nominal;
    std::optional<FalsifyRule> falsify;
};

struct Rules {
    std::optional<std::pair<int, int>> engagement_window;  // [start, end] ticks
    int global_fire_delay = 0;  // added to every entity's fire execution
    int time_limit = 2000;
};

enum class EventKind { SpawnRedFighter };

struct ScheduledEvent {
    int tick = 0;
    EventKind kind = EventKind::SpawnRedFighter;
    SamSite fighter;  // template for SpawnRedFighter
};

// Fully resolved configuration of one battle.
struct ScenarioConfig {
    BlueJet jet;
    std::vector<SamSite> sams;
    AmmoStorage storage;
    std::vector<NoFireZone> zones;
    std::vector<TerrainPatch> terrain;
    std::vector<Sensor> sensors;
    Rules rules;
    std::vector<ScheduledEvent> events;
};

// The reference two-SAM layout used when a plan gives no overrides.
ScenarioConfig default_scenario();

// Empty when valid; otherwise one message per offending field.
std::vector<std::string> validate_scenario(const ScenarioConfig& cfg);

nlohmann::json scenario_to_json(const ScenarioConfig& cfg);
ScenarioConfig scenario_from_json(const nlohmann::json& j);

// Partial override merge: sections present in `overrides` replace or patch
// the corresponding sections of `base` (objects merge per field, arrays
// replace wholesale).
ScenarioConfig apply_scenario_overrides(const ScenarioConfig& base,
                                        const nlohmann::json& overrides);

// Per-entity encodings (also used by novelty templates). Parsers accept
// partial objects and reject unknown fields.
nlohmann::json sam_entity_to_json(const SamSite& s);
SamSite sam_entity_from_json(const nlohmann::json& j, const std::string& where);
nlohmann::json zone_entity_to_json(const NoFireZone& z);
NoFireZone zone_entity_from_json(const nlohmann::json& j, const std::string& where);
nlohmann::json terrain_entity_to_json(const TerrainPatch& t);
TerrainPatch terrain_entity_from_json(const nlohmann::json& j, const std::string& where);

// ---------------------------------------------------------------------------
// Simulation state
// ---------------------------------------------------------------------------

enum class MissionStatus { Ongoing, Win, Abort, Fail };

std::string status_name(MissionStatus s);

struct Missile {
    std::string id;
    std::string owner;
    std::string target;
    Vec2 pos;
    double speed = 1.0;
    double kill_prob = 0.7;
    double fuel_km = 50.0;  // flight budget; the missile expires beyond it
    double traveled = 0.0;
};

struct PendingLaunch {
    int launch_tick = 0;
    std::string owner;
};

struct PendingStrike {
    int resolve_tick = 0;
    std::string target;
};

// Decision-time record of every SAM/defender launch commitment.
struct LaunchEvent {
    int tick = 0;
    std::string owner;
    double distance = 0.0;
    double true_range = 0.0;
};

// Baseline parameter book issued to the agent at battle start. Holds the
// briefed (pre-novelty) configuration; never updated from ground truth.
struct KnownWorld {
    ScenarioConfig assumed;
    double default_missile_range = 50.0;

    // Briefed range for a SAM id; default for ids not in the briefed roster.
    double assumed_range(const std::string& sam_id) const;
};

struct WorldState {
    int tick = 0;
    BlueJet jet;
    std::vector<SamSite> sams;
    AmmoStorage storage;
    std::vector<SamSite> red_fighters;
    std::vector<NoFireZone> zones;
    std::vector<TerrainPatch> terrain;
    std::vector<Sensor> sensors;
    std::vector<Missile> missiles;
    Rules rules;
    std::vector<ScheduledEvent> scheduled_events;
    std::vector<PendingLaunch> pending_launches;
    std::vector<PendingStrike> pending_strikes;
    RngState rng;
    MissionStatus status = MissionStatus::Ongoing;
    std::shared_ptr<const KnownWorld> known;
    bool abort_latched = false;

    // audit
    std::vector<LaunchEvent> launch_log;
    int weapons_fired = 0;
    int next_missile_seq = 0;
};

// ---------------------------------------------------------------------------
// Agent-facing surface
// ---------------------------------------------------------------------------

struct TrackReport {
    std::string id;
    std::string cls;  // "sam" | "storage" | "red_fighter"
    Vec2 pos;
    std::optional<double> estimated_missile_range;  // briefed value, never ground truth
};

struct MissileWarning {
    double bearing_rad = 0.0;  // direction from the jet to the inbound missile
};

struct Observation {
    int tick = 0;
    Vec2 own_pos;
    int own_weapons = 0;
    bool own_alive = true;
    std::vector<TrackReport> tracks;
    std::vector<MissileWarning> missile_warnings;
    std::shared_ptr<const KnownWorld> known_world;
};

struct NoveltyReport {
    bool detected = false;
    std::optional<int> level_guess;  // present only when detected
    std::string description;
    int tick = 0;
};

struct Action {
    std::optional<Vec2> waypoint;
    std::optional<std::string> fire_at;
    std::optional<NoveltyReport> declare;
    bool abort = false;
};

class AgentInterface {
public:
    virtual ~AgentInterface() = default;
    virtual void reset(std::shared_ptr<const KnownWorld> known) = 0;
    virtual Action act(const Observation& obs) = 0;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// Throws ConfigError listing offending fields for a malformed plan.
WorldState init_world(const ScenarioConfig& cfg, std::shared_ptr<const KnownWorld> known,
                      RngState rng);

// Pure sensor picture of the current tick.
Observation observe(const WorldState& state);

// Advances one tick. Throws std::logic_error on a terminal state.
void step(WorldState& state, const Action& action);

MissionStatus mission_status(const WorldState& state);

// Scenario-level result of one battle; the runner layers novelty ground truth
// and scoring on top.
struct BattleOutcome {
    MissionStatus status = MissionStatus::Ongoing;
    int ticks = 0;
    int targets_prosecuted = 0;
    int friendly_casualties = 0;
    bool time_exceeded = false;
    std::vector<NoveltyReport> reports;  // every declaration the agent made
    int weapons_fired = 0;
    std::vector<LaunchEvent> launch_log;
};

// One line per tick when a sink is given: flat record of positions,
// missiles, and status.
using TraceSink = std::function<void(const std::string& line)>;

BattleOutcome run_battle(const ScenarioConfig& cfg, std::shared_ptr<const KnownWorld> known,
                         AgentInterface& agent, RngState rng,
                         const TraceSink* trace = nullptr);

// Artifact constants of the engagement model.
namespace sim_constants {
inline constexpr double kInterceptRadiusKm = 0.5;
inline constexpr double kAbortRadiusKm = 1.0;
inline constexpr double kMissileWarningRadiusKm = 100.0;
inline constexpr double kDefaultAssumedRangeKm = 50.0;
}  // namespace sim_constants

} // namespace owh

#endif // OWH_SCENARIO_HPP
