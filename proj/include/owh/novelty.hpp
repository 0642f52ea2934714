// Eight-level novelty ontology, parameterized novelty specs, the built-in
// catalog, and the injector that mutates a resolved battle configuration.
//
// Levels: 1 Objects, 2 Agents, 3 Actions, 4 Relations, 5 Interactions,
// 6 Rules, 7 Goals, 8 Events. Every catalog novelty carries exactly one
// level; classify() checks that a spec's declared level is structurally
// consistent with its mutation.

#ifndef OWH_NOVELTY_HPP
#define OWH_NOVELTY_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "owh/distributions.hpp"
#include "owh/scenario.hpp"

namespace owh {

inline constexpr int kNoveltyLevelCount = 8;

// Level names of the ontology, index 1..8.
std::string novelty_level_name(int level);

// One scalar parameter write, sampled per affected entity.
struct SetParam {
    // (path, value source) pairs, applied in order; e.g. {"missile_range", tiers}.
    std::vector<std::pair<std::string, TieredSpec>> params;
};

// Static (tier-independent) boolean/semantic flag.
struct SetFlag {
    std::string path;  // mobile | decoy | pursuit | defender | status_dead | ...
    bool value = true;
};

struct AddEntity {
    std::variant<NoFireZone, TerrainPatch, SamSite> entity;
    // tier-sampled overrides of template fields, e.g. {"center.y", tiers}
    std::vector<std::pair<std::string, TieredSpec>> tiered;
};

struct SetGoal {
    SamGoal goal = SamGoal::DestroyJet;
};

struct ScheduleEventMut {
    TieredSpec tick;
    SamSite fighter;  // red fighter template
};

using Mutation = std::variant<SetParam, SetFlag, AddEntity, SetGoal, ScheduleEventMut>;

// Entity selector: "jet" | "storage" | "rules" | "world" | "sam[i]" |
// "all-sams" | "sensor[i]" | "all-sensors" | "sensors".
struct TargetSelector {
    std::string cls;
    std::optional<int> index;
    bool all = false;
};

TargetSelector parse_target(const std::string& text);

struct NoveltySpec {
    std::string id;
    int level = 1;
    std::string target;
    Mutation mutation;
    int onset_battle = 1;  // 1-based battle index at which the novelty activates
    std::string description;
};

struct ResolvedValue {
    std::string target_id;
    std::string path;
    double value = 0.0;
};

// Ground-truth record of one application, consumed by metrics.
struct AppliedNovelty {
    std::string spec_id;
    int level = 1;
    DifficultyTier tier = DifficultyTier::Easy;
    int battle_index = 1;
    std::vector<ResolvedValue> resolved;
    std::vector<std::string> affected;
    bool clamped = false;  // some draw hit the resample cap and was clamped
};

// Built-in novelties covering every ontology level.
const std::vector<NoveltySpec>& catalog();
std::optional<NoveltySpec> catalog_lookup(const std::string& id);

// Mutates `plan` in place; all concrete values come from `rng`. Draws that
// violate a hard physical constraint are resampled up to 8 times, then
// clamped to the valid boundary (flagged in the returned record).
// Throws ConfigError for unknown targets or parameter paths.
AppliedNovelty apply_novelty(ScenarioConfig& plan, const NoveltySpec& spec,
                             DifficultyTier tier, int battle_index, RngState& rng);

// Returns the declared level after validating structural consistency;
// throws ConfigError naming the violated rule otherwise.
int classify(const NoveltySpec& spec);

nlohmann::json novelty_spec_to_json(const NoveltySpec& spec);
NoveltySpec novelty_spec_from_json(const nlohmann::json& j);
nlohmann::json applied_novelty_to_json(const AppliedNovelty& a);
AppliedNovelty applied_novelty_from_json(const nlohmann::json& j);

} // namespace owh

#endif // OWH_NOVELTY_HPP
