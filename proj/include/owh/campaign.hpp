// Declarative campaign configs and their compilation into fully resolved
// per-battle plans.
//
// A campaign is trials x battles. Every battle re-samples the configured
// placement variations; novelties additionally mutate battles at or after
// their onset index. Per-plan streams derive positionally from the master
// seed ("trial-i/battle-j"), so any single plan regenerates identically
// whether built alone or as part of the full list.

#ifndef OWH_CAMPAIGN_HPP
#define OWH_CAMPAIGN_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "owh/novelty.hpp"
#include "owh/scenario.hpp"

namespace owh {

struct MoveExact {
    std::string platform;
    Vec2 pos;
};

struct MoveUniformBox {
    std::string platform;
    Vec2 box_min;
    Vec2 box_max;
};

// Rejection-sampled normal placement; after 64 tries the draw is clamped
// into the box.
struct MoveNormalBox {
    std::string platform;
    Vec2 mean;
    Vec2 std;
    Vec2 box_min;
    Vec2 box_max;
};

using Variation = std::variant<MoveExact, MoveUniformBox, MoveNormalBox>;

struct CampaignNovelty {
    NoveltySpec spec;
    DifficultyTier tier = DifficultyTier::Easy;
};

struct CampaignConfig {
    std::string name;
    uint64_t master_seed = 0;
    int battles = 1;
    int trials = 1;
    nlohmann::json base_scenario = nlohmann::json::object();  // overrides of defaults
    std::vector<Variation> variations;
    std::vector<CampaignNovelty> novelties;
};

struct BattlePlan {
    int trial = 1;   // 1-based
    int battle = 1;  // 1-based
    uint64_t seed = 0;
    ScenarioConfig scenario;  // ground truth, novelties applied
    ScenarioConfig known;     // briefed picture: variations only
    std::vector<AppliedNovelty> applied;  // empty before onset
};

// Strict parse; throws ConfigError with field diagnostics. Catalog novelty
// references are expanded into full inline specs.
CampaignConfig parse_campaign(const std::string& text);
CampaignConfig campaign_from_json(const nlohmann::json& j);

nlohmann::json campaign_to_json(const CampaignConfig& cfg);

// Canonical form: sorted keys, stable float formatting. Two serializations
// of the same config are byte-identical.
std::string serialize_campaign(const CampaignConfig& cfg);

nlohmann::json plan_to_json(const BattlePlan& plan);
std::string serialize_plan(const BattlePlan& plan);

// Static checks beyond the schema: ranges, platform references, novelty
// targets (via a dry-run application). Throws ConfigError.
void validate_campaign(const CampaignConfig& cfg);

// Positional generation; generate_battles returns (trial, battle)
// lexicographic order.
BattlePlan generate_battle(const CampaignConfig& cfg, int trial, int battle);
std::vector<BattlePlan> generate_battles(const CampaignConfig& cfg);

// First battle index with any active novelty; battles + 1 when none.
int campaign_onset(const CampaignConfig& cfg);

// FNV-1a fingerprint of the canonical serialization.
uint64_t config_fingerprint(const CampaignConfig& cfg);

} // namespace owh

#endif // OWH_CAMPAIGN_HPP
