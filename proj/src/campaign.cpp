#include "owh/campaign.hpp"

#include <algorithm>
#include <cmath>

#include "owh/errors.hpp"

namespace owh {

using nlohmann::json;

namespace {

Vec2* resolve_platform(ScenarioConfig& cfg, const std::string& platform) {
    if (platform == "jet") return &cfg.jet.pos;
    if (platform == "storage") return &cfg.storage.pos;
    auto bracket = platform.find('[');
    if (platform.rfind("sam[", 0) == 0 && platform.back() == ']') {
        std::string idx = platform.substr(bracket + 1, platform.size() - bracket - 2);
        if (!idx.empty() && idx.find_first_not_of("0123456789") == std::string::npos) {
            size_t i = std::stoul(idx);
            if (i < cfg.sams.size()) return &cfg.sams[i].pos;
        }
        return nullptr;
    }
    return nullptr;
}

const std::string& variation_platform(const Variation& v) {
    return std::visit([](const auto& op) -> const std::string& { return op.platform; }, v);
}

void apply_variation(ScenarioConfig& cfg, const Variation& v, RngState& rng) {
    Vec2* pos = resolve_platform(cfg, variation_platform(v));
    if (!pos) {
        throw ConfigError("variation: unresolved platform reference '" +
                          variation_platform(v) + "'");
    }
    struct Applier {
        ScenarioConfig& cfg;
        Vec2* pos;
        RngState& rng;
        void operator()(const MoveExact& op) const { *pos = op.pos; }
        void operator()(const MoveUniformBox& op) const {
            double x = op.box_min.x + rng.u01() * (op.box_max.x - op.box_min.x);
            double y = op.box_min.y + rng.u01() * (op.box_max.y - op.box_min.y);
            *pos = {x, y};
        }
        void operator()(const MoveNormalBox& op) const {
            NormalDist nx{op.mean.x, std::max(op.std.x, 1e-12)};
            NormalDist ny{op.mean.y, std::max(op.std.y, 1e-12)};
            Vec2 p;
            bool inside = false;
            for (int attempt = 0; attempt < 64 && !inside; ++attempt) {
                p = {sample(DistributionSpec{nx}, rng), sample(DistributionSpec{ny}, rng)};
                inside = p.x >= op.box_min.x && p.x <= op.box_max.x && p.y >= op.box_min.y &&
                         p.y <= op.box_max.y;
            }
            if (!inside) {
                p.x = std::clamp(p.x, op.box_min.x, op.box_max.x);
                p.y = std::clamp(p.y, op.box_min.y, op.box_max.y);
            }
            *pos = p;
        }
    };
    std::visit(Applier{cfg, pos, rng}, v);
    // Moving the jet moves its home base with it: the start point is the base.
    if (variation_platform(v) == "jet") cfg.jet.base_pos = cfg.jet.pos;
}

} // namespace

int campaign_onset(const CampaignConfig& cfg) {
    int onset = cfg.battles + 1;
    for (const CampaignNovelty& n : cfg.novelties) {
        onset = std::min(onset, n.spec.onset_battle);
    }
    return onset;
}

void validate_campaign(const CampaignConfig& cfg) {
    if (cfg.battles < 1) throw ConfigError("campaign: battles must be >= 1");
    if (cfg.trials < 1) throw ConfigError("campaign: trials must be >= 1");

    ScenarioConfig base = apply_scenario_overrides(default_scenario(), cfg.base_scenario);
    auto errors = validate_scenario(base);
    if (!errors.empty()) {
        std::string msg = "campaign: invalid base_scenario:";
        for (const auto& e : errors) msg += "\n  - " + e;
        throw ConfigError(msg);
    }

    for (const Variation& v : cfg.variations) {
        ScenarioConfig probe = base;
        if (!resolve_platform(probe, variation_platform(v))) {
            throw ConfigError("campaign: unresolved platform reference '" +
                              variation_platform(v) + "' in variations");
        }
        if (const MoveUniformBox* u = std::get_if<MoveUniformBox>(&v)) {
            if (u->box_min.x > u->box_max.x || u->box_min.y > u->box_max.y)
                throw ConfigError("campaign: move_uniform_box: box min <= max violated");
        }
        if (const MoveNormalBox* n = std::get_if<MoveNormalBox>(&v)) {
            if (n->box_min.x > n->box_max.x || n->box_min.y > n->box_max.y)
                throw ConfigError("campaign: move_normal_box: box min <= max violated");
        }
    }

    for (const CampaignNovelty& n : cfg.novelties) {
        if (n.spec.onset_battle < 1 || n.spec.onset_battle > cfg.battles) {
            throw ConfigError("campaign: novelty '" + n.spec.id + "' onset_battle " +
                              std::to_string(n.spec.onset_battle) + " outside [1, " +
                              std::to_string(cfg.battles) + "]");
        }
        classify(n.spec);
        // Dry-run against the base roster to catch bad targets/paths now.
        ScenarioConfig probe = base;
        RngState probe_rng(0xD1CEu);
        apply_novelty(probe, n.spec, n.tier, n.spec.onset_battle, probe_rng);
    }
}

BattlePlan generate_battle(const CampaignConfig& cfg, int trial, int battle) {
    BattlePlan plan;
    plan.trial = trial;
    plan.battle = battle;

    RngState plan_rng = RngState(cfg.master_seed)
                            .derive("trial-" + std::to_string(trial) + "/battle-" +
                                    std::to_string(battle));
    plan.seed = plan_rng.derive("sim").seed();

    ScenarioConfig world = apply_scenario_overrides(default_scenario(), cfg.base_scenario);
    RngState var_rng = plan_rng.derive("variations");
    for (const Variation& v : cfg.variations) {
        apply_variation(world, v, var_rng);
    }
    plan.known = world;

    for (const CampaignNovelty& n : cfg.novelties) {
        if (battle < n.spec.onset_battle) continue;
        RngState nov_rng = plan_rng.derive("novelty/" + n.spec.id);
        plan.applied.push_back(apply_novelty(world, n.spec, n.tier, battle, nov_rng));
    }
    plan.scenario = world;
    return plan;
}

std::vector<BattlePlan> generate_battles(const CampaignConfig& cfg) {
    validate_campaign(cfg);
    std::vector<BattlePlan> plans;
    plans.reserve(static_cast<size_t>(cfg.trials) * static_cast<size_t>(cfg.battles));
    for (int trial = 1; trial <= cfg.trials; ++trial) {
        for (int battle = 1; battle <= cfg.battles; ++battle) {
            plans.push_back(generate_battle(cfg, trial, battle));
        }
    }
    return plans;
}

// ---------------------------------------------------------------------------
// Parsing / serialization
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void campaign_error(const std::string& msg) {
    throw ConfigError("campaign config: " + msg);
}

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed,
                std::initializer_list<const char*> required) {
    if (!j.is_object()) campaign_error(where + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) known = true;
        if (!known) campaign_error(where + ": unknown field '" + it.key() + "'");
    }
    for (const char* k : required) {
        if (!j.contains(k)) campaign_error(where + ": missing field '" + k + "'");
    }
}

Vec2 vec_from(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        campaign_error(where + ": expected [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

json vec_to(Vec2 v) { return json::array({v.x, v.y}); }

Variation variation_from_json(const json& j, const std::string& where) {
    check_keys(j, where, {"op", "platform", "pos", "box", "mean", "std"}, {"op", "platform"});
    const std::string op = j["op"].get<std::string>();
    const std::string platform = j["platform"].get<std::string>();
    if (op == "move_exact") {
        check_keys(j, where, {"op", "platform", "pos"}, {"op", "platform", "pos"});
        return MoveExact{platform, vec_from(j["pos"], where + ".pos")};
    }
    if (op == "move_uniform_box") {
        check_keys(j, where, {"op", "platform", "box"}, {"op", "platform", "box"});
        check_keys(j["box"], where + ".box", {"min", "max"}, {"min", "max"});
        return MoveUniformBox{platform, vec_from(j["box"]["min"], where + ".box.min"),
                              vec_from(j["box"]["max"], where + ".box.max")};
    }
    if (op == "move_normal_box") {
        check_keys(j, where, {"op", "platform", "mean", "std", "box"},
                   {"op", "platform", "mean", "std", "box"});
        check_keys(j["box"], where + ".box", {"min", "max"}, {"min", "max"});
        return MoveNormalBox{platform, vec_from(j["mean"], where + ".mean"),
                             vec_from(j["std"], where + ".std"),
                             vec_from(j["box"]["min"], where + ".box.min"),
                             vec_from(j["box"]["max"], where + ".box.max")};
    }
    campaign_error(where + ": unknown op '" + op +
                   "' (expected move_exact|move_uniform_box|move_normal_box)");
}

json variation_to_json(const Variation& v) {
    struct Writer {
        json operator()(const MoveExact& op) const {
            return {{"op", "move_exact"}, {"platform", op.platform}, {"pos", vec_to(op.pos)}};
        }
        json operator()(const MoveUniformBox& op) const {
            return {{"op", "move_uniform_box"},
                    {"platform", op.platform},
                    {"box", {{"min", vec_to(op.box_min)}, {"max", vec_to(op.box_max)}}}};
        }
        json operator()(const MoveNormalBox& op) const {
            return {{"op", "move_normal_box"},
                    {"platform", op.platform},
                    {"mean", vec_to(op.mean)},
                    {"std", vec_to(op.std)},
                    {"box", {{"min", vec_to(op.box_min)}, {"max", vec_to(op.box_max)}}}};
        }
    };
    return std::visit(Writer{}, v);
}

CampaignNovelty campaign_novelty_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) campaign_error(where + ": expected an object");
    if (!j.contains("tier")) campaign_error(where + ": missing field 'tier'");
    CampaignNovelty out;
    out.tier = tier_from_name(j["tier"].get<std::string>());

    if (j.contains("mutation")) {
        // Fully inline spec.
        json spec = j;
        spec.erase("tier");
        out.spec = novelty_spec_from_json(spec);
        classify(out.spec);
        return out;
    }
    check_keys(j, where, {"id", "tier", "onset_battle", "target"}, {"id", "tier"});
    const std::string id = j["id"].get<std::string>();
    auto built_in = catalog_lookup(id);
    if (!built_in) {
        campaign_error(where + ": '" + id +
                       "' is not a built-in novelty and no inline mutation was given");
    }
    out.spec = *built_in;
    if (j.contains("onset_battle")) out.spec.onset_battle = j["onset_battle"].get<int>();
    if (j.contains("target")) out.spec.target = j["target"].get<std::string>();
    return out;
}

} // namespace

CampaignConfig campaign_from_json(const json& j) {
    check_keys(j, "campaign",
               {"name", "master_seed", "battles", "trials", "base_scenario", "variations",
                "novelties"},
               {"name", "master_seed", "battles", "trials"});
    CampaignConfig cfg;
    cfg.name = j["name"].get<std::string>();
    cfg.master_seed = j["master_seed"].get<uint64_t>();
    cfg.battles = j["battles"].get<int>();
    cfg.trials = j["trials"].get<int>();
    cfg.base_scenario = j.value("base_scenario", json::object());
    if (j.contains("variations")) {
        if (!j["variations"].is_array()) campaign_error("variations: expected an array");
        for (size_t i = 0; i < j["variations"].size(); ++i) {
            cfg.variations.push_back(variation_from_json(
                j["variations"][i], "variations[" + std::to_string(i) + "]"));
        }
    }
    if (j.contains("novelties")) {
        if (!j["novelties"].is_array()) campaign_error("novelties: expected an array");
        for (size_t i = 0; i < j["novelties"].size(); ++i) {
            cfg.novelties.push_back(campaign_novelty_from_json(
                j["novelties"][i], "novelties[" + std::to_string(i) + "]"));
        }
    }
    validate_campaign(cfg);
    return cfg;
}

CampaignConfig parse_campaign(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("campaign config: ") + e.what());
    }
    return campaign_from_json(j);
}

json campaign_to_json(const CampaignConfig& cfg) {
    json variations = json::array();
    for (const Variation& v : cfg.variations) variations.push_back(variation_to_json(v));
    json novelties = json::array();
    for (const CampaignNovelty& n : cfg.novelties) {
        json spec = novelty_spec_to_json(n.spec);
        spec["tier"] = tier_name(n.tier);
        novelties.push_back(spec);
    }
    return {{"name", cfg.name},
            {"master_seed", cfg.master_seed},
            {"battles", cfg.battles},
            {"trials", cfg.trials},
            {"base_scenario", cfg.base_scenario},
            {"variations", variations},
            {"novelties", novelties}};
}

std::string serialize_campaign(const CampaignConfig& cfg) {
    return campaign_to_json(cfg).dump(2) + "\n";
}

json plan_to_json(const BattlePlan& plan) {
    json applied = json::array();
    for (const AppliedNovelty& a : plan.applied) applied.push_back(applied_novelty_to_json(a));
    return {{"trial", plan.trial},
            {"battle", plan.battle},
            {"seed", plan.seed},
            {"scenario", scenario_to_json(plan.scenario)},
            {"known", scenario_to_json(plan.known)},
            {"applied_novelties", applied}};
}

std::string serialize_plan(const BattlePlan& plan) {
    return plan_to_json(plan).dump(2) + "\n";
}

uint64_t config_fingerprint(const CampaignConfig& cfg) {
    return fnv1a64(serialize_campaign(cfg));
}

} // namespace owh
