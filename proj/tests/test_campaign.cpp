#include <doctest.h>

#include <cmath>

#include "owh/campaign.hpp"
#include "owh/errors.hpp"

using namespace owh;
using nlohmann::json;

namespace {

const char* kMinimal = R"({"name":"m","master_seed":7,"battles":10,"trials":1})";

CampaignConfig reference_like(int battles = 10, int onset = 6) {
    json j = {{"name", "ref"},
              {"master_seed", 1337},
              {"battles", battles},
              {"trials", 2},
              {"variations",
               json::array({{{"op", "move_uniform_box"},
                             {"platform", "jet"},
                             {"box", {{"min", {-5.0, -5.0}}, {"max", {5.0, 5.0}}}}}})},
              {"novelties", json::array({{{"id", "sam_range_up"},
                                          {"tier", "hard"},
                                          {"onset_battle", onset}}})}};
    return campaign_from_json(j);
}

} // namespace

TEST_CASE("minimal config parses with defaults everywhere") {
    CampaignConfig cfg = parse_campaign(kMinimal);
    CHECK(cfg.name == "m");
    CHECK(cfg.master_seed == 7);
    CHECK(cfg.battles == 10);
    CHECK(cfg.trials == 1);
    CHECK(cfg.variations.empty());
    CHECK(cfg.novelties.empty());
    BattlePlan plan = generate_battle(cfg, 1, 1);
    CHECK(plan.scenario.jet.pos == Vec2{0.0, 0.0});
    CHECK(plan.scenario.storage.pos == Vec2{150.0, 0.0});
}

TEST_CASE("onset outside the battle count is rejected") {
    json j = json::parse(kMinimal);
    j["novelties"] = json::array(
        {{{"id", "sam_range_up"}, {"tier", "hard"}, {"onset_battle", 11}}});
    CHECK_THROWS_WITH_AS(campaign_from_json(j), doctest::Contains("onset_battle"),
                         ConfigError);
}

TEST_CASE("unknown fields are schema errors") {
    json j = json::parse(kMinimal);
    j["typo_field"] = 1;
    CHECK_THROWS_WITH_AS(campaign_from_json(j), doctest::Contains("typo_field"),
                         ConfigError);

    json j2 = json::parse(kMinimal);
    j2["base_scenario"] = {{"jet", {{"wingspan", 3}}}};
    CHECK_THROWS_WITH_AS(campaign_from_json(j2), doctest::Contains("wingspan"),
                         ConfigError);
}

TEST_CASE("unresolved platform references are rejected") {
    json j = json::parse(kMinimal);
    j["variations"] = json::array({{{"op", "move_exact"},
                                    {"platform", "sam[5]"},
                                    {"pos", {0.0, 0.0}}}});
    CHECK_THROWS_WITH_AS(campaign_from_json(j), doctest::Contains("sam[5]"), ConfigError);
}

TEST_CASE("malformed JSON is reported as a config error") {
    CHECK_THROWS_AS(parse_campaign("{\"name\": oops"), ConfigError);
}

TEST_CASE("novelty onset splits the campaign") {
    CampaignConfig cfg = reference_like(10, 6);
    auto plans = generate_battles(cfg);
    REQUIRE(plans.size() == 20);
    for (const BattlePlan& plan : plans) {
        if (plan.battle < 6) {
            CHECK(plan.applied.empty());
            CHECK(plan.scenario.sams[0].missile_range == 50.0);
        } else {
            REQUIRE(plan.applied.size() == 1);
            CHECK(plan.applied[0].spec_id == "sam_range_up");
            CHECK(plan.applied[0].battle_index == plan.battle);
            CHECK(plan.scenario.sams[0].missile_range != 50.0);
            // the briefed picture never carries the novelty
            CHECK(plan.known.sams[0].missile_range == 50.0);
        }
    }
}

TEST_CASE("post-onset values are re-sampled per battle") {
    CampaignConfig cfg = reference_like(10, 6);
    auto plans = generate_battles(cfg);
    double r6 = plans[5].scenario.sams[0].missile_range;
    double r7 = plans[6].scenario.sams[0].missile_range;
    CHECK(r6 != r7);
}

TEST_CASE("no variation, no novelty: identical scenarios with distinct seeds") {
    json j = {{"name", "flat"}, {"master_seed", 5}, {"battles", 3}, {"trials", 1}};
    CampaignConfig cfg = campaign_from_json(j);
    auto plans = generate_battles(cfg);
    REQUIRE(plans.size() == 3);
    CHECK(scenario_to_json(plans[0].scenario) == scenario_to_json(plans[1].scenario));
    CHECK(scenario_to_json(plans[1].scenario) == scenario_to_json(plans[2].scenario));
    CHECK(plans[0].seed != plans[1].seed);
    CHECK(plans[1].seed != plans[2].seed);
}

TEST_CASE("uniform box placements stay inside the box with the right mean") {
    json j = {{"name", "box"},
              {"master_seed", 99},
              {"battles", 1},
              {"trials", 1},
              {"variations",
               json::array({{{"op", "move_uniform_box"},
                             {"platform", "jet"},
                             {"box", {{"min", {0.0, 0.0}}, {"max", {10.0, 10.0}}}}}})}};
    CampaignConfig cfg = campaign_from_json(j);
    double sx = 0.0, sy = 0.0;
    const int n = 2000;
    for (int b = 0; b < n; ++b) {
        cfg.master_seed = 1000 + b;
        BattlePlan plan = generate_battle(cfg, 1, 1);
        Vec2 p = plan.scenario.jet.pos;
        CHECK(p.x >= 0.0);
        CHECK(p.x < 10.0);
        CHECK(p.y >= 0.0);
        CHECK(p.y < 10.0);
        CHECK(plan.scenario.jet.base_pos == p);
        sx += p.x;
        sy += p.y;
    }
    double se = 10.0 / std::sqrt(12.0) / std::sqrt(n);
    CHECK(std::abs(sx / n - 5.0) < 4.0 * se);
    CHECK(std::abs(sy / n - 5.0) < 4.0 * se);
}

TEST_CASE("normal box placements are rejection-sampled into the box") {
    json j = {{"name", "nbox"},
              {"master_seed", 3},
              {"battles", 1},
              {"trials", 1},
              {"variations",
               json::array({{{"op", "move_normal_box"},
                             {"platform", "sam[0]"},
                             {"mean", {100.0, 30.0}},
                             {"std", {20.0, 20.0}},  // wide: rejections guaranteed
                             {"box", {{"min", {95.0, 25.0}}, {"max", {105.0, 35.0}}}}}})}};
    CampaignConfig cfg = campaign_from_json(j);
    for (int b = 0; b < 500; ++b) {
        cfg.master_seed = 7000 + b;
        BattlePlan plan = generate_battle(cfg, 1, 1);
        Vec2 p = plan.scenario.sams[0].pos;
        CHECK(p.x >= 95.0);
        CHECK(p.x <= 105.0);
        CHECK(p.y >= 25.0);
        CHECK(p.y <= 35.0);
    }
}

TEST_CASE("serialize/parse round-trip is structural identity") {
    CampaignConfig cfg = reference_like();
    std::string text = serialize_campaign(cfg);
    CampaignConfig back = parse_campaign(text);
    CHECK(serialize_campaign(back) == text);
    CHECK(campaign_to_json(back) == campaign_to_json(cfg));
}

TEST_CASE("two serializations of the same config are byte-identical") {
    CampaignConfig cfg = reference_like();
    CHECK(serialize_campaign(cfg) == serialize_campaign(cfg));
    CHECK(config_fingerprint(cfg) == config_fingerprint(cfg));
}

TEST_CASE("serialized plans carry resolved numbers only") {
    CampaignConfig cfg = reference_like(10, 6);
    BattlePlan plan = generate_battle(cfg, 1, 7);
    std::string text = serialize_plan(plan);
    CHECK(text.find("\"dist\"") == std::string::npos);
    CHECK(text.find("normal") == std::string::npos);
    json j = json::parse(text);
    CHECK(j["applied_novelties"].size() == 1);
    CHECK(j["scenario"]["sams"][0]["missile_range"].is_number());
}

TEST_CASE("subset determinism: a single plan equals its slot in the full list") {
    CampaignConfig cfg = reference_like(10, 6);
    cfg.trials = 3;
    auto plans = generate_battles(cfg);
    for (auto [trial, battle] : {std::pair{1, 1}, {2, 7}, {3, 10}}) {
        BattlePlan alone = generate_battle(cfg, trial, battle);
        const BattlePlan& in_list = plans[(trial - 1) * 10 + (battle - 1)];
        CHECK(plan_to_json(alone) == plan_to_json(in_list));
    }
}

TEST_CASE("reproducibility: generate_battles is bit-identical across runs") {
    CampaignConfig cfg = reference_like(10, 6);
    auto a = generate_battles(cfg);
    auto b = generate_battles(cfg);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(serialize_plan(a[i]) == serialize_plan(b[i]));
    }
}

TEST_CASE("variation/novelty decoupling: dropping novelties keeps pre-onset plans bit-identical") {
    CampaignConfig with = reference_like(10, 6);
    CampaignConfig without = with;
    without.novelties.clear();
    auto pw = generate_battles(with);
    auto po = generate_battles(without);
    for (size_t i = 0; i < pw.size(); ++i) {
        if (pw[i].battle < 6) {
            CHECK(serialize_plan(pw[i]) == serialize_plan(po[i]));
        } else {
            // post-onset: only novelty-touched fields differ
            json a = scenario_to_json(pw[i].scenario);
            json b = scenario_to_json(po[i].scenario);
            a["sams"][0]["missile_range"] = 50.0;
            a["sams"][1]["missile_range"] = 50.0;
            CHECK(a == b);
        }
    }
}

TEST_CASE("campaign onset helper") {
    CHECK(campaign_onset(reference_like(10, 6)) == 6);
    CHECK(campaign_onset(parse_campaign(kMinimal)) == 11);
}

TEST_CASE("custom inline novelties are accepted and validated") {
    json j = json::parse(kMinimal);
    j["novelties"] = json::array({{{"id", "my_range"},
                                   {"level", 2},
                                   {"target", "sam[0]"},
                                   {"onset_battle", 2},
                                   {"tier", "medium"},
                                   {"mutation",
                                    {{"kind", "set_param"},
                                     {"params",
                                      {{"missile_range",
                                        {{"dist", "uniform"}, {"lo", 52.0}, {"hi", 58.0}}}}}}}}});
    CampaignConfig cfg = campaign_from_json(j);
    BattlePlan plan = generate_battle(cfg, 1, 5);
    CHECK(plan.scenario.sams[0].missile_range >= 52.0);
    CHECK(plan.scenario.sams[0].missile_range < 58.0);

    // wrong declared level is rejected at parse time
    j["novelties"][0]["level"] = 7;
    CHECK_THROWS_AS(campaign_from_json(j), ConfigError);
}

TEST_CASE("base_scenario overrides merge into the defaults") {
    json j = json::parse(kMinimal);
    j["base_scenario"] = {{"jet", {{"weapons", 5}}},
                          {"rules", {{"time_limit", 900}}}};
    CampaignConfig cfg = campaign_from_json(j);
    BattlePlan plan = generate_battle(cfg, 1, 1);
    CHECK(plan.scenario.jet.weapons_remaining == 5);
    CHECK(plan.scenario.jet.weapon_range == 20.0);  // untouched default
    CHECK(plan.scenario.rules.time_limit == 900);
    CHECK(plan.scenario.sams.size() == 2);
}
