// Parametric distribution specs with difficulty tiers.
//
// A DistributionSpec is a tagged value generator (constant, normal, uniform,
// discrete uniform, bernoulli, poisson). A TieredSpec bundles an easy, a
// medium, and a hard spec for the same quantity. Sampling is fully
// deterministic given an RngState:
//   - normal uses the Marsaglia polar method,
//   - poisson uses Knuth multiplication for lambda <= 30 and a rounded
//     normal approximation above,
//   - uniform is half-open [lo, hi).

#ifndef OWH_DISTRIBUTIONS_HPP
#define OWH_DISTRIBUTIONS_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "owh/rng.hpp"

#include <nlohmann/json_fwd.hpp>

namespace owh {

struct ConstantDist {
    double value = 0.0;
};
struct NormalDist {
    double mean = 0.0;
    double std = 1.0;
};
struct UniformDist {
    double lo = 0.0;
    double hi = 1.0;
};
struct DiscreteUniformDist {
    std::vector<double> values;
};
struct BernoulliDist {
    double p = 0.5;
};
struct PoissonDist {
    double lambda = 1.0;
};

using DistributionSpec = std::variant<ConstantDist, NormalDist, UniformDist,
                                      DiscreteUniformDist, BernoulliDist, PoissonDist>;

enum class DifficultyTier { Easy, Medium, Hard };

struct TieredSpec {
    DistributionSpec easy;
    DistributionSpec medium;
    DistributionSpec hard;

    const DistributionSpec& for_tier(DifficultyTier tier) const;
};

// Shorthand for a tier-independent value.
TieredSpec constant_tiers(double value);

// nullopt when the spec's parameter constraints hold; otherwise a message
// naming the violated constraint.
std::optional<std::string> validate_spec(const DistributionSpec& spec);
std::optional<std::string> validate_tiered(const TieredSpec& tiered);

// Draws one value. Throws std::invalid_argument for an invalid spec.
double sample(const DistributionSpec& spec, RngState& rng);
double sample_tier(const TieredSpec& tiered, DifficultyTier tier, RngState& rng);

std::string tier_name(DifficultyTier tier);
DifficultyTier tier_from_name(const std::string& name);

// Textual encoding used inside campaign configs, e.g.
// {"dist":"normal","mean":50.0,"std":2.0}.
nlohmann::json spec_to_json(const DistributionSpec& spec);
DistributionSpec spec_from_json(const nlohmann::json& j);
nlohmann::json tiered_to_json(const TieredSpec& tiered);
TieredSpec tiered_from_json(const nlohmann::json& j);

std::string describe_spec(const DistributionSpec& spec);

} // namespace owh

#endif // OWH_DISTRIBUTIONS_HPP
