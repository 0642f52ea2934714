#include "owh/distributions.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace owh {

const DistributionSpec& TieredSpec::for_tier(DifficultyTier tier) const {
    switch (tier) {
        case DifficultyTier::Easy: return easy;
        case DifficultyTier::Medium: return medium;
        case DifficultyTier::Hard: return hard;
    }
    throw std::logic_error("unreachable tier");
}

TieredSpec constant_tiers(double value) {
    return TieredSpec{ConstantDist{value}, ConstantDist{value}, ConstantDist{value}};
}

std::optional<std::string> validate_spec(const DistributionSpec& spec) {
    struct Checker {
        std::optional<std::string> operator()(const ConstantDist& d) const {
            if (!std::isfinite(d.value)) return "Constant value must be finite";
            return std::nullopt;
        }
        std::optional<std::string> operator()(const NormalDist& d) const {
            if (!std::isfinite(d.mean)) return "Normal mean must be finite";
            if (!(d.std > 0.0) || !std::isfinite(d.std)) return "Normal std must be > 0";
            return std::nullopt;
        }
        std::optional<std::string> operator()(const UniformDist& d) const {
            if (!std::isfinite(d.lo) || !std::isfinite(d.hi))
                return "Uniform bounds must be finite";
            if (d.lo > d.hi) return "Uniform lo <= hi violated";
            return std::nullopt;
        }
        std::optional<std::string> operator()(const DiscreteUniformDist& d) const {
            if (d.values.empty()) return "DiscreteUniform values must be non-empty";
            for (double v : d.values)
                if (!std::isfinite(v)) return "DiscreteUniform values must be finite";
            return std::nullopt;
        }
        std::optional<std::string> operator()(const BernoulliDist& d) const {
            if (!(d.p >= 0.0 && d.p <= 1.0)) return "Bernoulli p must be in [0,1]";
            return std::nullopt;
        }
        std::optional<std::string> operator()(const PoissonDist& d) const {
            if (!(d.lambda > 0.0) || !std::isfinite(d.lambda))
                return "Poisson lambda must be > 0";
            return std::nullopt;
        }
    };
    return std::visit(Checker{}, spec);
}

std::optional<std::string> validate_tiered(const TieredSpec& tiered) {
    if (auto err = validate_spec(tiered.easy)) return "easy: " + *err;
    if (auto err = validate_spec(tiered.medium)) return "medium: " + *err;
    if (auto err = validate_spec(tiered.hard)) return "hard: " + *err;
    return std::nullopt;
}

namespace {

double sample_normal(double mean, double std, RngState& rng) {
    // Marsaglia polar. Consumes a variable but deterministic number of draws.
    while (true) {
        double u = 2.0 * rng.u01() - 1.0;
        double v = 2.0 * rng.u01() - 1.0;
        double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) {
            return mean + std * u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }
}

double sample_poisson(double lambda, RngState& rng) {
    if (lambda <= 30.0) {
        // Knuth multiplication.
        const double limit = std::exp(-lambda);
        double p = 1.0;
        double k = 0.0;
        do {
            k += 1.0;
            p *= rng.u01();
        } while (p > limit);
        return k - 1.0;
    }
    double approx = std::round(sample_normal(lambda, std::sqrt(lambda), rng));
    return approx < 0.0 ? 0.0 : approx;
}

} // namespace

double sample(const DistributionSpec& spec, RngState& rng) {
    if (auto err = validate_spec(spec)) {
        throw std::invalid_argument("invalid distribution spec: " + *err);
    }
    struct Sampler {
        RngState& rng;
        double operator()(const ConstantDist& d) const { return d.value; }
        double operator()(const NormalDist& d) const {
            return sample_normal(d.mean, d.std, rng);
        }
        double operator()(const UniformDist& d) const {
            if (d.lo == d.hi) return d.lo;
            double v = d.lo + rng.u01() * (d.hi - d.lo);
            if (v >= d.hi) v = std::nextafter(d.hi, d.lo);
            return v;
        }
        double operator()(const DiscreteUniformDist& d) const {
            auto idx = static_cast<size_t>(rng.u01() * static_cast<double>(d.values.size()));
            if (idx >= d.values.size()) idx = d.values.size() - 1;
            return d.values[idx];
        }
        double operator()(const BernoulliDist& d) const {
            return rng.u01() < d.p ? 1.0 : 0.0;
        }
        double operator()(const PoissonDist& d) const {
            return sample_poisson(d.lambda, rng);
        }
    };
    return std::visit(Sampler{rng}, spec);
}

double sample_tier(const TieredSpec& tiered, DifficultyTier tier, RngState& rng) {
    return sample(tiered.for_tier(tier), rng);
}

std::string tier_name(DifficultyTier tier) {
    switch (tier) {
        case DifficultyTier::Easy: return "easy";
        case DifficultyTier::Medium: return "medium";
        case DifficultyTier::Hard: return "hard";
    }
    throw std::logic_error("unreachable tier");
}

DifficultyTier tier_from_name(const std::string& name) {
    if (name == "easy") return DifficultyTier::Easy;
    if (name == "medium") return DifficultyTier::Medium;
    if (name == "hard") return DifficultyTier::Hard;
    throw std::invalid_argument("unknown difficulty tier '" + name +
                                "' (expected easy|medium|hard)");
}

nlohmann::json spec_to_json(const DistributionSpec& spec) {
    struct Writer {
        nlohmann::json operator()(const ConstantDist& d) const {
            return {{"dist", "constant"}, {"value", d.value}};
        }
        nlohmann::json operator()(const NormalDist& d) const {
            return {{"dist", "normal"}, {"mean", d.mean}, {"std", d.std}};
        }
        nlohmann::json operator()(const UniformDist& d) const {
            return {{"dist", "uniform"}, {"lo", d.lo}, {"hi", d.hi}};
        }
        nlohmann::json operator()(const DiscreteUniformDist& d) const {
            return {{"dist", "discrete_uniform"}, {"values", d.values}};
        }
        nlohmann::json operator()(const BernoulliDist& d) const {
            return {{"dist", "bernoulli"}, {"p", d.p}};
        }
        nlohmann::json operator()(const PoissonDist& d) const {
            return {{"dist", "poisson"}, {"lambda", d.lambda}};
        }
    };
    return std::visit(Writer{}, spec);
}

namespace {

[[noreturn]] void bad_spec(const std::string& msg) {
    throw std::invalid_argument("distribution spec: " + msg);
}

void expect_keys(const nlohmann::json& j, std::initializer_list<const char*> keys) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : keys)
            if (it.key() == k) known = true;
        if (!known) bad_spec("unknown field '" + it.key() + "'");
    }
    for (const char* k : keys) {
        if (!j.contains(k)) bad_spec(std::string("missing field '") + k + "'");
    }
}

} // namespace

DistributionSpec spec_from_json(const nlohmann::json& j) {
    if (j.is_number()) {
        // Bare numbers are accepted as constants.
        return ConstantDist{j.get<double>()};
    }
    if (!j.is_object() || !j.contains("dist") || !j["dist"].is_string()) {
        bad_spec("expected an object with a 'dist' tag or a bare number");
    }
    const std::string tag = j["dist"].get<std::string>();
    DistributionSpec spec;
    if (tag == "constant") {
        expect_keys(j, {"dist", "value"});
        spec = ConstantDist{j["value"].get<double>()};
    } else if (tag == "normal") {
        expect_keys(j, {"dist", "mean", "std"});
        spec = NormalDist{j["mean"].get<double>(), j["std"].get<double>()};
    } else if (tag == "uniform") {
        expect_keys(j, {"dist", "lo", "hi"});
        spec = UniformDist{j["lo"].get<double>(), j["hi"].get<double>()};
    } else if (tag == "discrete_uniform") {
        expect_keys(j, {"dist", "values"});
        spec = DiscreteUniformDist{j["values"].get<std::vector<double>>()};
    } else if (tag == "bernoulli") {
        expect_keys(j, {"dist", "p"});
        spec = BernoulliDist{j["p"].get<double>()};
    } else if (tag == "poisson") {
        expect_keys(j, {"dist", "lambda"});
        spec = PoissonDist{j["lambda"].get<double>()};
    } else {
        bad_spec("unknown dist tag '" + tag + "'");
    }
    if (auto err = validate_spec(spec)) bad_spec(*err);
    return spec;
}

nlohmann::json tiered_to_json(const TieredSpec& tiered) {
    return {{"easy", spec_to_json(tiered.easy)},
            {"medium", spec_to_json(tiered.medium)},
            {"hard", spec_to_json(tiered.hard)}};
}

TieredSpec tiered_from_json(const nlohmann::json& j) {
    if (j.is_number() || (j.is_object() && j.contains("dist"))) {
        // A single spec applies to all three tiers.
        DistributionSpec s = spec_from_json(j);
        return TieredSpec{s, s, s};
    }
    if (!j.is_object()) bad_spec("tiered spec must be an object");
    expect_keys(j, {"easy", "medium", "hard"});
    return TieredSpec{spec_from_json(j["easy"]), spec_from_json(j["medium"]),
                      spec_from_json(j["hard"])};
}

std::string describe_spec(const DistributionSpec& spec) {
    std::ostringstream out;
    struct Printer {
        std::ostringstream& out;
        void operator()(const ConstantDist& d) const { out << d.value; }
        void operator()(const NormalDist& d) const {
            out << "N(" << d.mean << ", " << d.std << ")";
        }
        void operator()(const UniformDist& d) const {
            out << "U[" << d.lo << ", " << d.hi << ")";
        }
        void operator()(const DiscreteUniformDist& d) const {
            out << "DU{";
            for (size_t i = 0; i < d.values.size(); ++i) {
                if (i) out << ", ";
                out << d.values[i];
            }
            out << "}";
        }
        void operator()(const BernoulliDist& d) const { out << "Bernoulli(" << d.p << ")"; }
        void operator()(const PoissonDist& d) const { out << "Poisson(" << d.lambda << ")"; }
    };
    std::visit(Printer{out}, spec);
    return out.str();
}

} // namespace owh
