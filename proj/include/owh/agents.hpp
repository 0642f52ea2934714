// Reference agents.
//
// BaselineAgent flies the briefed mission: route to a weapon release point
// while keeping clear of every briefed SAM envelope, strike, egress. It never
// declares novelty and never aborts.
//
// AwareAgent flies the identical policy until one of its detection triggers
// fires; it then declares the novelty (characterized by ontology level),
// and accommodates: widened standoff after an unexpected missile launch,
// abort-and-return for lost sensing or unresponsive weapons.

#ifndef OWH_AGENTS_HPP
#define OWH_AGENTS_HPP

#include <memory>
#include <string>
#include <vector>

#include "owh/scenario.hpp"

namespace owh {

// Detection/standoff constants, fixed once against the reference scenario.
namespace agent_constants {
inline constexpr double kStandoffMarginKm = 2.0;   // kept beyond assumed range
inline constexpr double kEnvelopeSlackKm = 1.0;    // launch-surprise threshold
inline constexpr double kRangePadKm = 4.0;         // added to observed launch distance
inline constexpr double kTrackJumpKm = 1.2;        // implausible per-tick displacement
inline constexpr int kTracksLostTicks = 3;         // empty picture ticks before level 4
}  // namespace agent_constants

class BaselineAgent final : public AgentInterface {
public:
    BaselineAgent();
    ~BaselineAgent() override;
    void reset(std::shared_ptr<const KnownWorld> known) override;
    Action act(const Observation& obs) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

class AwareAgent final : public AgentInterface {
public:
    AwareAgent();
    ~AwareAgent() override;
    void reset(std::shared_ptr<const KnownWorld> known) override;
    Action act(const Observation& obs) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// nullptr for unknown names; valid names are listed by agent_names().
std::unique_ptr<AgentInterface> make_agent(const std::string& name);
std::vector<std::string> agent_names();

} // namespace owh

#endif // OWH_AGENTS_HPP
