#pragma once

#include "neurogate/planner/ground.hpp"

namespace neurogate::planner {

// The three plan-level invariants:
//   phi1: every location argument of every step is reachable when the step
//         would run (this covers more than schema preconditions: item
//         locations of grasp/release count too)
//   phi2: safe-configuration holds whenever a step's schema demands it
//   phi3: every step's remaining preconditions hold in its predecessor
//         state
struct Violation {
  int phi{0};          // 1, 2 or 3
  std::size_t step{0}; // plan position
  std::string action;
  std::string message;
};

// Walks the plan from s0, collecting violations per step in phi order.
// Facts already reported under phi1 or phi2 are not re-reported under
// phi3. The walk advances through applicable steps and stops at the first
// inapplicable one, whose successors cannot be judged faithfully.
// An empty result means the plan verifies.
std::vector<Violation> check_logical(const GroundModel& model, const WorldState& s0,
                                     std::span<const std::uint32_t> plan_steps);

}  // namespace neurogate::planner
