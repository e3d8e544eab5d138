#include "neurogate/planner/verify.hpp"

#include <algorithm>

namespace neurogate::planner {

std::vector<Violation> check_logical(const GroundModel& model, const WorldState& s0,
                                     std::span<const std::uint32_t> plan_steps) {
  std::vector<Violation> out;
  WorldState state = s0;

  for (std::size_t i = 0; i < plan_steps.size(); ++i) {
    const GroundAction& a = model.action(plan_steps[i]);

    std::vector<std::uint32_t> reported;  // precondition atoms claimed by phi1/phi2

    for (std::uint32_t need : a.reachable_required) {
      if (!state.contains(need)) {
        out.push_back({1, i, a.name, "location not reachable: " + model.atom_name(need)});
      }
      reported.push_back(need);
    }

    if (a.needs_safe_configuration) {
      std::vector<std::string> none;
      const auto safe_id = model.find_atom("safe-configuration", none);
      if (safe_id) {
        if (!state.contains(*safe_id))
          out.push_back({2, i, a.name, "safe-configuration does not hold"});
        reported.push_back(*safe_id);
      }
    }

    for (std::uint32_t need : a.preconditions) {
      if (std::find(reported.begin(), reported.end(), need) != reported.end()) continue;
      if (!state.contains(need))
        out.push_back({3, i, a.name, "precondition not satisfied: " + model.atom_name(need)});
    }

    if (!applicable(state, a)) break;
    state = apply(state, a);
  }
  return out;
}

}  // namespace neurogate::planner
