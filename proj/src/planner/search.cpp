#include "neurogate/planner/search.hpp"

#include <queue>
#include <unordered_map>

#include "neurogate/core/hash.hpp"

namespace neurogate::planner {

const char* to_string(PlanStatus s) {
  switch (s) {
    case PlanStatus::Found: return "found";
    case PlanStatus::NoPlan: return "no-plan";
    case PlanStatus::BudgetExceeded: return "budget-exceeded";
  }
  return "?";
}

namespace {

struct StateHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const {
    return std::size_t(core::fnv1a64(v.data(), v.size() * sizeof(std::uint32_t)));
  }
};

}  // namespace

PlanResult synthesize_plan(const GroundModel& model, const WorldState& s0, const Goal& g,
                           const SearchLimits& limits) {
  if (goal_satisfied(s0, g)) return {PlanStatus::Found, {}};

  struct Node {
    WorldState state;
    std::size_t parent;   // index into nodes
    std::uint32_t action; // action leading here
    std::size_t depth;
  };
  std::vector<Node> nodes;
  nodes.push_back({s0, SIZE_MAX, 0, 0});

  std::unordered_map<std::vector<std::uint32_t>, bool, StateHash> visited;
  visited.emplace(s0.atoms(), true);

  std::queue<std::size_t> frontier;
  frontier.push(0);

  const auto& actions = model.actions();
  while (!frontier.empty()) {
    const std::size_t cur = frontier.front();
    frontier.pop();
    if (nodes[cur].depth >= limits.max_depth) continue;

    for (const GroundAction& a : actions) {
      if (!applicable(nodes[cur].state, a)) continue;
      if (!nodes[cur].state.contains_all(a.reachable_required)) continue;
      WorldState next = apply(nodes[cur].state, a);
      const auto [it, fresh] = visited.emplace(next.atoms(), true);
      if (!fresh) continue;
      if (visited.size() > limits.max_visited) return {PlanStatus::BudgetExceeded, {}};

      nodes.push_back({std::move(next), cur, a.id, nodes[cur].depth + 1});
      const std::size_t ni = nodes.size() - 1;
      if (goal_satisfied(nodes[ni].state, g)) {
        std::vector<std::uint32_t> steps;
        for (std::size_t n = ni; n != 0; n = nodes[n].parent) steps.push_back(nodes[n].action);
        std::reverse(steps.begin(), steps.end());
        return {PlanStatus::Found, std::move(steps)};
      }
      frontier.push(ni);
    }
  }
  return {PlanStatus::NoPlan, {}};
}

std::string plan_to_string(const GroundModel& model, const PlanResult& plan) {
  if (plan.status != PlanStatus::Found) return to_string(plan.status);
  if (plan.steps.empty()) return "[]";
  std::string out = "[";
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    if (i) out += " ";
    out += model.action(plan.steps[i]).name;
  }
  return out + "]";
}

}  // namespace neurogate::planner
