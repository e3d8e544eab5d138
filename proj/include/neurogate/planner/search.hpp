#pragma once

#include "neurogate/planner/goal.hpp"
#include "neurogate/planner/ground.hpp"

namespace neurogate::planner {

enum class PlanStatus { Found, NoPlan, BudgetExceeded };

const char* to_string(PlanStatus s);

struct PlanResult {
  PlanStatus status{PlanStatus::NoPlan};
  std::vector<std::uint32_t> steps;  // ground action ids, execution order

  bool found() const { return status == PlanStatus::Found; }
  bool operator==(const PlanResult&) const = default;
};

struct SearchLimits {
  std::size_t max_depth{64};
  std::size_t max_visited{200000};
};

// Breadth-first search over the ground action table, so the returned plan
// is shortest; ties resolve to the first plan in the table's lexicographic
// action order, which makes results deterministic byte for byte.
//
// Successors are restricted to actions that are applicable AND whose
// location arguments are currently reachable. Plans that come out of here
// therefore always pass check_logical.
//
// NoPlan when the goal is unreachable within max_depth; BudgetExceeded
// when the visited-state cap is hit first.
PlanResult synthesize_plan(const GroundModel& model, const WorldState& s0, const Goal& g,
                           const SearchLimits& limits = {});

std::string plan_to_string(const GroundModel& model, const PlanResult& plan);

}  // namespace neurogate::planner
