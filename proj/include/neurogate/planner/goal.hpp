#pragma once

#include <optional>
#include <string>
#include <vector>

#include "neurogate/intent/posterior.hpp"
#include "neurogate/planner/ground.hpp"

namespace neurogate::planner {

// The session objects an intent refers to. Fields may stay empty when the
// corresponding intents never occur.
struct TaskContext {
  std::optional<std::string> robot;
  std::optional<std::string> item;
  std::optional<std::string> location;
  std::optional<std::string> orientation;
};

struct Goal {
  std::vector<std::uint32_t> atoms;  // sorted
  std::string description;
};

// Maps a decoded intent onto goal atoms:
//   GRASP    -> holding(robot, item)
//   RELEASE  -> item-at(item, location) and empty-handed(robot)
//   MOVE_TO  -> at(robot, location)
//   ROTATE   -> oriented(robot, orientation)
// Throws std::invalid_argument when the context lacks a needed object or
// the objects do not exist in the model.
Goal ground_to_goal(GroundModel& model, intent::Action intent, const TaskContext& ctx);

bool goal_satisfied(const WorldState& s, const Goal& g);

}  // namespace neurogate::planner
