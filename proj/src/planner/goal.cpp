#include "neurogate/planner/goal.hpp"

#include <stdexcept>

namespace neurogate::planner {

namespace {

const std::string& require(const std::optional<std::string>& v, const char* what,
                           const char* intent) {
  if (!v)
    throw std::invalid_argument(std::string("task context lacks a ") + what + " for " + intent);
  return *v;
}

}  // namespace

Goal ground_to_goal(GroundModel& model, intent::Action intent, const TaskContext& ctx) {
  Goal g;
  std::vector<std::string> args;
  switch (intent) {
    case intent::Action::Grasp: {
      const auto& r = require(ctx.robot, "robot", "GRASP");
      const auto& i = require(ctx.item, "item", "GRASP");
      args = {r, i};
      g.atoms.push_back(model.atom_id("holding", args));
      break;
    }
    case intent::Action::Release: {
      const auto& r = require(ctx.robot, "robot", "RELEASE");
      const auto& i = require(ctx.item, "item", "RELEASE");
      const auto& l = require(ctx.location, "location", "RELEASE");
      args = {i, l};
      g.atoms.push_back(model.atom_id("item-at", args));
      args = {r};
      g.atoms.push_back(model.atom_id("empty-handed", args));
      break;
    }
    case intent::Action::MoveTo: {
      const auto& r = require(ctx.robot, "robot", "MOVE_TO");
      const auto& l = require(ctx.location, "location", "MOVE_TO");
      args = {r, l};
      g.atoms.push_back(model.atom_id("at", args));
      break;
    }
    case intent::Action::Rotate: {
      const auto& r = require(ctx.robot, "robot", "ROTATE");
      const auto& o = require(ctx.orientation, "orientation", "ROTATE");
      args = {r, o};
      g.atoms.push_back(model.atom_id("oriented", args));
      break;
    }
  }
  std::sort(g.atoms.begin(), g.atoms.end());
  g.description = "";
  for (std::uint32_t id : g.atoms) {
    if (!g.description.empty()) g.description += " ";
    g.description += model.atom_name(id);
  }
  return g;
}

bool goal_satisfied(const WorldState& s, const Goal& g) { return s.contains_all(g.atoms); }

}  // namespace neurogate::planner
