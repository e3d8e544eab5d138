#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace neurogate::planner {

// Typed STRIPS domain model. Supported constructs: :strips, :typing,
// positive preconditions, add and delete effects. Nothing else.

struct TypeDef {
  std::string name;
  std::string parent{"object"};

  bool operator==(const TypeDef&) const = default;
};

struct PredicateDef {
  std::string name;
  std::vector<std::string> param_names;  // '?'-prefixed variables
  std::vector<std::string> param_types;

  std::size_t arity() const { return param_names.size(); }
  bool operator==(const PredicateDef&) const = default;
};

// Positive atom over variables or constants (schema level).
struct Literal {
  std::string predicate;
  std::vector<std::string> args;

  bool operator==(const Literal&) const = default;
};

struct ActionDef {
  std::string name;
  std::vector<std::string> param_names;
  std::vector<std::string> param_types;
  std::vector<Literal> preconditions;  // positive only
  std::vector<Literal> add_effects;
  std::vector<Literal> del_effects;

  bool operator==(const ActionDef&) const = default;
};

struct DomainDef {
  std::string name;
  std::vector<std::string> requirements;
  std::vector<TypeDef> types;
  std::vector<PredicateDef> predicates;
  std::vector<ActionDef> actions;

  const PredicateDef* find_predicate(std::string_view n) const;
  const ActionDef* find_action(std::string_view n) const;
  // true if `t` equals `ancestor` or derives from it ("object" accepts all)
  bool type_derives(std::string_view t, std::string_view ancestor) const;

  bool operator==(const DomainDef&) const = default;
};

struct ProblemDef {
  std::string name;
  std::string domain_name;
  std::vector<std::pair<std::string, std::string>> objects;  // name, type
  std::vector<Literal> init;                                 // ground atoms
  std::vector<Literal> goal;

  bool operator==(const ProblemDef&) const = default;
};

}  // namespace neurogate::planner
