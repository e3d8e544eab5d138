#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "neurogate/planner/domain.hpp"

namespace neurogate::planner {

// Closed-world state: the sorted set of ground atom ids that hold.
class WorldState {
 public:
  WorldState() = default;
  static WorldState from_atoms(std::vector<std::uint32_t> atoms);

  bool contains(std::uint32_t id) const;
  bool contains_all(std::span<const std::uint32_t> ids) const;
  const std::vector<std::uint32_t>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  WorldState apply(std::span<const std::uint32_t> adds,
                   std::span<const std::uint32_t> dels) const;

  std::uint64_t fingerprint() const;

  bool operator==(const WorldState&) const = default;

 private:
  std::vector<std::uint32_t> atoms_;
};

// One fully instantiated action. Atom id lists are sorted.
struct GroundAction {
  std::uint32_t id{0};
  std::uint32_t schema{0};  // index into DomainDef::actions
  std::string name;         // "(grasp r1 cup table)"
  std::vector<std::string> args;
  std::vector<std::uint32_t> preconditions;
  std::vector<std::uint32_t> adds;
  std::vector<std::uint32_t> deletes;
  // reachability atoms for every location-typed argument; empty when the
  // domain has no such predicate
  std::vector<std::uint32_t> reachable_required;
  bool needs_safe_configuration{false};
};

// Interned atoms and the full ground action table for one domain plus
// object set. Action order is lexicographic by (schema name, argument
// names), which fixes search order and therefore plan identity.
class GroundModel {
 public:
  GroundModel(DomainDef domain, std::vector<std::pair<std::string, std::string>> objects);

  const DomainDef& domain() const { return domain_; }
  const std::vector<std::pair<std::string, std::string>>& objects() const { return objects_; }

  // Atom interning. atom_id validates predicate name, arity and argument
  // types and throws std::invalid_argument on a mismatch.
  std::uint32_t atom_id(std::string_view predicate, std::span<const std::string> args);
  std::optional<std::uint32_t> find_atom(std::string_view predicate,
                                         std::span<const std::string> args) const;
  const std::string& atom_name(std::uint32_t id) const { return atom_names_[id]; }
  std::size_t atom_count() const { return atom_names_.size(); }

  const std::vector<GroundAction>& actions() const { return actions_; }
  const GroundAction& action(std::uint32_t id) const { return actions_[id]; }

  // Objects of a given type (respecting type hierarchy), declaration order.
  std::vector<std::string> objects_of_type(std::string_view type) const;

  WorldState state_from_literals(std::span<const Literal> lits);

  // Diagnostics for the mutual-exclusion conventions of the assistive
  // domain (holding vs empty-handed, unique at / oriented). Empty when
  // the state is consistent.
  std::vector<std::string> state_issues(const WorldState& s) const;

 private:
  std::string atom_key(std::string_view predicate, std::span<const std::string> args) const;

  DomainDef domain_;
  std::vector<std::pair<std::string, std::string>> objects_;
  std::unordered_map<std::string, std::string> object_type_;
  std::unordered_map<std::string, std::uint32_t> atom_ids_;
  std::vector<std::string> atom_names_;
  std::vector<GroundAction> actions_;
};

bool applicable(const WorldState& s, const GroundAction& a);
WorldState apply(const WorldState& s, const GroundAction& a);

}  // namespace neurogate::planner
